#include "ctfa/corr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctfa/error.hpp"

namespace ctfa {

CorrelationMatrix::CorrelationMatrix(const Matrix& entries, CorrelationKind kind, double tol)
    : entries_(entries), kind_(kind) {
    const auto p = entries.rows();
    if (p < 1 || entries.cols() != p) {
        throw Error(ErrorKind::DimensionError, "correlation matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < p; ++i) {
        if (!std::isfinite(entries(i, i)) || std::abs(entries(i, i) - 1.0) > tol) {
            throw Error(ErrorKind::InvalidArgument,
                        "diagonal entry " + std::to_string(i) + " is not 1");
        }
        entries_(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < p; ++j) {
            const double a = entries(i, j);
            if (!std::isfinite(a) || std::abs(a - entries(j, i)) > tol) {
                throw Error(ErrorKind::InvalidArgument, "matrix is not symmetric at (" +
                                                            std::to_string(i) + ", " +
                                                            std::to_string(j) + ")");
            }
            if (std::abs(a) > 1.0 + tol) {
                throw Error(ErrorKind::InvalidArgument, "off-diagonal magnitude exceeds 1");
            }
            const double v = std::clamp(a, -1.0, 1.0);
            entries_(i, j) = v;
            entries_(j, i) = v;
        }
    }
}

CorrelationMatrix CorrelationMatrix::identity(int p, CorrelationKind kind) {
    return CorrelationMatrix(Matrix::Identity(p, p), kind);
}

EdgeSet::EdgeSet(int p, std::vector<Edge> edges) : p_(p), edges_(std::move(edges)) {
    for (auto& e : edges_) {
        if (e.first > e.second) std::swap(e.first, e.second);
        if (e.first < 0 || e.second >= p_ || e.first == e.second) {
            throw Error(ErrorKind::InvalidArgument, "edge index out of range or self-loop");
        }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool EdgeSet::contains(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

std::vector<std::vector<int>> EdgeSet::adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(p_));
    for (const auto& [i, j] : edges_) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

EdgeSet EdgeSet::complement() const {
    std::vector<Edge> out;
    auto it = edges_.begin();
    for (int i = 0; i < p_; ++i) {
        for (int j = i + 1; j < p_; ++j) {
            if (it != edges_.end() && *it == Edge{i, j}) {
                ++it;
            } else {
                out.emplace_back(i, j);
            }
        }
    }
    EdgeSet c(p_);
    c.edges_ = std::move(out);
    return c;
}

bool EdgeSet::is_subset_of(const EdgeSet& other) const {
    return p_ == other.p_ && std::includes(other.edges_.begin(), other.edges_.end(),
                                           edges_.begin(), edges_.end());
}

namespace {

void check_data(const Matrix& data) {
    if (data.rows() < 2) {
        throw Error(ErrorKind::DimensionError, "need at least 2 observations");
    }
    if (data.cols() < 1) {
        throw Error(ErrorKind::DimensionError, "need at least 1 column");
    }
}

}  // namespace

CorrelationMatrix sample_correlation(const Matrix& data) {
    check_data(data);
    const int n = static_cast<int>(data.rows());
    const int p = static_cast<int>(data.cols());

    Matrix z(n, p);
    int bad_column = -1;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < p; ++j) {
        const double mean = data.col(j).mean();
        auto centered = (data.col(j).array() - mean).matrix();
        const double norm = centered.norm();
        if (norm == 0.0 || !std::isfinite(norm)) {
#pragma omp critical
            if (bad_column < 0 || j < bad_column) bad_column = j;
            z.col(j).setZero();
        } else {
            z.col(j) = centered / norm;
        }
    }
    if (bad_column >= 0) {
        throw Error(ErrorKind::ZeroVarianceColumn, "column " + std::to_string(bad_column));
    }

    Matrix r = Matrix::Identity(p, p);
#pragma omp parallel for schedule(dynamic, 8)
    for (int j = 0; j < p; ++j) {
        for (int i = 0; i < j; ++i) {
            const double v = std::clamp(z.col(i).dot(z.col(j)), -1.0, 1.0);
            r(i, j) = v;
            r(j, i) = v;
        }
    }
    return CorrelationMatrix(r, CorrelationKind::Sample);
}

EdgeSet threshold_edges(const CorrelationMatrix& R, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "threshold must lie in [0, 1]");
    }
    const int p = R.p();
    std::vector<std::vector<Edge>> rows(static_cast<std::size_t>(p));
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            if (std::abs(R(i, j)) > tau) rows[i].emplace_back(i, j);
        }
    }
    std::vector<Edge> edges;
    for (auto& row : rows) edges.insert(edges.end(), row.begin(), row.end());
    return EdgeSet(p, std::move(edges));
}

ThresholdGrid make_grid(std::vector<double> values) {
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "threshold outside [0, 1]");
        }
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty()) throw Error(ErrorKind::EmptyGrid, "no thresholds");
    return ThresholdGrid{std::move(values), GridMode::unique()};
}

ThresholdGrid candidate_thresholds(const CorrelationMatrix& R, GridMode mode) {
    const int p = R.p();
    if (p < 2) throw Error(ErrorKind::EmptyGrid, "need at least two variables");

    ThresholdGrid grid;
    grid.mode = mode;
    if (mode.kind == GridMode::Kind::Equidistant) {
        if (mode.m < 1) throw Error(ErrorKind::EmptyGrid, "equidistant grid needs m >= 1");
        grid.values.reserve(static_cast<std::size_t>(mode.m));
        for (int k = 1; k <= mode.m; ++k) {
            grid.values.push_back(static_cast<double>(k) / (mode.m + 1));
        }
        return grid;
    }

    grid.values.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) grid.values.push_back(std::abs(R(i, j)));
    }
    std::sort(grid.values.begin(), grid.values.end());
    grid.values.erase(std::unique(grid.values.begin(), grid.values.end()), grid.values.end());
    return grid;
}

namespace serial {

CorrelationMatrix sample_correlation(const Matrix& data) {
    check_data(data);
    const auto n = data.rows();
    const auto p = data.cols();
    Vector mean = data.colwise().mean().transpose();
    Vector ss(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        double acc = 0.0;
        for (Eigen::Index t = 0; t < n; ++t) {
            const double c = data(t, j) - mean(j);
            acc += c * c;
        }
        if (acc == 0.0) {
            throw Error(ErrorKind::ZeroVarianceColumn, "column " + std::to_string(j));
        }
        ss(j) = acc;
    }
    Matrix r = Matrix::Identity(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            double acc = 0.0;
            for (Eigen::Index t = 0; t < n; ++t) {
                acc += (data(t, i) - mean(i)) * (data(t, j) - mean(j));
            }
            const double v = std::clamp(acc / std::sqrt(ss(i) * ss(j)), -1.0, 1.0);
            r(i, j) = v;
            r(j, i) = v;
        }
    }
    return CorrelationMatrix(r, CorrelationKind::Sample);
}

EdgeSet threshold_edges(const CorrelationMatrix& R, double tau) {
    std::vector<Edge> edges;
    for (int i = 0; i < R.p(); ++i) {
        for (int j = i + 1; j < R.p(); ++j) {
            if (std::abs(R(i, j)) > tau) edges.emplace_back(i, j);
        }
    }
    return EdgeSet(R.p(), std::move(edges));
}

}  // namespace serial

}  // namespace ctfa
