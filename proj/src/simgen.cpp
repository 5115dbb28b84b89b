#include "ctfa/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ctfa/error.hpp"

namespace ctfa {

void SimConfig::validate() const {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be >= 1");
    if (children_per_factor < 1) throw Error(ErrorKind::InvalidArgument, "children_per_factor must be >= 1");
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "n must be >= 2");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha outside [0, 1]");
    if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorKind::InvalidArgument, "beta outside [0, 1]");
    if (loading_range.first > loading_range.second || phi_range.first > phi_range.second) {
        throw Error(ErrorKind::InvalidArgument, "range lower bound exceeds upper bound");
    }
    if (error_variance.kind == ErrorVarianceRule::Kind::Fixed && !(error_variance.value > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "fixed error variance must be positive");
    }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// A factor other than `own`, uniformly.
int other_factor(Rng& rng, int d, int own) {
    const int k = uniform_int(rng, 0, d - 2);
    return k >= own ? k + 1 : k;
}

// First k entries of a uniformly shuffled copy.
std::vector<int> choose(Rng& rng, std::vector<int> pool, int k) {
    for (int i = 0; i < k; ++i) {
        const int j = uniform_int(rng, i, static_cast<int>(pool.size()) - 1);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

Matrix draw_phi(const SimConfig& cfg, Rng& rng) {
    const int d = cfg.d;
    if (cfg.scheme == SimScheme::BetaStudy || d == 1) return Matrix::Identity(d, d);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
        Matrix a(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) a(i, j) = unit(rng);
        }
        Matrix m = a.transpose() * a;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                lo = std::min(lo, m(i, j));
                hi = std::max(hi, m(i, j));
            }
        }
        const auto [target_lo, target_hi] = cfg.phi_range;
        Matrix phi = Matrix::Identity(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                const double scaled = hi > lo ? target_lo + (m(i, j) - lo) / (hi - lo) * (target_hi - target_lo)
                                              : 0.5 * (target_lo + target_hi);
                phi(i, j) = phi(j, i) = cfg.alpha * scaled;
            }
        }
        if (Eigen::LLT<Matrix>(phi).info() == Eigen::Success) return phi;
    }
    throw Error(ErrorKind::NotPositiveDefinite, "could not draw a positive definite Phi");
}

}  // namespace

FactorStructure gen_structure(const SimConfig& cfg) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, 0));
    const int d = cfg.d;
    const int c = cfg.children_per_factor;
    const int p = cfg.p();
    std::vector<Loading> support;
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < c; ++k) support.emplace_back(j * c + k, j);
    }

    if (cfg.scheme == SimScheme::AlphaStudy) {
        const int n_cross = p / 2;
        if (n_cross > 0 && d == 1) {
            throw Error(ErrorKind::InfeasibleScheme, "cross-loadings need at least two factors");
        }
        std::vector<char> is_protected(static_cast<std::size_t>(p), 0);
        for (int j = 0; j < d; ++j) is_protected[j * c + uniform_int(rng, 0, c - 1)] = 1;
        std::vector<int> pool;
        for (int i = 0; i < p; ++i) {
            if (!is_protected[i]) pool.push_back(i);
        }
        if (n_cross > static_cast<int>(pool.size())) {
            throw Error(ErrorKind::InfeasibleScheme, "not enough unprotected variables for cross-loadings");
        }
        for (int i : choose(rng, pool, n_cross)) support.emplace_back(i, other_factor(rng, d, i / c));
    } else {
        const int n_factors = static_cast<int>(std::lround(cfg.beta * d));
        if (n_factors > 0 && d == 1) {
            throw Error(ErrorKind::InfeasibleScheme, "cross-loadings need at least two factors");
        }
        std::vector<int> factors(static_cast<std::size_t>(d));
        std::iota(factors.begin(), factors.end(), 0);
        for (int j : choose(rng, factors, n_factors)) {
            for (int k = 0; k < c; ++k) support.emplace_back(j * c + k, other_factor(rng, d, j));
        }
    }
    return FactorStructure(p, d, std::move(support));
}

FactorParams gen_params(const FactorStructure& structure, const SimConfig& cfg) {
    cfg.validate();
    if (structure.d() != cfg.d) throw Error(ErrorKind::DimensionMismatch, "structure d differs from config");
    Rng rng(derive_seed(cfg.seed, 1));
    const int p = structure.p();
    const int d = structure.d();
    std::uniform_real_distribution<double> loading(cfg.loading_range.first, cfg.loading_range.second);

    FactorParams theta;
    theta.loadings = Matrix::Zero(p, d);
    for (const auto& [i, j] : structure.support()) theta.loadings(i, j) = loading(rng);
    theta.phi = draw_phi(cfg, rng);
    theta.omega = Vector::Constant(p, cfg.error_variance.value);

    if (cfg.error_variance.kind == ErrorVarianceRule::Kind::UnitTotal) {
        for (int i = 0; i < p; ++i) {
            const auto parents = structure.parents(i);
            int attempt = 0;
            while (true) {
                const double h = theta.loadings.row(i) * theta.phi * theta.loadings.row(i).transpose();
                if (h < 1.0) {
                    theta.omega(i) = 1.0 - h;
                    break;
                }
                if (++attempt > cfg.max_retries) {
                    throw Error(ErrorKind::NegativeErrorVariance,
                                "communality of variable " + std::to_string(i) + " stays >= 1");
                }
                for (int j : parents) theta.loadings(i, j) = loading(rng);
            }
        }
    }

    if (Eigen::LLT<Matrix>(theta.covariance()).info() != Eigen::Success) {
        throw Error(ErrorKind::NotPositiveDefinite, "generated covariance is not positive definite");
    }
    return theta;
}

Matrix sample_data(const FactorParams& theta, int n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
    const Matrix sigma = theta.covariance();
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::NotPositiveDefinite, "covariance is not positive definite");
    }
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int p = theta.p();
    Matrix z(n, p);
    for (int t = 0; t < n; ++t) {
        for (int j = 0; j < p; ++j) z(t, j) = normal(rng);
    }
    return z * llt.matrixU();
}

}  // namespace ctfa
