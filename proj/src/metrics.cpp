#include "ctfa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctfa/error.hpp"

namespace ctfa {

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) return {};
    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; p[j] is the row matched to column j.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

namespace {

int intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
    int count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

}  // namespace

StructuralScore structural_score(const FactorStructure& est, const FactorStructure& truth) {
    if (est.p() != truth.p()) {
        throw Error(ErrorKind::DimensionMismatch, "structures have different variable counts");
    }
    const int width = std::max(est.d(), truth.d());
    auto est_sets = est.children_sets();
    auto truth_sets = truth.children_sets();
    est_sets.resize(static_cast<std::size_t>(width));
    truth_sets.resize(static_cast<std::size_t>(width));

    std::vector<std::vector<double>> cost(width, std::vector<double>(width, 0.0));
    for (int a = 0; a < width; ++a) {
        for (int b = 0; b < width; ++b) {
            const int common = intersection_size(est_sets[a], truth_sets[b]);
            cost[a][b] = static_cast<double>(est_sets[a].size() + truth_sets[b].size() - 2 * common);
        }
    }

    StructuralScore score;
    score.permutation = solve_assignment(cost);
    for (int a = 0; a < width; ++a) {
        score.tp += intersection_size(est_sets[a], truth_sets[score.permutation[a]]);
    }
    score.fp = static_cast<int>(est.support().size()) - score.tp;
    score.fn = static_cast<int>(truth.support().size()) - score.tp;
    score.hd = score.fp + score.fn;
    const int denom = 2 * score.tp + score.fp + score.fn;
    score.f1 = denom > 0 ? 2.0 * score.tp / denom : 1.0;
    return score;
}

ThresholdabilityReport thresholdability(const CorrelationMatrix& sigma, const EdgeSet& within) {
    if (sigma.p() != within.p()) {
        throw Error(ErrorKind::DimensionMismatch, "edge set and matrix sizes differ");
    }
    ThresholdabilityReport report;
    report.max_between = 0.0;
    report.min_within = std::numeric_limits<double>::infinity();
    const int p = sigma.p();
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const double r = std::abs(sigma(i, j));
            if (within.contains(i, j)) {
                report.min_within = std::min(report.min_within, r);
            } else {
                report.max_between = std::max(report.max_between, r);
            }
        }
    }
    if (within.empty()) {
        // No within pairs: separable only when there is nothing to separate.
        report.thresholdable = p <= 1 || report.max_between == 0.0;
    } else {
        report.thresholdable = report.max_between < report.min_within;
        if (report.thresholdable) report.interval = std::pair{report.max_between, report.min_within};
    }
    return report;
}

double sortability(const CorrelationMatrix& sigma, const EdgeSet& within) {
    if (sigma.p() != within.p()) {
        throw Error(ErrorKind::DimensionMismatch, "edge set and matrix sizes differ");
    }
    const int p = sigma.p();
    if (p < 2) return 1.0;
    double max_between = -std::numeric_limits<double>::infinity();
    double min_within = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const double r = std::abs(sigma(i, j));
            if (within.contains(i, j)) {
                min_within = std::min(min_within, r);
            } else {
                max_between = std::max(max_between, r);
            }
        }
    }
    long sorted = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const double r = std::abs(sigma(i, j));
            if (within.contains(i, j) ? r > max_between : r < min_within) ++sorted;
        }
    }
    return static_cast<double>(sorted) / (static_cast<double>(p) * (p - 1) / 2.0);
}

}  // namespace ctfa
