#pragma once

// Independent reference implementations used only by tests. None of these
// share code paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "ctfa/corr.hpp"
#include "ctfa/structure.hpp"

namespace oracle {

using ctfa::EdgeSet;
using ctfa::FactorStructure;
using ctfa::Matrix;
using ctfa::Vector;

/// Textbook two-pass Pearson formula on one pair of columns.
inline double pearson(const Matrix& data, int a, int b) {
    const auto n = static_cast<double>(data.rows());
    double ma = 0, mb = 0;
    for (Eigen::Index t = 0; t < data.rows(); ++t) {
        ma += data(t, a);
        mb += data(t, b);
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (Eigen::Index t = 0; t < data.rows(); ++t) {
        sab += (data(t, a) - ma) * (data(t, b) - mb);
        saa += (data(t, a) - ma) * (data(t, a) - ma);
        sbb += (data(t, b) - mb) * (data(t, b) - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

using AdjMatrix = std::vector<std::vector<bool>>;

inline AdjMatrix adjacency_matrix(const EdgeSet& g) {
    AdjMatrix adj(g.p(), std::vector<bool>(g.p(), false));
    for (const auto& [i, j] : g.edges()) adj[i][j] = adj[j][i] = true;
    return adj;
}

/// All maximal cliques by plain Bron-Kerbosch (no pivoting), each sorted.
inline std::vector<std::vector<int>> all_maximal_cliques(const EdgeSet& g) {
    const auto adj = adjacency_matrix(g);
    std::vector<std::vector<int>> out;
    std::function<void(std::vector<int>, std::vector<int>, std::vector<int>)> expand =
        [&](std::vector<int> r, std::vector<int> p, std::vector<int> x) {
            if (p.empty() && x.empty()) {
                std::sort(r.begin(), r.end());
                out.push_back(r);
                return;
            }
            while (!p.empty()) {
                const int v = p.back();
                std::vector<int> r2 = r, p2, x2;
                r2.push_back(v);
                for (int u : p) {
                    if (adj[v][u]) p2.push_back(u);
                }
                for (int u : x) {
                    if (adj[v][u]) x2.push_back(u);
                }
                expand(r2, p2, x2);
                p.pop_back();
                x.push_back(v);
            }
        };
    std::vector<int> all(g.p());
    std::iota(all.begin(), all.end(), 0);
    expand({}, all, {});
    std::sort(out.begin(), out.end());
    return out;
}

/// Maximal cliques holding a vertex that no other maximal clique contains.
inline std::vector<std::vector<int>> independent_by_definition(const EdgeSet& g) {
    const auto cliques = all_maximal_cliques(g);
    std::vector<int> membership(g.p(), 0);
    for (const auto& c : cliques) {
        for (int v : c) ++membership[v];
    }
    std::vector<std::vector<int>> out;
    for (const auto& c : cliques) {
        if (std::any_of(c.begin(), c.end(), [&](int v) { return membership[v] == 1; })) out.push_back(c);
    }
    return out;
}

inline EdgeSet random_graph(int p, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(density);
    std::vector<ctfa::Edge> edges;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            if (coin(rng)) edges.emplace_back(i, j);
        }
    }
    return EdgeSet(p, edges);
}

/// Minimum support symmetric difference over all d! column permutations.
inline int brute_force_hd(const FactorStructure& est, const FactorStructure& truth) {
    const int width = std::max(est.d(), truth.d());
    std::set<std::pair<int, int>> t(truth.support().begin(), truth.support().end());
    std::vector<int> perm(width);
    std::iota(perm.begin(), perm.end(), 0);
    int best = -1;
    do {
        std::set<std::pair<int, int>> e;
        for (const auto& [i, j] : est.support()) e.emplace(i, perm[j]);
        int diff = 0;
        for (const auto& x : e) diff += t.count(x) ? 0 : 1;
        for (const auto& x : t) diff += e.count(x) ? 0 : 1;
        if (best < 0 || diff < best) best = diff;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline FactorStructure random_structure(int p, int d, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(density);
    std::uniform_int_distribution<int> pick(0, p - 1);
    std::vector<ctfa::Loading> support;
    for (int j = 0; j < d; ++j) {
        support.emplace_back(pick(rng), j);
        for (int i = 0; i < p; ++i) {
            if (coin(rng)) support.emplace_back(i, j);
        }
    }
    return FactorStructure(p, d, support);
}

/// Central differences with relative step h * max(1, |x_k|).
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h = 1e-6) {
    Vector g(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double step = h * std::max(1.0, std::abs(x(k)));
        Vector a = x, b = x;
        a(k) += step;
        b(k) -= step;
        g(k) = (f(a) - f(b)) / (2.0 * step);
    }
    return g;
}

}  // namespace oracle
