#include "ctfa/cliques.hpp"

#include <algorithm>

namespace ctfa {

namespace {

using Adjacency = std::vector<std::vector<int>>;

// Every pair of neighbours of v must be adjacent: for each neighbour u,
// N(v) \ {u} must be contained in N(u).
bool is_simplicial(const Adjacency& adj, int v) {
    const auto& nv = adj[v];
    for (int u : nv) {
        const auto& nu = adj[u];
        if (nu.size() + 1 < nv.size()) return false;
        for (int w : nv) {
            if (w == u) continue;
            if (!std::binary_search(nu.begin(), nu.end(), w)) return false;
        }
    }
    return true;
}

std::vector<int> closed_neighbourhood(const Adjacency& adj, int v) {
    std::vector<int> c = adj[v];
    c.insert(std::lower_bound(c.begin(), c.end(), v), v);
    return c;
}

}  // namespace

std::vector<int> simplicial_vertices(const EdgeSet& graph) {
    const Adjacency adj = graph.adjacency();
    const int p = graph.p();
    std::vector<char> flag(static_cast<std::size_t>(p), 0);
#pragma omp parallel for schedule(dynamic, 16)
    for (int v = 0; v < p; ++v) {
        flag[v] = is_simplicial(adj, v) ? 1 : 0;
    }
    std::vector<int> out;
    for (int v = 0; v < p; ++v) {
        if (flag[v]) out.push_back(v);
    }
    return out;
}

CliqueSet independent_maximal_cliques(const EdgeSet& graph) {
    const Adjacency adj = graph.adjacency();
    CliqueSet result;
    result.p = graph.p();
    for (int v : simplicial_vertices(graph)) {
        result.cliques.push_back(closed_neighbourhood(adj, v));
    }
    // Two simplicial vertices share a clique iff their closed neighbourhoods coincide.
    std::sort(result.cliques.begin(), result.cliques.end());
    result.cliques.erase(std::unique(result.cliques.begin(), result.cliques.end()),
                         result.cliques.end());
    return result;
}

BitGraph::BitGraph(const EdgeSet& graph)
    : p_(graph.p()),
      words_((static_cast<std::size_t>(graph.p()) + 63) / 64),
      bits_(static_cast<std::size_t>(graph.p()) * words_, 0) {
    const auto set = [&](int i, int j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); };
    for (int v = 0; v < p_; ++v) set(v, v);
    for (const auto& [i, j] : graph.edges()) {
        set(i, j);
        set(j, i);
    }
}

bool BitGraph::contains(int i, int j) const {
    return i != j && (row(i)[j / 64] >> (j % 64) & 1U);
}

void BitGraph::remove_edge(int i, int j) {
    if (i == j) return;
    bits_[i * words_ + j / 64] &= ~(std::uint64_t{1} << (j % 64));
    bits_[j * words_ + i / 64] &= ~(std::uint64_t{1} << (i % 64));
}

// C(v) must be contained in C(u) for every neighbour u.
bool BitGraph::is_simplicial(int v) const {
    const auto* cv = row(v);
    for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t rest = cv[w];
        while (rest != 0) {
            const int u = static_cast<int>(w * 64) + __builtin_ctzll(rest);
            rest &= rest - 1;
            if (u == v) continue;
            const auto* cu = row(u);
            for (std::size_t k = 0; k < words_; ++k) {
                if ((cv[k] & ~cu[k]) != 0) return false;
            }
        }
    }
    return true;
}

CliqueSet BitGraph::independent_maximal_cliques() const {
    CliqueSet result;
    result.p = p_;
    for (int v = 0; v < p_; ++v) {
        if (!is_simplicial(v)) continue;
        std::vector<int> c;
        const auto* cv = row(v);
        for (std::size_t w = 0; w < words_; ++w) {
            for (std::uint64_t rest = cv[w]; rest != 0; rest &= rest - 1) {
                c.push_back(static_cast<int>(w * 64) + __builtin_ctzll(rest));
            }
        }
        result.cliques.push_back(std::move(c));
    }
    std::sort(result.cliques.begin(), result.cliques.end());
    result.cliques.erase(std::unique(result.cliques.begin(), result.cliques.end()),
                         result.cliques.end());
    return result;
}

namespace serial {

std::vector<int> simplicial_vertices(const EdgeSet& graph) {
    const int p = graph.p();
    std::vector<int> out;
    for (int v = 0; v < p; ++v) {
        std::vector<int> nbrs;
        for (int u = 0; u < p; ++u) {
            if (u != v && graph.contains(u, v)) nbrs.push_back(u);
        }
        bool ok = true;
        for (std::size_t a = 0; a < nbrs.size() && ok; ++a) {
            for (std::size_t b = a + 1; b < nbrs.size() && ok; ++b) {
                ok = graph.contains(nbrs[a], nbrs[b]);
            }
        }
        if (ok) out.push_back(v);
    }
    return out;
}

}  // namespace serial

}  // namespace ctfa
