#pragma once

#include <cstdint>
#include <vector>

#include "ctfa/corr.hpp"

namespace ctfa {

/// Independent maximal cliques of a graph: maximal cliques that own at least
/// one vertex shared with no other maximal clique. Members ascending, cliques
/// ordered by smallest member.
struct CliqueSet {
    int p = 0;
    std::vector<std::vector<int>> cliques;

    std::size_t size() const { return cliques.size(); }
    bool empty() const { return cliques.empty(); }
    friend bool operator==(const CliqueSet&, const CliqueSet&) = default;
};

/// Vertices whose closed neighbourhood induces a clique, ascending.
std::vector<int> simplicial_vertices(const EdgeSet& graph);

/// A vertex lies in exactly one maximal clique iff it is simplicial, and that
/// clique is its closed neighbourhood. The result is the deduplicated set of
/// closed neighbourhoods of simplicial vertices; O(sum deg(v)^2 log deg).
CliqueSet independent_maximal_cliques(const EdgeSet& graph);

/// Dense bitset graph for threshold sweeps, where edges only ever disappear.
/// Same cliques as the EdgeSet overload; O(p * deg * p/64) per query.
class BitGraph {
public:
    explicit BitGraph(const EdgeSet& graph);

    int p() const { return p_; }
    bool contains(int i, int j) const;
    void remove_edge(int i, int j);
    CliqueSet independent_maximal_cliques() const;

private:
    bool is_simplicial(int v) const;
    const std::uint64_t* row(int v) const { return bits_.data() + static_cast<std::size_t>(v) * words_; }

    int p_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;  // closed neighbourhoods, row-major
};

namespace serial {
std::vector<int> simplicial_vertices(const EdgeSet& graph);
}  // namespace serial

}  // namespace ctfa
