#pragma once

#include <utility>
#include <vector>

#include "ctfa/cliques.hpp"
#include "ctfa/corr.hpp"

namespace ctfa {

/// (variable, factor) position of a free loading.
using Loading = std::pair<int, int>;

/// A factor-model structure: factor count d plus the loading support.
/// Every factor column has at least one child. Variables with no parent are
/// pure-error variables.
class FactorStructure {
public:
    FactorStructure() = default;
    FactorStructure(int p, int d, std::vector<Loading> support);

    /// Independent clusters: factor j owns variables [j*k, (j+1)*k).
    static FactorStructure independent_clusters(int d, int children_per_factor);

    int p() const { return p_; }
    int d() const { return d_; }
    const std::vector<Loading>& support() const { return support_; }
    bool has(int i, int j) const;

    std::vector<int> children(int j) const;
    std::vector<int> parents(int i) const;
    std::vector<std::vector<int>> children_sets() const;

    /// Pairs of variables sharing at least one parent.
    EdgeSet within_factor_edges() const;

    friend bool operator==(const FactorStructure&, const FactorStructure&) = default;

private:
    int p_ = 0;
    int d_ = 0;
    std::vector<Loading> support_;
};

enum class SingletonPolicy { Drop, Keep };

struct UniqueChildReport {
    std::vector<std::vector<int>> unique_children;  // U_k per factor
    bool holds = false;
};

FactorStructure cliques_to_structure(const CliqueSet& cliques,
                                     SingletonPolicy policy = SingletonPolicy::Drop);

UniqueChildReport unique_child_report(const FactorStructure& s);

/// Factor columns ordered by (smallest child, then child set lexicographically).
FactorStructure canonicalize(const FactorStructure& s);

/// Applies a column permutation: new column perm[j] receives old column j.
FactorStructure permute_columns(const FactorStructure& s, const std::vector<int>& perm);

}  // namespace ctfa
