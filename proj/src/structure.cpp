#include "ctfa/structure.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ctfa/error.hpp"

namespace ctfa {

FactorStructure::FactorStructure(int p, int d, std::vector<Loading> support)
    : p_(p), d_(d), support_(std::move(support)) {
    if (p < 1 || d < 0) throw Error(ErrorKind::InvalidArgument, "structure needs p >= 1, d >= 0");
    std::sort(support_.begin(), support_.end());
    support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
    std::vector<char> used(static_cast<std::size_t>(d), 0);
    for (const auto& [i, j] : support_) {
        if (i < 0 || i >= p || j < 0 || j >= d) {
            throw Error(ErrorKind::InvalidArgument,
                        "support entry (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") out of range");
        }
        used[j] = 1;
    }
    for (int j = 0; j < d; ++j) {
        if (!used[j]) {
            throw Error(ErrorKind::InvalidArgument, "factor " + std::to_string(j) + " has no children");
        }
    }
}

FactorStructure FactorStructure::independent_clusters(int d, int children_per_factor) {
    std::vector<Loading> support;
    for (int j = 0; j < d; ++j) {
        for (int c = 0; c < children_per_factor; ++c) support.emplace_back(j * children_per_factor + c, j);
    }
    return FactorStructure(d * children_per_factor, d, std::move(support));
}

bool FactorStructure::has(int i, int j) const {
    return std::binary_search(support_.begin(), support_.end(), Loading{i, j});
}

std::vector<int> FactorStructure::children(int j) const {
    std::vector<int> out;
    for (const auto& [i, k] : support_) {
        if (k == j) out.push_back(i);
    }
    return out;
}

std::vector<int> FactorStructure::parents(int i) const {
    std::vector<int> out;
    auto it = std::lower_bound(support_.begin(), support_.end(), Loading{i, 0});
    for (; it != support_.end() && it->first == i; ++it) out.push_back(it->second);
    return out;
}

std::vector<std::vector<int>> FactorStructure::children_sets() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(d_));
    for (const auto& [i, j] : support_) out[j].push_back(i);
    return out;
}

EdgeSet FactorStructure::within_factor_edges() const {
    std::vector<Edge> edges;
    for (const auto& ch : children_sets()) {
        for (std::size_t a = 0; a < ch.size(); ++a) {
            for (std::size_t b = a + 1; b < ch.size(); ++b) edges.emplace_back(ch[a], ch[b]);
        }
    }
    return EdgeSet(p_, std::move(edges));
}

FactorStructure cliques_to_structure(const CliqueSet& cliques, SingletonPolicy policy) {
    std::vector<Loading> support;
    int d = 0;
    for (const auto& c : cliques.cliques) {
        if (policy == SingletonPolicy::Drop && c.size() < 2) continue;
        for (int i : c) support.emplace_back(i, d);
        ++d;
    }
    return FactorStructure(std::max(cliques.p, 1), d, std::move(support));
}

UniqueChildReport unique_child_report(const FactorStructure& s) {
    UniqueChildReport report;
    std::vector<int> parent_count(static_cast<std::size_t>(s.p()), 0);
    for (const auto& [i, j] : s.support()) ++parent_count[i];
    report.holds = true;
    for (const auto& ch : s.children_sets()) {
        std::vector<int> unique;
        for (int i : ch) {
            if (parent_count[i] == 1) unique.push_back(i);
        }
        if (unique.empty()) report.holds = false;
        report.unique_children.push_back(std::move(unique));
    }
    return report;
}

FactorStructure permute_columns(const FactorStructure& s, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != s.d()) {
        throw Error(ErrorKind::DimensionMismatch, "permutation length differs from d");
    }
    std::vector<Loading> support;
    support.reserve(s.support().size());
    for (const auto& [i, j] : s.support()) support.emplace_back(i, perm[j]);
    return FactorStructure(s.p(), s.d(), std::move(support));
}

FactorStructure canonicalize(const FactorStructure& s) {
    const auto sets = s.children_sets();
    std::vector<int> order(static_cast<std::size_t>(s.d()));
    std::iota(order.begin(), order.end(), 0);
    // Child sets are sorted and non-empty, so lexicographic order starts with the smallest child.
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sets[a] < sets[b]; });
    std::vector<int> perm(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) perm[order[k]] = static_cast<int>(k);
    return permute_columns(s, perm);
}

}  // namespace ctfa
