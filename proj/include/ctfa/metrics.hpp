#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ctfa/corr.hpp"
#include "ctfa/structure.hpp"

namespace ctfa {

struct StructuralScore {
    int hd = 0;
    double f1 = 1.0;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    /// permutation[a] = truth column matched to (padded) estimated column a.
    std::vector<int> permutation;
};

/// Minimum-cost perfect matching on a square cost matrix (Kuhn-Munkres with
/// potentials, O(n^3)). Returns the column assigned to each row.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

/// Support symmetric difference minimised over column permutations of `est`,
/// after zero-padding the narrower structure. F1 is reported at the minimiser.
StructuralScore structural_score(const FactorStructure& est, const FactorStructure& truth);

struct ThresholdabilityReport {
    bool thresholdable = false;
    double max_between = 0.0;
    double min_within = 0.0;  // +inf when there are no within-factor pairs
    std::optional<std::pair<double, double>> interval;
};

ThresholdabilityReport thresholdability(const CorrelationMatrix& sigma, const EdgeSet& within);

/// Fraction of the p(p-1)/2 pairs that a best-case threshold sorts correctly:
/// within pairs strictly above every between magnitude plus between pairs
/// strictly below every within magnitude.
double sortability(const CorrelationMatrix& sigma, const EdgeSet& within);

}  // namespace ctfa
