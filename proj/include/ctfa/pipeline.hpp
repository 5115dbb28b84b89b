#pragma once

#include <optional>
#include <vector>

#include "ctfa/corr.hpp"
#include "ctfa/estimate.hpp"
#include "ctfa/metrics.hpp"
#include "ctfa/structure.hpp"

namespace ctfa {

struct CandidateRecord {
    double tau = 0.0;      // first (smallest) threshold producing the structure
    double tau_max = 0.0;  // last threshold producing it
    FactorStructure structure;  // canonical form
    std::optional<FitResult> fit;
};

struct CtConfig {
    SingletonPolicy singletons = SingletonPolicy::Drop;
    bool fit_null_model = true;  // estimate the d = 0 noise model when proposed
    OptimConfig optim;
};

struct CtResult {
    std::vector<CandidateRecord> candidates;  // ascending tau
    std::optional<std::size_t> selected_index;
    int models_tested = 0;
    bool selected_unconverged = false;  // every fit failed; best f_ml chosen instead
};

/// Threshold sweep -> independent maximal cliques -> structures, deduplicated
/// by canonical form. No estimation.
std::vector<CandidateRecord> ct_scan(const CorrelationMatrix& R, const ThresholdGrid& grid,
                                     SingletonPolicy singletons = SingletonPolicy::Drop);

/// Full procedure: scan, fit every distinct estimable structure once, pick the
/// minimum BIC (ties within 1e-9: fewer parameters, then larger tau).
CtResult ct_fit(const CorrelationMatrix& R, int n, const ThresholdGrid& grid, const CtConfig& cfg = {});

struct BestCandidate {
    std::size_t index = 0;
    int hd = 0;
    double f1 = 0.0;
};

/// Record closest to a known truth by permutation-minimised Hamming distance.
BestCandidate best_candidate_vs_truth(const std::vector<CandidateRecord>& records,
                                      const FactorStructure& truth);

}  // namespace ctfa
