#include "ctfa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>

#include "ctfa/cliques.hpp"
#include "ctfa/error.hpp"

namespace ctfa {

namespace {

using StructureKey = std::pair<int, std::vector<Loading>>;

StructureKey key_of(const FactorStructure& s) { return {s.d(), s.support()}; }

}  // namespace

std::vector<CandidateRecord> ct_scan(const CorrelationMatrix& R, const ThresholdGrid& grid,
                                     SingletonPolicy singletons) {
    std::vector<CandidateRecord> records;
    std::map<StructureKey, std::size_t> seen;
    std::vector<double> taus = grid.values;
    std::sort(taus.begin(), taus.end());
    if (taus.empty()) return records;

    // Ascending sweep: each step only deletes edges, weakest first.
    const auto first = threshold_edges(R, taus.front());
    BitGraph graph(first);
    std::vector<std::pair<double, Edge>> pending;
    pending.reserve(first.size());
    for (const auto& e : first.edges()) pending.emplace_back(std::abs(R(e.first, e.second)), e);
    std::sort(pending.begin(), pending.end());
    std::size_t next = 0;

    for (double tau : taus) {
        for (; next < pending.size() && pending[next].first <= tau; ++next) {
            graph.remove_edge(pending[next].second.first, pending[next].second.second);
        }
        auto structure = canonicalize(cliques_to_structure(graph.independent_maximal_cliques(), singletons));
        auto [it, inserted] = seen.try_emplace(key_of(structure), records.size());
        if (inserted) {
            records.push_back(CandidateRecord{tau, tau, std::move(structure), std::nullopt});
        } else {
            records[it->second].tau_max = tau;
        }
    }
    return records;
}

CtResult ct_fit(const CorrelationMatrix& R, int n, const ThresholdGrid& grid, const CtConfig& cfg) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 2");
    CtResult result;
    for (auto& record : ct_scan(R, grid, cfg.singletons)) {
        const auto& s = record.structure;
        if (s.d() == 0 && !cfg.fit_null_model) continue;
        // Dimension reduction premise: a structure needs fewer factors than variables.
        if (s.d() > 0 && s.d() >= s.p()) continue;
        result.candidates.push_back(std::move(record));
    }
    if (result.candidates.empty()) {
        throw Error(ErrorKind::NoCandidates, "no threshold produced an estimable structure");
    }
    result.models_tested = static_cast<int>(result.candidates.size());

    // Validates R once up front so worker threads never throw on it.
    (void)MlDiscrepancy(R, result.candidates.front().structure, cfg.optim.omega_floor);

    const int count = result.models_tested;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < count; ++k) {
        try {
            auto& record = result.candidates[k];
            record.fit = fit_mle(R, record.structure, n, cfg.optim);
        } catch (...) {
            failures[k] = std::current_exception();
        }
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    const auto better = [](const CandidateRecord& a, const CandidateRecord& b) {
        const double da = a.fit->bic;
        const double db = b.fit->bic;
        if (std::abs(da - db) > 1e-9) return da < db;
        if (a.fit->n_params != b.fit->n_params) return a.fit->n_params < b.fit->n_params;
        return a.tau > b.tau;
    };
    for (std::size_t k = 0; k < result.candidates.size(); ++k) {
        const auto& c = result.candidates[k];
        if (!c.fit->converged || !std::isfinite(c.fit->bic)) continue;
        if (!result.selected_index || better(c, result.candidates[*result.selected_index])) {
            result.selected_index = k;
        }
    }
    if (!result.selected_index) {
        result.selected_unconverged = true;
        for (std::size_t k = 0; k < result.candidates.size(); ++k) {
            const auto& fit = *result.candidates[k].fit;
            if (!std::isfinite(fit.f_ml)) continue;
            if (!result.selected_index || fit.f_ml < result.candidates[*result.selected_index].fit->f_ml) {
                result.selected_index = k;
            }
        }
    }
    return result;
}

BestCandidate best_candidate_vs_truth(const std::vector<CandidateRecord>& records,
                                      const FactorStructure& truth) {
    if (records.empty()) throw Error(ErrorKind::NoCandidates, "no records to compare");
    BestCandidate best;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto score = structural_score(records[k].structure, truth);
        if (k == 0 || score.hd < best.hd) best = {k, score.hd, score.f1};
    }
    return best;
}

}  // namespace ctfa
