#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "ctfa/estimate.hpp"
#include "ctfa/structure.hpp"

namespace ctfa {

enum class SimScheme { AlphaStudy, BetaStudy };

/// How error variances are chosen once loadings and Phi are drawn.
struct ErrorVarianceRule {
    enum class Kind {
        Fixed,      // omega_i = value for every variable
        UnitTotal,  // omega_i = 1 - (Lambda Phi Lambda^T)_ii; rows redrawn when infeasible
    };
    Kind kind = Kind::Fixed;
    double value = 0.5;
};

struct SimConfig {
    int d = 2;
    int children_per_factor = 5;
    int n = 1000;
    double alpha = 0.0;
    double beta = 0.0;
    std::pair<double, double> loading_range{0.6, 0.8};
    std::pair<double, double> phi_range{0.6, 0.8};
    SimScheme scheme = SimScheme::AlphaStudy;
    ErrorVarianceRule error_variance;
    std::uint64_t seed = 1;
    int max_retries = 100;

    int p() const { return d * children_per_factor; }
    void validate() const;
};

/// splitmix64 of (seed, stream); used for every derived RNG stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

using Rng = std::mt19937_64;

/// Loading pattern for the configured scheme (RNG stream 0 of cfg.seed).
FactorStructure gen_structure(const SimConfig& cfg);

/// Parameter draw for a structure (RNG stream 1 of cfg.seed).
FactorParams gen_params(const FactorStructure& structure, const SimConfig& cfg);

/// n draws from N(0, Sigma(theta)), rows are observations.
Matrix sample_data(const FactorParams& theta, int n, std::uint64_t seed);

}  // namespace ctfa
