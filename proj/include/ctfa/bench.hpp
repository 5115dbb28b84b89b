#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctfa/io.hpp"
#include "ctfa/pipeline.hpp"
#include "ctfa/simgen.hpp"

namespace ctfa {

enum class BenchMode {
    Population,  // population diagnostics only, no sampling
    Fit,         // sample -> ct_fit -> score the BIC-selected structure
    Scan,        // sample -> ct_scan -> score the closest candidate
    Auto,        // Scan when p > n, Fit otherwise
};

/// Cartesian grid of simulation cells plus shared settings.
struct BenchSpec {
    SimScheme scheme = SimScheme::AlphaStudy;
    std::vector<int> d{2};
    std::vector<int> n{1000};
    std::vector<double> alpha{0.0};
    std::vector<double> beta{0.0};
    int children_per_factor = 5;
    int replicates = 10;
    std::uint64_t seed = 1;
    BenchMode mode = BenchMode::Auto;
    GridMode grid = GridMode::unique();
    SingletonPolicy singletons = SingletonPolicy::Drop;
    ErrorVarianceRule error_variance;
    bool test_loglik = true;

    std::vector<SimConfig> cells() const;
};

BenchSpec bench_spec_from_json(const json& j);
json to_json(const BenchSpec& spec);

/// One replicate. Optional metrics are absent when the mode does not produce them.
struct ReplicateRow {
    int cell = 0;
    int replicate = 0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    bool pop_thresholdable = false;
    double pop_sortability = 0.0;
    std::optional<bool> sample_thresholdable;
    std::optional<double> sample_sortability;
    std::optional<int> d_hat;
    std::optional<int> hd;
    std::optional<double> f1;
    std::optional<double> tli;
    std::optional<double> rmsea;
    std::optional<double> test_loglik;
    std::optional<int> models_tested;
    std::optional<double> clique_ratio;
};

struct Aggregate {
    int count = 0;
    double mean = 0.0;
    double sd = 0.0;
};

struct CellSummary {
    SimConfig config;
    int failures = 0;
    std::map<std::string, Aggregate> metrics;
};

struct BenchReport {
    static constexpr int schema_version = 1;
    BenchSpec spec;
    std::vector<CellSummary> cells;
    std::vector<ReplicateRow> rows;  // ordered by (cell, replicate)
};

/// Mean child-set size of `estimated` over that of `truth` (0 when estimated has no factors).
double clique_size_ratio(const FactorStructure& estimated, const FactorStructure& truth);

ReplicateRow run_replicate(const SimConfig& cfg, const BenchSpec& spec, int cell, int replicate);

/// Runs every (cell, replicate) pair; replicates run concurrently, output order is fixed.
BenchReport run_bench(const BenchSpec& spec);

/// Named numeric view of a row, the single source for aggregation.
std::map<std::string, double> row_metrics(const ReplicateRow& row);
std::map<std::string, Aggregate> aggregate_rows(const std::vector<const ReplicateRow*>& rows);

json to_json(const ReplicateRow& row);
json to_json(const BenchReport& report);

/// One line per cell with metric means.
std::string to_tsv(const BenchReport& report);

}  // namespace ctfa
