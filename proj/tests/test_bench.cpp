#include "doctest.h"

#include <cmath>

#include "ctfa/bench.hpp"

using namespace ctfa;

namespace {

BenchSpec small_spec() {
    BenchSpec spec;
    spec.d = {2};
    spec.n = {300};
    spec.alpha = {0.0, 0.5};
    spec.replicates = 3;
    spec.seed = 11;
    spec.mode = BenchMode::Fit;
    return spec;
}

}  // namespace

TEST_CASE("bench: report shape and row order") {
    const auto spec = small_spec();
    const auto report = run_bench(spec);
    REQUIRE(report.cells.size() == 2);
    REQUIRE(report.rows.size() == 6);
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
        CHECK(report.rows[k].cell == static_cast<int>(k / 3));
        CHECK(report.rows[k].replicate == static_cast<int>(k % 3));
        CHECK_FALSE(report.rows[k].failed);
        CHECK(report.rows[k].f1.has_value());
        CHECK(report.rows[k].test_loglik.has_value());
    }
    const auto j = to_json(report);
    CHECK(j["schema_version"] == 1);
    CHECK(j["rows"].size() == 6);
    CHECK(j["cells"][1]["config"]["alpha"] == 0.5);
    CHECK(j["cells"][0]["metrics"].contains("f1"));
}

TEST_CASE("bench: cell aggregates match a recompute from rows") {
    const auto report = run_bench(small_spec());
    for (std::size_t c = 0; c < report.cells.size(); ++c) {
        for (const auto& [name, agg] : report.cells[c].metrics) {
            std::vector<double> xs;
            for (const auto& row : report.rows) {
                if (row.cell != static_cast<int>(c) || row.failed) continue;
                const auto m = row_metrics(row);
                if (auto it = m.find(name); it != m.end()) xs.push_back(it->second);
            }
            REQUIRE(static_cast<int>(xs.size()) == agg.count);
            double mean = 0.0;
            for (double x : xs) mean += x;
            mean /= xs.size();
            double ss = 0.0;
            for (double x : xs) ss += (x - mean) * (x - mean);
            const double sd = xs.size() > 1 ? std::sqrt(ss / (xs.size() - 1)) : 0.0;
            CHECK(std::abs(agg.mean - mean) < 1e-12);
            CHECK(std::abs(agg.sd - sd) < 1e-12);
        }
    }
}

TEST_CASE("bench: reruns are byte-identical") {
    const auto spec = small_spec();
    CHECK(to_json(run_bench(spec)).dump() == to_json(run_bench(spec)).dump());
    CHECK(to_tsv(run_bench(spec)) == to_tsv(run_bench(spec)));
}

TEST_CASE("bench: failed replicates are counted, not aggregated") {
    BenchSpec spec = small_spec();
    spec.alpha = {1.0};
    spec.error_variance = {ErrorVarianceRule::Kind::UnitTotal, 0.0};
    spec.mode = BenchMode::Population;
    const auto report = run_bench(spec);
    REQUIRE(report.cells.size() == 1);
    CHECK(report.cells[0].failures == 3);
    CHECK(report.cells[0].metrics.empty());
    for (const auto& row : report.rows) {
        CHECK(row.failed);
        CHECK_FALSE(row.error.empty());
    }
}

TEST_CASE("bench: population mode skips sampling") {
    BenchSpec spec = small_spec();
    spec.mode = BenchMode::Population;
    const auto report = run_bench(spec);
    for (const auto& row : report.rows) {
        CHECK_FALSE(row.sample_sortability.has_value());
        CHECK_FALSE(row.f1.has_value());
    }
}

TEST_CASE("bench: spec json round trip and grid parsing") {
    const auto j = json::parse(R"({"scheme":"beta_study","d":4,"n":[100,1000],"beta":[0,0.5],
                                    "replicates":2,"seed":5,"mode":"scan","grid":"equi:25"})");
    const auto spec = bench_spec_from_json(j);
    CHECK(spec.scheme == SimScheme::BetaStudy);
    CHECK(spec.d == std::vector<int>{4});
    CHECK(spec.cells().size() == 4);
    CHECK(spec.grid.kind == GridMode::Kind::Equidistant);
    CHECK(spec.grid.m == 25);
    CHECK(to_json(bench_spec_from_json(to_json(spec))) == to_json(spec));
}

TEST_CASE("bench: clique size ratio") {
    const auto truth = FactorStructure::independent_clusters(2, 5);
    CHECK(clique_size_ratio(truth, truth) == doctest::Approx(1.0));
    const auto merged = FactorStructure::independent_clusters(1, 10);
    CHECK(clique_size_ratio(merged, truth) == doctest::Approx(2.0));
}
