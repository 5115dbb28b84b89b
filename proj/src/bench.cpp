#include "ctfa/bench.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "ctfa/error.hpp"
#include "ctfa/metrics.hpp"

namespace ctfa {

std::vector<SimConfig> BenchSpec::cells() const {
    std::vector<SimConfig> out;
    const auto& violation = scheme == SimScheme::AlphaStudy ? alpha : beta;
    for (int dd : d) {
        for (int nn : n) {
            for (double v : violation) {
                SimConfig cfg;
                cfg.scheme = scheme;
                cfg.d = dd;
                cfg.n = nn;
                cfg.children_per_factor = children_per_factor;
                cfg.error_variance = error_variance;
                if (scheme == SimScheme::AlphaStudy) {
                    cfg.alpha = v;
                } else {
                    cfg.beta = v;
                }
                cfg.validate();
                out.push_back(cfg);
            }
        }
    }
    return out;
}

namespace {

GridMode parse_grid(const std::string& s) {
    if (s == "unique") return GridMode::unique();
    if (s.rfind("equi:", 0) == 0) {
        try {
            return GridMode::equidistant(std::stoi(s.substr(5)));
        } catch (const std::exception&) {
        }
    }
    throw Error(ErrorKind::ParseError, "grid must be 'unique' or 'equi:<m>', got " + s);
}

std::string grid_name(const GridMode& g) {
    return g.kind == GridMode::Kind::AllUniqueSample ? "unique" : "equi:" + std::to_string(g.m);
}

const char* mode_name(BenchMode m) {
    switch (m) {
        case BenchMode::Population: return "population";
        case BenchMode::Fit: return "fit";
        case BenchMode::Scan: return "scan";
        case BenchMode::Auto: return "auto";
    }
    return "auto";
}

template <typename T>
std::vector<T> list_or_scalar(const json& j, const char* key, std::vector<T> fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); }

double mean_child_count(const FactorStructure& s) {
    return s.d() == 0 ? 0.0 : static_cast<double>(s.support().size()) / s.d();
}

}  // namespace

BenchSpec bench_spec_from_json(const json& j) {
    BenchSpec spec;
    try {
        const auto scheme = j.value("scheme", std::string("alpha_study"));
        if (scheme == "alpha_study") {
            spec.scheme = SimScheme::AlphaStudy;
        } else if (scheme == "beta_study") {
            spec.scheme = SimScheme::BetaStudy;
        } else {
            throw Error(ErrorKind::ParseError, "unknown scheme " + scheme);
        }
        spec.d = list_or_scalar<int>(j, "d", spec.d);
        spec.n = list_or_scalar<int>(j, "n", spec.n);
        spec.alpha = list_or_scalar<double>(j, "alpha", spec.alpha);
        spec.beta = list_or_scalar<double>(j, "beta", spec.beta);
        spec.children_per_factor = j.value("children_per_factor", spec.children_per_factor);
        spec.replicates = j.value("replicates", spec.replicates);
        spec.seed = j.value("seed", spec.seed);
        const auto mode = j.value("mode", std::string("auto"));
        if (mode == "population") {
            spec.mode = BenchMode::Population;
        } else if (mode == "fit") {
            spec.mode = BenchMode::Fit;
        } else if (mode == "scan") {
            spec.mode = BenchMode::Scan;
        } else if (mode == "auto") {
            spec.mode = BenchMode::Auto;
        } else {
            throw Error(ErrorKind::ParseError, "unknown mode " + mode);
        }
        spec.grid = parse_grid(j.value("grid", std::string("unique")));
        const auto singletons = j.value("singletons", std::string("drop"));
        if (singletons != "drop" && singletons != "keep") {
            throw Error(ErrorKind::ParseError, "singletons must be keep or drop");
        }
        spec.singletons = singletons == "keep" ? SingletonPolicy::Keep : SingletonPolicy::Drop;
        if (j.contains("error_variance")) {
            const auto& ev = j["error_variance"];
            if (ev.is_string() && ev.get<std::string>() == "unit_total") {
                spec.error_variance = {ErrorVarianceRule::Kind::UnitTotal, 0.0};
            } else {
                spec.error_variance = {ErrorVarianceRule::Kind::Fixed, ev.get<double>()};
            }
        }
        spec.test_loglik = j.value("test_loglik", spec.test_loglik);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("bench spec: ") + e.what());
    }
    if (spec.replicates < 1) throw Error(ErrorKind::ParseError, "replicates must be >= 1");
    return spec;
}

json to_json(const BenchSpec& spec) {
    return {{"scheme", spec.scheme == SimScheme::AlphaStudy ? "alpha_study" : "beta_study"},
            {"d", spec.d},
            {"n", spec.n},
            {"alpha", spec.alpha},
            {"beta", spec.beta},
            {"children_per_factor", spec.children_per_factor},
            {"replicates", spec.replicates},
            {"seed", spec.seed},
            {"mode", mode_name(spec.mode)},
            {"grid", grid_name(spec.grid)},
            {"singletons", spec.singletons == SingletonPolicy::Keep ? "keep" : "drop"},
            {"error_variance",
             spec.error_variance.kind == ErrorVarianceRule::Kind::Fixed ? json(spec.error_variance.value)
                                                                        : json("unit_total")},
            {"test_loglik", spec.test_loglik}};
}

double clique_size_ratio(const FactorStructure& estimated, const FactorStructure& truth) {
    const double truth_mean = mean_child_count(truth);
    if (truth_mean == 0.0) throw Error(ErrorKind::InvalidArgument, "truth has no factors");
    return mean_child_count(estimated) / truth_mean;
}

ReplicateRow run_replicate(const SimConfig& base, const BenchSpec& spec, int cell, int replicate) {
    ReplicateRow row;
    row.cell = cell;
    row.replicate = replicate;
    row.seed = derive_seed(derive_seed(spec.seed, static_cast<std::uint64_t>(cell)),
                           static_cast<std::uint64_t>(replicate));
    SimConfig cfg = base;
    cfg.seed = row.seed;
    try {
        const auto truth = gen_structure(cfg);
        const auto theta = gen_params(truth, cfg);
        const auto within = truth.within_factor_edges();
        const auto population = implied_sigma(theta);
        row.pop_thresholdable = thresholdability(population, within).thresholdable;
        row.pop_sortability = sortability(population, within);
        if (spec.mode == BenchMode::Population) return row;

        const auto data = sample_data(theta, cfg.n, derive_seed(row.seed, 2));
        const auto r = sample_correlation(data);
        row.sample_thresholdable = thresholdability(r, within).thresholdable;
        row.sample_sortability = sortability(r, within);
        const auto grid = candidate_thresholds(r, spec.grid);

        const bool scan = spec.mode == BenchMode::Scan || (spec.mode == BenchMode::Auto && cfg.p() > cfg.n);
        if (scan) {
            const auto records = ct_scan(r, grid, spec.singletons);
            const auto best = best_candidate_vs_truth(records, truth);
            const auto& chosen = records[best.index].structure;
            row.d_hat = chosen.d();
            row.hd = best.hd;
            row.f1 = best.f1;
            row.models_tested = static_cast<int>(records.size());
            row.clique_ratio = clique_size_ratio(chosen, truth);
            return row;
        }

        CtConfig ct;
        ct.singletons = spec.singletons;
        const auto result = ct_fit(r, cfg.n, grid, ct);
        const auto& selected = result.candidates[*result.selected_index];
        const auto score = structural_score(selected.structure, truth);
        row.d_hat = selected.structure.d();
        row.hd = score.hd;
        row.f1 = score.f1;
        row.tli = selected.fit->tli;
        row.rmsea = selected.fit->rmsea;
        row.models_tested = result.models_tested;
        row.clique_ratio = clique_size_ratio(selected.structure, truth);
        if (spec.test_loglik) {
            const auto heldout = sample_data(theta, cfg.n, derive_seed(row.seed, 3));
            row.test_loglik = test_loglik(*selected.fit, heldout) / cfg.n;
        }
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
    }
    return row;
}

BenchReport run_bench(const BenchSpec& spec) {
    BenchReport report;
    report.spec = spec;
    const auto configs = spec.cells();
    const int reps = spec.replicates;
    const int total = static_cast<int>(configs.size()) * reps;
    report.rows.resize(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < total; ++k) {
        report.rows[k] = run_replicate(configs[k / reps], spec, k / reps, k % reps);
    }
    for (std::size_t c = 0; c < configs.size(); ++c) {
        CellSummary summary;
        summary.config = configs[c];
        summary.config.seed = derive_seed(spec.seed, c);
        std::vector<const ReplicateRow*> rows;
        for (int r = 0; r < reps; ++r) {
            const auto& row = report.rows[c * reps + r];
            if (row.failed) {
                ++summary.failures;
            } else {
                rows.push_back(&row);
            }
        }
        summary.metrics = aggregate_rows(rows);
        report.cells.push_back(std::move(summary));
    }
    return report;
}

std::map<std::string, double> row_metrics(const ReplicateRow& row) {
    std::map<std::string, double> m;
    m["pop_thresholdable"] = row.pop_thresholdable ? 1.0 : 0.0;
    m["pop_sortability"] = row.pop_sortability;
    if (row.sample_thresholdable) m["sample_thresholdable"] = *row.sample_thresholdable ? 1.0 : 0.0;
    if (row.sample_sortability) m["sample_sortability"] = *row.sample_sortability;
    if (row.d_hat) m["d_hat"] = *row.d_hat;
    if (row.hd) m["hd"] = *row.hd;
    if (row.f1) m["f1"] = *row.f1;
    if (row.tli) m["tli"] = *row.tli;
    if (row.rmsea) m["rmsea"] = *row.rmsea;
    if (row.test_loglik) m["test_loglik"] = *row.test_loglik;
    if (row.models_tested) m["models_tested"] = *row.models_tested;
    if (row.clique_ratio) m["clique_ratio"] = *row.clique_ratio;
    return m;
}

std::map<std::string, Aggregate> aggregate_rows(const std::vector<const ReplicateRow*>& rows) {
    std::map<std::string, std::vector<double>> values;
    for (const auto* row : rows) {
        for (const auto& [name, v] : row_metrics(*row)) values[name].push_back(v);
    }
    std::map<std::string, Aggregate> out;
    for (const auto& [name, xs] : values) {
        Aggregate a;
        a.count = static_cast<int>(xs.size());
        double sum = 0.0;
        for (double x : xs) sum += x;
        a.mean = sum / a.count;
        double ss = 0.0;
        for (double x : xs) ss += (x - a.mean) * (x - a.mean);
        a.sd = a.count > 1 ? std::sqrt(ss / (a.count - 1)) : 0.0;
        out[name] = a;
    }
    return out;
}

json to_json(const ReplicateRow& row) {
    json j = {{"cell", row.cell},
              {"replicate", row.replicate},
              {"seed", row.seed},
              {"failed", row.failed},
              {"pop_thresholdable", row.pop_thresholdable},
              {"pop_sortability", row.pop_sortability},
              {"sample_thresholdable", optional_json(row.sample_thresholdable)},
              {"sample_sortability", optional_json(row.sample_sortability)},
              {"d_hat", optional_json(row.d_hat)},
              {"hd", optional_json(row.hd)},
              {"f1", optional_json(row.f1)},
              {"tli", optional_json(row.tli)},
              {"rmsea", optional_json(row.rmsea)},
              {"test_loglik", optional_json(row.test_loglik)},
              {"models_tested", optional_json(row.models_tested)},
              {"clique_ratio", optional_json(row.clique_ratio)}};
    if (row.failed) j["error"] = row.error;
    return j;
}

json to_json(const BenchReport& report) {
    json cells = json::array();
    for (const auto& cell : report.cells) {
        json metrics = json::object();
        for (const auto& [name, a] : cell.metrics) {
            metrics[name] = {{"count", a.count}, {"mean", a.mean}, {"sd", a.sd}};
        }
        cells.push_back({{"config", to_json(cell.config)}, {"failures", cell.failures}, {"metrics", metrics}});
    }
    json rows = json::array();
    for (const auto& row : report.rows) rows.push_back(to_json(row));
    return {{"schema_version", BenchReport::schema_version},
            {"spec", to_json(report.spec)},
            {"cells", std::move(cells)},
            {"rows", std::move(rows)}};
}

std::string to_tsv(const BenchReport& report) {
    static const char* names[] = {"pop_thresholdable", "pop_sortability", "sample_thresholdable",
                                  "sample_sortability", "d_hat", "hd", "f1", "tli", "rmsea",
                                  "test_loglik", "models_tested", "clique_ratio"};
    std::ostringstream out;
    out << "cell\td\tn\talpha\tbeta\tfailures";
    for (const char* name : names) out << '\t' << name;
    out << '\n' << std::setprecision(10);
    for (std::size_t c = 0; c < report.cells.size(); ++c) {
        const auto& cell = report.cells[c];
        out << c << '\t' << cell.config.d << '\t' << cell.config.n << '\t' << cell.config.alpha << '\t'
            << cell.config.beta << '\t' << cell.failures;
        for (const char* name : names) {
            const auto it = cell.metrics.find(name);
            out << '\t';
            if (it != cell.metrics.end()) {
                out << it->second.mean;
            } else {
                out << "NA";
            }
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace ctfa
