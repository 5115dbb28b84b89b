// Command-line front end: fit, scan, bench, simulate.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ctfa/bench.hpp"
#include "ctfa/error.hpp"
#include "ctfa/io.hpp"
#include "ctfa/pipeline.hpp"
#include "ctfa/simgen.hpp"

namespace {

using namespace ctfa;

constexpr int kInputError = 2;
constexpr int kNoResult = 3;
constexpr int kNumericalFailure = 4;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NoCandidates: return kNoResult;
        case ErrorKind::NotPositiveDefinite:
        case ErrorKind::NonConvergence:
        case ErrorKind::DegenerateBaseline:
        case ErrorKind::NegativeErrorVariance: return kNumericalFailure;
        default: return kInputError;
    }
}

GridMode parse_grid(const std::string& s) {
    if (s == "unique") return GridMode::unique();
    if (s.rfind("equi:", 0) == 0) {
        try {
            const int m = std::stoi(s.substr(5));
            if (m >= 1) return GridMode::equidistant(m);
        } catch (const std::exception&) {
        }
    }
    throw Error(ErrorKind::InvalidArgument, "--grid must be 'unique' or 'equi:<m>'");
}

SingletonPolicy parse_singletons(const std::string& s) {
    if (s == "drop") return SingletonPolicy::Drop;
    if (s == "keep") return SingletonPolicy::Keep;
    throw Error(ErrorKind::InvalidArgument, "--singletons must be keep or drop");
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + out_path);
    out << j.dump(2) << '\n';
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
}

struct InputOptions {
    std::string data_path;
    std::string corr_path;
    int n = 0;
};

// Returns the correlation matrix and the sample size to use.
std::pair<CorrelationMatrix, int> load_input(const InputOptions& in, bool n_required) {
    if (in.data_path.empty() == in.corr_path.empty()) {
        throw Error(ErrorKind::InvalidArgument, "give exactly one of --data or --corr");
    }
    if (!in.data_path.empty()) {
        const auto table = read_csv(in.data_path);
        return {sample_correlation(table.values), static_cast<int>(table.values.rows())};
    }
    if (n_required && in.n < 2) throw Error(ErrorKind::InvalidArgument, "--corr requires --n >= 2");
    return {read_correlation_csv(in.corr_path), in.n};
}

// 1-based, for people.
std::string describe(const FactorStructure& s) {
    std::ostringstream out;
    out << "d = " << s.d();
    for (int j = 0; j < s.d(); ++j) {
        out << "\n  factor " << j + 1 << ":";
        for (int i : s.children(j)) out << " X" << i + 1;
    }
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Correlation-thresholding structure learning for exploratory factor analysis.\n"
        "Machine output (JSON/CSV) uses 0-based variable and factor indices;\n"
        "human-readable summaries on stderr are 1-based."};
    app.require_subcommand(1);

    InputOptions input;
    std::string grid = "unique";
    std::string singletons = "drop";
    std::string out_path;
    std::uint64_t seed = 1;
    bool no_null = false;
    bool quiet = false;

    auto* fit_cmd = app.add_subcommand("fit", "Run the full threshold/clique/estimate/BIC procedure");
    fit_cmd->add_option("--data", input.data_path, "Raw data CSV (rows = observations)");
    fit_cmd->add_option("--corr", input.corr_path, "Correlation matrix CSV (p x p)");
    fit_cmd->add_option("--n", input.n, "Sample size behind --corr");
    fit_cmd->add_option("--grid", grid, "unique | equi:<m>")->capture_default_str();
    fit_cmd->add_option("--singletons", singletons, "keep | drop")->capture_default_str();
    fit_cmd->add_option("--seed", seed, "Recorded for reproducibility");
    fit_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");
    fit_cmd->add_flag("--no-null", no_null, "Do not fit the d = 0 noise model");
    fit_cmd->add_flag("--quiet", quiet, "No summary on stderr");

    std::string scan_grid = "equi:50";
    std::string truth_path;
    auto* scan_cmd = app.add_subcommand("scan", "Propose structures per threshold without estimation");
    scan_cmd->add_option("--corr", input.corr_path, "Correlation matrix CSV (p x p)");
    scan_cmd->add_option("--data", input.data_path, "Raw data CSV");
    scan_cmd->add_option("--grid", scan_grid, "unique | equi:<m>")->capture_default_str();
    scan_cmd->add_option("--singletons", singletons, "keep | drop")->capture_default_str();
    scan_cmd->add_option("--truth", truth_path, "Structure JSON to score every record against");
    scan_cmd->add_option("--seed", seed, "Recorded for reproducibility");
    scan_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");

    std::string spec_path;
    std::string tsv_path;
    auto* bench_cmd = app.add_subcommand("bench", "Run a seeded simulation grid");
    bench_cmd->add_option("spec", spec_path, "Benchmark spec JSON")->required();
    bench_cmd->add_option("--out", out_path, "Write report JSON here instead of stdout");
    bench_cmd->add_option("--tsv", tsv_path, "Also write per-cell means as TSV");
    bench_cmd->add_option("--seed", seed, "Override the spec seed");

    std::string config_path;
    SimConfig sim;
    std::string scheme = "alpha_study";
    auto* sim_cmd = app.add_subcommand("simulate", "Emit a generated structure, parameters and data");
    sim_cmd->add_option("--config", config_path, "SimConfig JSON (flags below are ignored when given)");
    sim_cmd->add_option("--d", sim.d, "Number of factors")->capture_default_str();
    sim_cmd->add_option("--children", sim.children_per_factor, "Children per factor")->capture_default_str();
    sim_cmd->add_option("--n", sim.n, "Sample size")->capture_default_str();
    sim_cmd->add_option("--alpha", sim.alpha, "Factor-correlation scale")->capture_default_str();
    sim_cmd->add_option("--beta", sim.beta, "Fraction of factors losing unique children")->capture_default_str();
    sim_cmd->add_option("--scheme", scheme, "alpha_study | beta_study")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "Seed")->capture_default_str();
    sim_cmd->add_option("--out", out_path, "Prefix: writes <prefix>.json, <prefix>.csv, <prefix>_corr.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        if (fit_cmd->parsed()) {
            const auto [r, n] = load_input(input, true);
            CtConfig cfg;
            cfg.singletons = parse_singletons(singletons);
            cfg.fit_null_model = !no_null;
            const auto result = ct_fit(r, n, candidate_thresholds(r, parse_grid(grid)), cfg);
            auto j = to_json(result);
            j["n"] = n;
            j["p"] = r.p();
            j["seed"] = seed;
            emit(j, out_path);
            if (!quiet && result.selected_index) {
                const auto& sel = result.candidates[*result.selected_index];
                std::cerr << "models tested: " << result.models_tested << "\nselected (BIC "
                          << sel.fit->bic << "): " << describe(sel.structure) << '\n';
                if (result.selected_unconverged) std::cerr << "warning: no fit converged\n";
            }
            return 0;
        }
        if (scan_cmd->parsed()) {
            const auto [r, n] = load_input(input, false);
            (void)n;
            const auto records = ct_scan(r, candidate_thresholds(r, parse_grid(scan_grid)), parse_singletons(singletons));
            json rows = json::array();
            for (const auto& rec : records) rows.push_back(to_json(rec));
            json j = {{"p", r.p()}, {"seed", seed}, {"records", rows}};
            if (!truth_path.empty()) {
                const auto truth = structure_from_json(read_json_file(truth_path));
                for (std::size_t k = 0; k < records.size(); ++k) {
                    const auto score = structural_score(records[k].structure, truth);
                    j["records"][k]["hd"] = score.hd;
                    j["records"][k]["f1"] = score.f1;
                }
                const auto best = best_candidate_vs_truth(records, truth);
                j["best"] = {{"index", best.index}, {"hd", best.hd}, {"f1", best.f1}};
            }
            emit(j, out_path);
            return 0;
        }
        if (bench_cmd->parsed()) {
            auto spec = bench_spec_from_json(read_json_file(spec_path));
            if (bench_cmd->count("--seed") > 0) spec.seed = seed;
            const auto report = run_bench(spec);
            emit(to_json(report), out_path);
            if (!tsv_path.empty()) {
                std::ofstream tsv(tsv_path);
                if (!tsv) throw Error(ErrorKind::InvalidArgument, "cannot write " + tsv_path);
                tsv << to_tsv(report);
            }
            return 0;
        }
        if (sim_cmd->parsed()) {
            if (!config_path.empty()) {
                sim = sim_config_from_json(read_json_file(config_path));
            } else {
                if (scheme == "alpha_study") {
                    sim.scheme = SimScheme::AlphaStudy;
                } else if (scheme == "beta_study") {
                    sim.scheme = SimScheme::BetaStudy;
                } else {
                    throw Error(ErrorKind::InvalidArgument, "--scheme must be alpha_study or beta_study");
                }
                sim.validate();
            }
            const auto structure = gen_structure(sim);
            const auto theta = gen_params(structure, sim);
            const auto population = implied_sigma(theta);
            json j = {{"config", to_json(sim)}, {"structure", to_json(structure)}, {"theta", to_json(theta)}};
            if (out_path.empty()) {
                std::cout << j.dump(2) << '\n';
                return 0;
            }
            emit(j, out_path + ".json");
            std::ofstream data(out_path + ".csv");
            std::ofstream corr(out_path + "_corr.csv");
            if (!data || !corr) throw Error(ErrorKind::InvalidArgument, "cannot write under prefix " + out_path);
            std::vector<std::string> header;
            for (int i = 0; i < structure.p(); ++i) header.push_back("X" + std::to_string(i + 1));
            write_csv(data, sample_data(theta, sim.n, derive_seed(sim.seed, 2)), header);
            write_csv(corr, population.matrix());
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kInputError;
}
