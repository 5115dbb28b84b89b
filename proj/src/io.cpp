#include "ctfa/io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ctfa/error.hpp"

namespace ctfa {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size();
}

}  // namespace

CsvTable parse_csv(std::istream& in) {
    CsvTable table;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t k = 0; k < fields.size() && numeric; ++k) numeric = parse_number(fields[k], row[k]);
        if (!numeric) {
            if (rows.empty() && table.header.empty()) {
                table.header = fields;
                continue;
            }
            throw Error(ErrorKind::ParseError, "non-numeric field on line " + std::to_string(line_no));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw Error(ErrorKind::ParseError, "ragged row on line " + std::to_string(line_no));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorKind::ParseError, "no numeric rows");
    if (!table.header.empty() && table.header.size() != rows.front().size()) {
        throw Error(ErrorKind::ParseError, "header width differs from data width");
    }
    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) table.values(i, j) = rows[i][j];
    }
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    return parse_csv(in);
}

void write_csv(std::ostream& out, const Matrix& values, const std::vector<std::string>& header) {
    if (!header.empty()) {
        for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
        out << '\n';
    }
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << values(i, j);
        out << '\n';
    }
}

CorrelationMatrix read_correlation_csv(const std::string& path, CorrelationKind kind) {
    const auto table = read_csv(path);
    if (table.values.rows() != table.values.cols()) {
        throw Error(ErrorKind::ParseError, "correlation CSV must be square");
    }
    try {
        return CorrelationMatrix(table.values, kind, 1e-6);
    } catch (const Error& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

namespace {

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const FactorStructure& s) {
    json support = json::array();
    for (const auto& [i, j] : s.support()) support.push_back({i, j});
    return {{"p", s.p()}, {"d", s.d()}, {"support", std::move(support)}};
}

FactorStructure structure_from_json(const json& j) {
    try {
        std::vector<Loading> support;
        for (const auto& e : j.at("support")) support.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        return FactorStructure(j.at("p").get<int>(), j.at("d").get<int>(), std::move(support));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("structure JSON: ") + e.what());
    }
}

json to_json(const FactorParams& theta) {
    return {{"loadings", matrix_json(theta.loadings)},
            {"phi", matrix_json(theta.phi)},
            {"omega", std::vector<double>(theta.omega.data(), theta.omega.data() + theta.omega.size())}};
}

json to_json(const FitResult& fit) {
    return {{"theta_hat", to_json(fit.theta_hat)},
            {"structure", to_json(fit.structure)},
            {"n", fit.n},
            {"loglik", fit.loglik},
            {"f_ml", fit.f_ml},
            {"n_params", fit.n_params},
            {"df", fit.df},
            {"bic", fit.bic},
            {"tli", optional_json(fit.tli)},
            {"rmsea", optional_json(fit.rmsea)},
            {"converged", fit.converged},
            {"iterations", fit.iterations},
            {"heywood", fit.heywood}};
}

json to_json(const CandidateRecord& record) {
    json j = {{"tau", record.tau},
              {"tau_max", record.tau_max},
              {"d", record.structure.d()},
              {"structure", to_json(record.structure)}};
    if (record.fit) {
        j["bic"] = record.fit->bic;
        j["tli"] = optional_json(record.fit->tli);
        j["rmsea"] = optional_json(record.fit->rmsea);
        j["converged"] = record.fit->converged;
        j["fit"] = to_json(*record.fit);
    }
    return j;
}

json to_json(const CtResult& result) {
    json candidates = json::array();
    for (const auto& c : result.candidates) candidates.push_back(to_json(c));
    json j = {{"models_tested", result.models_tested},
              {"candidates", std::move(candidates)},
              {"selected_index", result.selected_index ? json(*result.selected_index) : json(nullptr)},
              {"selected_unconverged", result.selected_unconverged}};
    if (result.selected_index) j["selected"] = to_json(result.candidates[*result.selected_index]);
    return j;
}

json to_json(const SimConfig& cfg) {
    return {{"d", cfg.d},
            {"children_per_factor", cfg.children_per_factor},
            {"n", cfg.n},
            {"alpha", cfg.alpha},
            {"beta", cfg.beta},
            {"loading_range", {cfg.loading_range.first, cfg.loading_range.second}},
            {"phi_range", {cfg.phi_range.first, cfg.phi_range.second}},
            {"scheme", cfg.scheme == SimScheme::AlphaStudy ? "alpha_study" : "beta_study"},
            {"error_variance",
             cfg.error_variance.kind == ErrorVarianceRule::Kind::Fixed ? json(cfg.error_variance.value)
                                                                       : json("unit_total")},
            {"seed", cfg.seed},
            {"max_retries", cfg.max_retries}};
}

SimConfig sim_config_from_json(const json& j) {
    SimConfig cfg;
    try {
        cfg.d = j.value("d", cfg.d);
        cfg.children_per_factor = j.value("children_per_factor", cfg.children_per_factor);
        cfg.n = j.value("n", cfg.n);
        cfg.alpha = j.value("alpha", cfg.alpha);
        cfg.beta = j.value("beta", cfg.beta);
        if (j.contains("loading_range")) {
            cfg.loading_range = {j["loading_range"].at(0).get<double>(), j["loading_range"].at(1).get<double>()};
        }
        if (j.contains("phi_range")) {
            cfg.phi_range = {j["phi_range"].at(0).get<double>(), j["phi_range"].at(1).get<double>()};
        }
        const auto scheme = j.value("scheme", std::string("alpha_study"));
        if (scheme == "alpha_study") {
            cfg.scheme = SimScheme::AlphaStudy;
        } else if (scheme == "beta_study") {
            cfg.scheme = SimScheme::BetaStudy;
        } else {
            throw Error(ErrorKind::ParseError, "unknown scheme " + scheme);
        }
        if (j.contains("error_variance")) {
            const auto& ev = j["error_variance"];
            if (ev.is_string() && ev.get<std::string>() == "unit_total") {
                cfg.error_variance = {ErrorVarianceRule::Kind::UnitTotal, 0.0};
            } else {
                cfg.error_variance = {ErrorVarianceRule::Kind::Fixed, ev.get<double>()};
            }
        }
        cfg.seed = j.value("seed", cfg.seed);
        cfg.max_retries = j.value("max_retries", cfg.max_retries);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("simulation config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

}  // namespace ctfa
