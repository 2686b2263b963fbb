#include "ratchet/run_config.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ratchet {

namespace {

const std::set<std::string> kExperiments = {"evolve",        "sweep-eta", "sweep-strength",
                                            "sweep-kappa",   "floquet-bands", "reversal",
                                            "find-reversal"};

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError("config: field '" + field + "': " + why);
}

double get_number(const nlohmann::json& section, const std::string& section_name,
                  const std::string& key, double fallback) {
    if (!section.contains(key)) return fallback;
    const auto& v = section.at(key);
    if (!v.is_number()) fail(section_name + "." + key, "expected a number");
    return v.get<double>();
}

}  // namespace

void RunConfig::validate() const {
    params.validate();
    if (kExperiments.find(experiment) == kExperiments.end())
        fail("run.experiment", "unknown experiment '" + experiment + "'");
    if (periods < 1) fail("run.periods", "must be >= 1");
    if (x0_points < 2) fail("run.x0_points", "must be >= 2");
    if (!(p_lo < p_hi)) fail("run.p_interval", "requires p_lo < p_hi");
}

RunConfig parse_config_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");

    static const std::set<std::string> top_keys = {"params", "run", "output"};
    for (const auto& [key, value] : doc.items())
        if (top_keys.find(key) == top_keys.end()) fail(key, "unknown section");

    RunConfig config;
    const nlohmann::json params = doc.value("params", nlohmann::json::object());
    const nlohmann::json run = doc.value("run", nlohmann::json::object());
    const nlohmann::json output = doc.value("output", nlohmann::json::object());

    static const std::set<std::string> param_keys = {"kappa_pi", "eta",      "pstrength",
                                                     "alpha",    "tail_tol", "order", "k_cap"};
    for (const auto& [key, value] : params.items())
        if (param_keys.find(key) == param_keys.end()) fail("params." + key, "unknown key");
    static const std::set<std::string> run_keys = {"experiment", "periods", "x0_points",
                                                   "values",     "p_lo",    "p_hi"};
    for (const auto& [key, value] : run.items())
        if (run_keys.find(key) == run_keys.end()) fail("run." + key, "unknown key");
    static const std::set<std::string> out_keys = {"path", "format", "timestamp"};
    for (const auto& [key, value] : output.items())
        if (out_keys.find(key) == out_keys.end()) fail("output." + key, "unknown key");

    config.params.kappa = get_number(params, "params", "kappa_pi", 1.0) * kPi;
    config.params.eta = get_number(params, "params", "eta", 0.5);
    config.params.strength_P = get_number(params, "params", "pstrength", 0.5);
    config.params.alpha = get_number(params, "params", "alpha", kDefaultAlpha);
    config.params.tail_tol = get_number(params, "params", "tail_tol", kDefaultTailTol);
    config.params.k_cap =
        static_cast<std::int64_t>(get_number(params, "params", "k_cap",
                                             static_cast<double>(kDefaultKCap)));
    if (params.contains("order")) {
        const std::string order = params.at("order").is_string()
                                      ? params.at("order").get<std::string>()
                                      : std::string();
        if (order == "v1-first")
            config.params.kick_order = KickOrder::V1First;
        else if (order == "v2-first")
            config.params.kick_order = KickOrder::V2First;
        else
            fail("params.order", "expected 'v1-first' or 'v2-first'");
    }

    if (run.contains("experiment")) {
        if (!run.at("experiment").is_string()) fail("run.experiment", "expected a string");
        config.experiment = run.at("experiment").get<std::string>();
    }
    config.periods = static_cast<std::int64_t>(get_number(run, "run", "periods", 200.0));
    config.x0_points = static_cast<int>(get_number(run, "run", "x0_points", 256.0));
    config.p_lo = get_number(run, "run", "p_lo", 2.0);
    config.p_hi = get_number(run, "run", "p_hi", 3.0);
    if (run.contains("values")) {
        if (!run.at("values").is_array()) fail("run.values", "expected an array of numbers");
        for (const auto& v : run.at("values")) {
            if (!v.is_number()) fail("run.values", "expected an array of numbers");
            config.sweep_values.push_back(v.get<double>());
        }
    }

    if (output.contains("path")) {
        if (!output.at("path").is_string()) fail("output.path", "expected a string");
        config.out_path = output.at("path").get<std::string>();
    }
    if (output.contains("format")) {
        const std::string fmt = output.at("format").is_string()
                                    ? output.at("format").get<std::string>()
                                    : std::string();
        if (fmt == "csv")
            config.format = OutputFormat::Csv;
        else if (fmt == "json")
            config.format = OutputFormat::Json;
        else
            fail("output.format", "expected 'csv' or 'json'");
    }
    if (output.contains("timestamp")) {
        if (!output.at("timestamp").is_boolean()) fail("output.timestamp", "expected a boolean");
        config.timestamp = output.at("timestamp").get<bool>();
    }

    config.validate();
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> config_header(const RunConfig& config) {
    std::vector<std::string> lines;
    lines.push_back("# qratchet 0.1.0");
    lines.push_back("# experiment=" + config.experiment);
    std::string p = "# params: kappa=" + format_double(config.params.kappa) +
                    " eta=" + format_double(config.params.eta) +
                    " pstrength=" + format_double(config.params.strength_P) +
                    " alpha=" + format_double(config.params.alpha) +
                    " order=" +
                    (config.params.kick_order == KickOrder::V1First ? "v1-first" : "v2-first") +
                    " tail_tol=" + format_double(config.params.tail_tol) +
                    " k_cap=" + std::to_string(config.params.k_cap);
    lines.push_back(p);
    std::string r = "# run: periods=" + std::to_string(config.periods) +
                    " x0_points=" + std::to_string(config.x0_points);
    if (config.experiment == "find-reversal")
        r += " p_lo=" + format_double(config.p_lo) + " p_hi=" + format_double(config.p_hi);
    if (!config.sweep_values.empty()) {
        r += " values=";
        for (std::size_t i = 0; i < config.sweep_values.size(); ++i) {
            if (i) r += ",";
            r += format_double(config.sweep_values[i]);
        }
    }
    lines.push_back(r);
    if (config.timestamp) {
        char buf[64];
        const std::time_t now = std::time(nullptr);
        std::tm tm_utc{};
        gmtime_r(&now, &tm_utc);
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
        lines.push_back(std::string("# generated: ") + buf);
    }
    return lines;
}

namespace {

void write_header(std::ostream& os, const RunConfig& config) {
    for (const std::string& line : config_header(config)) os << line << "\n";
}

nlohmann::json header_json(const RunConfig& config) {
    nlohmann::json h;
    h["artifact"] = "qratchet 0.1.0";
    h["experiment"] = config.experiment;
    h["params"] = {{"kappa", config.params.kappa},
                   {"eta", config.params.eta},
                   {"pstrength", config.params.strength_P},
                   {"alpha", config.params.alpha},
                   {"order", config.params.kick_order == KickOrder::V1First ? "v1-first"
                                                                            : "v2-first"},
                   {"tail_tol", config.params.tail_tol},
                   {"k_cap", config.params.k_cap}};
    h["run"] = {{"periods", config.periods}, {"x0_points", config.x0_points}};
    return h;
}

}  // namespace

void write_trajectory(std::ostream& os, const RunConfig& config,
                      const std::vector<TrajectoryRecord>& records) {
    if (config.format == OutputFormat::Json) {
        nlohmann::json doc;
        doc["header"] = header_json(config);
        nlohmann::json rows = nlohmann::json::array();
        for (const TrajectoryRecord& r : records)
            rows.push_back({{"period", r.t},
                            {"mean_k", r.mean_k},
                            {"mean_k2", r.mean_k2},
                            {"norm_error", r.norm_error},
                            {"period_force", r.period_force},
                            {"kmin", r.k_min},
                            {"kmax", r.k_max}});
        doc["rows"] = std::move(rows);
        os << doc.dump(2) << "\n";
        return;
    }
    write_header(os, config);
    os << "period,mean_k,mean_k2,norm_error,period_force,kmin,kmax\n";
    for (const TrajectoryRecord& r : records)
        os << r.t << ',' << format_double(r.mean_k) << ',' << format_double(r.mean_k2) << ','
           << format_double(r.norm_error) << ',' << format_double(r.period_force) << ','
           << r.k_min << ',' << r.k_max << "\n";
}

void write_sweep(std::ostream& os, const RunConfig& config, const SweepResult& result) {
    if (config.format == OutputFormat::Json) {
        nlohmann::json doc;
        doc["header"] = header_json(config);
        doc["parameter"] = result.parameter;
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < result.values.size(); ++i)
            rows.push_back({{"param", result.values[i]},
                            {"mean_k_final", result.final_mean_k[i]},
                            {"mean_k_early", result.early_mean_k[i]}});
        doc["rows"] = std::move(rows);
        os << doc.dump(2) << "\n";
        return;
    }
    write_header(os, config);
    os << "param,mean_k_final\n";
    for (std::size_t i = 0; i < result.values.size(); ++i)
        os << format_double(result.values[i]) << ',' << format_double(result.final_mean_k[i])
           << "\n";
}

void write_bands(std::ostream& os, const RunConfig& config, const BandSpectrum& spectrum) {
    const std::size_t n_bands = spectrum.bands.size();
    if (config.format == OutputFormat::Json) {
        nlohmann::json doc;
        doc["header"] = header_json(config);
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < spectrum.x0_grid.size(); ++i) {
            nlohmann::json row = {{"x0", spectrum.x0_grid[i]}};
            for (std::size_t b = 0; b < n_bands; ++b)
                row["omega" + std::to_string(b + 1)] = spectrum.bands[b][i];
            rows.push_back(std::move(row));
        }
        doc["rows"] = std::move(rows);
        os << doc.dump(2) << "\n";
        return;
    }
    write_header(os, config);
    os << "x0";
    for (std::size_t b = 1; b <= n_bands; ++b) os << ",omega" << b;
    os << "\n";
    for (std::size_t i = 0; i < spectrum.x0_grid.size(); ++i) {
        os << format_double(spectrum.x0_grid[i]);
        for (std::size_t b = 0; b < n_bands; ++b) os << ',' << format_double(spectrum.bands[b][i]);
        os << "\n";
    }
}

void write_scalar(std::ostream& os, const RunConfig& config, const std::string& name,
                  double value) {
    if (config.format == OutputFormat::Json) {
        nlohmann::json doc;
        doc["header"] = header_json(config);
        doc[name] = value;
        os << doc.dump(2) << "\n";
        return;
    }
    write_header(os, config);
    os << name << "\n" << format_double(value) << "\n";
}

}  // namespace ratchet
