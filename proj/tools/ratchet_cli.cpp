// Command-line front end: dispatches the experiments and writes CSV/JSON
// tables whose header records the fully resolved configuration.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ratchet/experiments.hpp"
#include "ratchet/floquet.hpp"
#include "ratchet/run_config.hpp"
#include "ratchet/types.hpp"

namespace {

using ratchet::RunConfig;

struct CliOverrides {
    std::optional<double> kappa_pi, eta, pstrength, alpha, tail_tol, p_lo, p_hi;
    std::optional<std::int64_t> periods;
    std::optional<int> x0_points;
    std::optional<std::string> order, format, out;
    std::vector<double> values;
    std::string config_path;
};

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--config", o.config_path, "JSON run-config file (flags override it)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--kappa-pi", o.kappa_pi, "kappa in units of pi");
    cmd->add_option("--eta", o.eta, "time delay in [0,1)");
    cmd->add_option("--pstrength", o.pstrength, "potential strength P = K/kappa");
    cmd->add_option("--alpha", o.alpha, "relative strength of the sin(2x) potential");
    cmd->add_option("--periods", o.periods, "number of flash periods");
    cmd->add_option("--order", o.order, "kick order: v1-first | v2-first")
        ->check(CLI::IsMember({"v1-first", "v2-first"}));
    cmd->add_option("--tail-tol", o.tail_tol, "truncation probability threshold");
    cmd->add_option("--format", o.format, "output format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "output path (default: stdout)");
}

// flags win over config-file values
void apply_overrides(RunConfig& config, const CliOverrides& o) {
    if (o.kappa_pi) config.params.kappa = *o.kappa_pi * ratchet::kPi;
    if (o.eta) config.params.eta = *o.eta;
    if (o.pstrength) config.params.strength_P = *o.pstrength;
    if (o.alpha) config.params.alpha = *o.alpha;
    if (o.tail_tol) config.params.tail_tol = *o.tail_tol;
    if (o.periods) config.periods = *o.periods;
    if (o.x0_points) config.x0_points = *o.x0_points;
    if (o.p_lo) config.p_lo = *o.p_lo;
    if (o.p_hi) config.p_hi = *o.p_hi;
    if (o.order) config.params.kick_order =
        *o.order == "v1-first" ? ratchet::KickOrder::V1First : ratchet::KickOrder::V2First;
    if (o.format) config.format = *o.format == "csv" ? ratchet::OutputFormat::Csv
                                                     : ratchet::OutputFormat::Json;
    if (o.out) config.out_path = *o.out;
    if (!o.values.empty()) config.sweep_values = o.values;
}

int run_experiment(const RunConfig& config) {
    std::ofstream file;
    if (!config.out_path.empty()) {
        file.open(config.out_path);
        if (!file) {
            std::cerr << "error: cannot write '" << config.out_path << "'\n";
            return 2;
        }
    }
    std::ostream& os = config.out_path.empty() ? std::cout : file;

    if (config.experiment == "evolve") {
        ratchet::write_trajectory(os, config,
                                  ratchet::time_series_experiment(config.params, config.periods));
    } else if (config.experiment == "sweep-eta") {
        ratchet::write_sweep(os, config,
                             ratchet::eta_sweep(config.params, config.sweep_values, config.periods));
    } else if (config.experiment == "sweep-strength") {
        std::vector<double> values = config.sweep_values;
        if (values.empty())
            for (int i = 1; i <= 16; ++i) values.push_back(0.25 * i);
        ratchet::write_sweep(os, config,
                             ratchet::strength_sweep(config.params, values, config.periods));
    } else if (config.experiment == "sweep-kappa") {
        ratchet::write_sweep(
            os, config, ratchet::kappa_sweep(config.params, config.sweep_values, config.periods));
    } else if (config.experiment == "floquet-bands") {
        ratchet::write_bands(os, config, ratchet::band_scan(config.params, config.x0_points));
    } else if (config.experiment == "reversal") {
        ratchet::write_scalar(os, config, "order_reversal_difference",
                              ratchet::order_reversal_difference(config.params, config.periods));
    } else if (config.experiment == "find-reversal") {
        ratchet::write_scalar(
            os, config, "reversal_strength",
            ratchet::find_reversal_strength(config.params, config.p_lo, config.p_hi,
                                            config.periods));
    } else {
        std::cerr << "error: unknown experiment '" << config.experiment << "'\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delta-kicked flashing-ratchet simulator"};
    app.require_subcommand(1);

    CliOverrides o;
    std::string experiment;

    CLI::App* evolve = app.add_subcommand("evolve", "time series of one trajectory");
    add_common_flags(evolve, o);
    evolve->callback([&] { experiment = "evolve"; });

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep: eta | strength | kappa");
    std::string sweep_which;
    sweep->add_option("which", sweep_which, "eta | strength | kappa")
        ->required()
        ->check(CLI::IsMember({"eta", "strength", "kappa"}));
    sweep->add_option("--values", o.values, "explicit parameter values")->delimiter(',');
    add_common_flags(sweep, o);
    sweep->callback([&] { experiment = "sweep-" + sweep_which; });

    CLI::App* floquet = app.add_subcommand("floquet", "Floquet band analysis");
    CLI::App* bands = floquet->add_subcommand("bands", "quasienergy bands over x0");
    bands->add_option("--x0-points", o.x0_points, "grid size over the quasi-position domain");
    add_common_flags(bands, o);
    floquet->require_subcommand(1);
    bands->callback([&] { experiment = "floquet-bands"; });

    CLI::App* reversal = app.add_subcommand("reversal", "kick-order reversal difference metric");
    add_common_flags(reversal, o);
    reversal->callback([&] { experiment = "reversal"; });

    CLI::App* find_rev = app.add_subcommand("find-reversal", "bisect the current-reversal strength");
    find_rev->add_option("--p-min", o.p_lo, "lower end of the P interval");
    find_rev->add_option("--p-max", o.p_hi, "upper end of the P interval");
    add_common_flags(find_rev, o);
    find_rev->callback([&] { experiment = "find-reversal"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig config;
        if (!o.config_path.empty()) config = ratchet::load_config(o.config_path);
        if (!experiment.empty()) config.experiment = experiment;
        apply_overrides(config, o);
        config.validate();
        return run_experiment(config);
    } catch (const ratchet::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ratchet::SimulationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
