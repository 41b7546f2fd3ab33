#include "run.hpp"

#include <bresse/errors.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <ostream>

namespace bresse::cli {

namespace {

using Overrides = std::map<std::string, std::string>;

void add_setting(CLI::App* app, Overrides& over, const std::string& flag, const std::string& key,
                 const std::string& help) {
    app->add_option_function<std::string>(
        "--" + flag, [&over, key](const std::string& v) { over[key] = v; }, help);
}

void add_switch(CLI::App* app, Overrides& over, const std::string& flag, const std::string& key,
                const std::string& help) {
    app->add_flag_callback("--" + flag, [&over, key] { over[key] = "1"; }, help);
}

void add_profile_options(CLI::App* app, Overrides& over) {
    add_setting(app, over, "profile", "profile", "gaussian | box | band | deriv_gaussian");
    add_setting(app, over, "slot", "slot", "initial-data slot, e.g. psi1 or theta10");
    add_setting(app, over, "sigma", "sigma", "Gaussian width");
    add_setting(app, over, "half-width", "half_width", "box half width");
    add_setting(app, over, "band-lo", "band_lo", "band lower edge");
    add_setting(app, over, "band-hi", "band_hi", "band upper edge");
    add_setting(app, over, "order", "order", "derivative order of deriv_gaussian");
}

void add_envelope_options(CLI::App* app, Overrides& over) {
    add_setting(app, over, "modes", "modes", "number of log-spaced frequencies");
    add_setting(app, over, "xi-min", "xi_min", "smallest frequency");
    add_setting(app, over, "xi-max", "xi_max", "largest frequency");
}

ExperimentConfig build_config(const std::string& command, const std::string& config_path, const Overrides& over) {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
        apply_settings(cfg, read_key_values(in));
    }
    apply_settings(cfg, over);
    apply_settings(cfg, {{"command", command}});
    return cfg;
}

} // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fourier-space experiments for thermoelastic Bresse systems"};
    app.require_subcommand(1);
    Overrides over;
    std::string config_path;
    app.add_option("--config", config_path, "key = value file; command-line flags take precedence");
    add_setting(&app, over, "out", "out", "output directory");
    add_setting(&app, over, "threads", "threads", "worker threads");
    add_setting(&app, over, "seed", "seed", "seed of the random initial states (default 42)");
    add_setting(&app, over, "kind", "kind", "type1 | type3");
    add_switch(&app, over, "allow-degenerate", "allow_degenerate", "accept gamma = 0");
    for (const std::string& name : Parameters::names())
        add_setting(&app, over, name, name, "coefficient " + name);

    app.add_subcommand("bounds", "check the polynomial bounds of the envelopes");

    CLI::App* simulate = app.add_subcommand("simulate", "write mode trajectories");
    add_setting(simulate, over, "xi", "xi", "comma-separated frequencies");
    add_setting(simulate, over, "t-max", "t_max", "final time");
    add_setting(simulate, over, "n-times", "n_times", "number of equally spaced samples");
    add_switch(simulate, over, "random-initial", "random_initial", "seeded random states instead of the profile");
    add_profile_options(simulate, over);

    CLI::App* envelope = app.add_subcommand("envelope", "fit the pointwise energy envelope");
    add_envelope_options(envelope, over);

    CLI::App* verify = app.add_subcommand("verify", "check the energy identity, multiplier estimates and Lyapunov bound");
    add_setting(verify, over, "corrupt-sign", "corrupt_sign", "ROW,COL: flip one generator entry");

    CLI::App* rates = app.add_subcommand("rates", "fit decay exponents of Sobolev norms");
    add_profile_options(rates, over);
    add_envelope_options(rates, over);
    add_setting(rates, over, "k-order", "k_order", "derivative order k");
    add_setting(rates, over, "l-order", "l_order", "extra regularity order l (-1 picks it)");
    add_setting(rates, over, "t-lo", "t_lo", "window start");
    add_setting(rates, over, "t-hi", "t_hi", "window end");
    add_setting(rates, over, "per-octave", "per_octave", "time samples per doubling");
    add_setting(rates, over, "grid-geometric", "grid_geometric", "log-spaced grid breakpoints");
    add_setting(rates, over, "grid-linear", "grid_linear", "uniform cells on [0, 1]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error code=ConfigError message=\"" << e.what() << "\"\n";
        return kExitConfig;
    }

    ExperimentConfig cfg;
    try {
        cfg = build_config(app.get_subcommands().front()->get_name(), config_path, over);
    } catch (const Error& e) {
        err << "error code=" << e.code() << " message=\"" << e.what() << "\"\n";
        return kExitConfig;
    }
    try {
        return run(cfg, out, err);
    } catch (const std::exception& e) {
        err << "error code=InternalError message=\"" << e.what() << "\"\n";
        return kExitVerdict;
    }
}

} // namespace bresse::cli
