#include "run.hpp"

#include <bresse/csv.hpp>
#include <bresse/envelopes.hpp>
#include <bresse/errors.hpp>
#include <bresse/lemmas.hpp>
#include <bresse/parallel.hpp>
#include <bresse/proposition.hpp>
#include <bresse/rate_fitting.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace bresse::cli {

namespace {

constexpr double kDissipationTolerance = 1e-9;
constexpr double kLemmaTolerance = 1e-12;
constexpr double kEnvelopeTolerance = 1e-9;
constexpr std::size_t kDissipationDraws = 50;

struct Outcome {
    std::vector<std::pair<std::string, std::string>> files;
    std::vector<std::string> failures;
};

std::string num(double v) {
    return format_double(v);
}

std::string quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? '\'' : c;
    return q + "\"";
}

void fail(Outcome& o, const std::string& check, double value, double limit) {
    o.failures.push_back("error code=VerdictFailed check=" + check + " value=" + num(value) + " limit=" + num(limit));
}

Outcome run_bounds(const ExperimentConfig& cfg, std::ostream& out) {
    const BoundCheck b = bound_check();
    std::ostringstream csv;
    csv << csv_preamble(cfg.hash()) << "\n"
        << "function,region,bound,worst_margin\n"
        << "s1,low,xi^4/5," << num(b.s1_low) << "\n"
        << "s1,high,xi^-4/5," << num(b.s1_high) << "\n"
        << "s2,low,xi^4/18," << num(b.s2_low) << "\n"
        << "s2,high,xi^-6/18," << num(b.s2_high) << "\n"
        << "# points=" << b.points << " violations=" << b.violations << "\n";
    out << "bounds: points=" << b.points << " violations=" << b.violations << " s1(1)=" << num(s1(1.0))
        << " s2(1)=" << num(s2(1.0)) << "\n";
    Outcome o;
    o.files.emplace_back("bounds_margins.csv", csv.str());
    if (!b.ok()) fail(o, "bounds", static_cast<double>(b.violations), 0.0);
    return o;
}

Outcome run_simulate(const ExperimentConfig& cfg, std::ostream& out) {
    const InitialData data = cfg.initial_data();
    const std::vector<double> times = linspace(0.0, cfg.t_max, cfg.n_times);
    std::vector<std::string> bodies(cfg.xis.size());
    parallel_for(cfg.xis.size(), cfg.threads, [&](std::size_t i) {
        const double xi = cfg.xis[i];
        StateVector u0;
        if (cfg.random_initial) {
            std::seed_seq sseq{cfg.seed, static_cast<std::uint64_t>(i)};
            std::mt19937_64 rng(sseq);
            u0 = random_state(cfg.kind, rng);
        } else {
            u0 = initial_mode_state(cfg.kind, data, xi).u;
        }
        Trajectory tr = evolve_trajectory(cfg.params, cfg.kind, xi, u0, times);
        fill_energies(tr, cfg.params);
        std::ostringstream csv;
        csv << csv_preamble(cfg.hash()) << "\n";
        write_trajectory_rows(csv, tr);
        bodies[i] = csv.str();
    });
    Outcome o;
    for (std::size_t i = 0; i < cfg.xis.size(); ++i)
        o.files.emplace_back(trajectory_filename(cfg.kind, cfg.xis[i]), std::move(bodies[i]));
    out << "simulate: " << cfg.xis.size() << " modes, " << times.size() << " samples each\n";
    return o;
}

EnvelopeFit envelope_fit(const ExperimentConfig& cfg) {
    const std::vector<double> xis = geomspace(cfg.xi_min, cfg.xi_max, cfg.modes);
    const std::vector<Trajectory> trs = envelope_trajectories(cfg.params, cfg.kind, xis, cfg.seed, 1, cfg.threads);
    return fit_envelope(trs, cfg.params);
}

Outcome run_envelope(const ExperimentConfig& cfg, std::ostream& out) {
    const EnvelopeFit fit = envelope_fit(cfg);
    std::vector<double> abscissa(fit.modes.size());
    parallel_for(fit.modes.size(), cfg.threads, [&](std::size_t i) {
        abscissa[i] = spectral_abscissa(build_generator(cfg.params, cfg.kind, fit.modes[i].xi));
    });
    Outcome o;
    std::ostringstream csv;
    csv << csv_preamble(cfg.hash()) << "\n" << "xi,s,abscissa,fitted_beta_local\n";
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < fit.modes.size(); ++i) {
        const EnvelopeMode& m = fit.modes[i];
        csv << num(m.xi) << "," << num(m.s) << "," << num(abscissa[i]) << "," << num(m.beta_local) << "\n";
        if (abscissa[i] < 0.0) worst_ratio = std::max(worst_ratio, fit.beta * m.s / (2.0 * -abscissa[i]));
        else worst_ratio = std::numeric_limits<double>::infinity();
    }
    csv << "# summary kind=" << to_string(fit.kind) << " class=" << to_string(fit.cls) << " beta=" << num(fit.beta)
        << " C=" << num(fit.C) << " max_violation=" << num(fit.max_violation)
        << " max_beta_s_over_2abscissa=" << num(worst_ratio) << "\n";
    o.files.emplace_back("envelope_" + std::string(to_string(cfg.kind)) + ".csv", csv.str());
    out << "envelope: class=" << to_string(fit.cls) << " beta=" << num(fit.beta) << " C=" << num(fit.C)
        << " max_violation=" << num(fit.max_violation) << " max_beta_s_over_2abscissa=" << num(worst_ratio) << "\n";
    if (!(fit.max_violation <= kEnvelopeTolerance)) fail(o, "envelope_violation", fit.max_violation, kEnvelopeTolerance);
    if (!(worst_ratio <= 1.0)) fail(o, "envelope_abscissa", worst_ratio, 1.0);
    return o;
}

ResidualReport dissipation_draws(const ExperimentConfig& cfg) {
    std::vector<ResidualReport> reports(kDissipationDraws);
    const std::vector<double> times{0.0, 0.25, 1.0};
    parallel_for(kDissipationDraws, cfg.threads, [&](std::size_t i) {
        std::seed_seq sseq{cfg.seed, static_cast<std::uint64_t>(i), std::uint64_t{7}};
        std::mt19937_64 rng(sseq);
        const double xi = std::exp(std::uniform_real_distribution<double>(std::log(1e-2), std::log(1e2))(rng));
        Generator g = build_generator(cfg.params, cfg.kind, xi);
        if (cfg.mutate) g.matrix(cfg.mutate->first, cfg.mutate->second) *= -1.0;
        const Trajectory tr = evolve_trajectory(g, random_state(cfg.kind, rng), times);
        reports[i] = check_dissipation_identity(tr, g, cfg.params);
    });
    ResidualReport total = reports.front();
    total.n_samples = 0;
    for (const ResidualReport& r : reports) {
        total.max_violation = std::max(total.max_violation, r.max_violation);
        total.scale = std::max(total.scale, r.scale);
        total.n_samples += r.n_samples;
    }
    return total;
}

Outcome run_verify(const ExperimentConfig& cfg, std::ostream& out) {
    Outcome o;
    const SpeedClass cls = classify_speeds(cfg.params);
    std::vector<ResidualReport> rows;

    const ResidualReport diss = dissipation_draws(cfg);
    rows.push_back(diss);
    if (!(diss.max_violation <= kDissipationTolerance))
        fail(o, "dissipation", diss.max_violation, kDissipationTolerance);

    const std::vector<double> times = lemma_sample_times();
    const std::vector<double> lemma_xis{0.1, 1.0, 10.0};
    const std::vector<Trajectory> lemma_samples =
        sample_trajectories(cfg.params, cfg.kind, lemma_xis, 64, times, cfg.seed, true, cfg.threads);
    const LyapunovConfig defaults = LyapunovConfig::defaults(cfg.params, cfg.kind, cls);
    for (const std::string& id : lemma_ids(cfg.kind)) {
        const ResidualReport r = check_lemma_inequality(id, lemma_samples, cfg.params, defaults);
        rows.push_back(r);
        if (!r.holds(kLemmaTolerance))
            fail(o, "lemma:" + id, r.max_violation, kLemmaTolerance * std::max(1.0, r.scale));
    }

    const std::vector<double> prop_xis = geomspace(0.1, 10.0, 5);
    const std::vector<Trajectory> prop_samples =
        sample_trajectories(cfg.params, cfg.kind, prop_xis, 64, times, cfg.seed, true, cfg.threads);
    const LyapunovConfig lyap = fit_lambdas(prop_samples, cfg.params, defaults);
    const PropositionReport prop = check_proposition(prop_samples, cfg.params, lyap);
    ResidualReport prow = prop.residual;
    prow.lemma_id = "proposition";
    prow.fitted_constant = prop.rhs_constant;
    rows.push_back(prow);
    if (!prop.holds()) fail(o, "proposition", prop.beta, 0.0);

    std::ostringstream csv;
    csv << csv_preamble(cfg.hash()) << "\n" << "lemma_id,max_violation,fitted_constant,n_samples\n";
    for (const ResidualReport& r : rows)
        csv << r.lemma_id << "," << num(r.max_violation) << "," << num(r.fitted_constant) << "," << r.n_samples
            << "\n";
    csv << "# proposition class=" << to_string(cls) << " M=" << num(prop.M) << " M1=" << num(prop.M1)
        << " N=" << num(prop.N) << " beta=" << num(prop.beta) << " lambda1=" << num(lyap.lambda1)
        << " lambda2=" << num(lyap.lambda2) << " monotone=" << (prop.monotone ? 1 : 0)
        << " holds=" << (prop.holds() ? 1 : 0) << "\n";
    o.files.emplace_back("residuals_" + std::string(to_string(cfg.kind)) + ".csv", csv.str());

    out << "verify: kind=" << to_string(cfg.kind) << " class=" << to_string(cls) << "\n";
    for (const ResidualReport& r : rows)
        out << "  " << r.lemma_id << " max_violation=" << num(r.max_violation)
            << " fitted_constant=" << num(r.fitted_constant) << " n_samples=" << r.n_samples << "\n";
    out << "  proposition M=" << num(prop.M) << " N=" << num(prop.N) << " beta=" << num(prop.beta)
        << " holds=" << (prop.holds() ? "yes" : "no") << "\n";
    return o;
}

Outcome run_rates(const ExperimentConfig& cfg, std::ostream& out) {
    RateExperiment ex;
    ex.params = cfg.params;
    ex.kind = cfg.kind;
    ex.data = cfg.initial_data();
    ex.k = cfg.k;
    ex.l = cfg.l;
    ex.grid = cfg.grid();
    ex.t_lo = cfg.t_lo;
    ex.t_hi = cfg.t_hi;
    ex.per_octave = cfg.per_octave;
    ex.threads = cfg.threads;
    if (!has_l1(ex.data)) ex.envelope_beta = envelope_fit(cfg).beta;
    const RateReport rep = rate_report(ex);
    const bool exponential = rep.governing == "exponential";
    const double log_c = std::log(rep.envelope_constant);

    std::ostringstream norms;
    norms << csv_preamble(cfg.hash()) << "\n" << "t,k,norm,envelope_bound\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        const double t = rep.times[i];
        const double log_bound = exponential ? 0.5 * (log_c - rep.predicted_rate * t)
                                             : log_c + rep.predicted_slope * std::log1p(t);
        norms << num(t) << "," << rep.k << "," << num(std::exp(rep.log_norms[i])) << "," << num(std::exp(log_bound))
              << "\n";
    }

    std::ostringstream summary;
    summary << csv_preamble(cfg.hash()) << "\n"
            << "kind,class,k,l,governing,fitted_slope,stderr,predicted_l1_slope,predicted_reg_slope,predicted_slope,"
               "fitted_rate,predicted_rate,t_min,t_max,tolerance,envelope_constant,envelope_dominated,verdict\n"
            << to_string(rep.kind) << "," << to_string(rep.cls) << "," << rep.k << "," << rep.l << ","
            << rep.governing << "," << num(rep.fitted_slope) << "," << num(rep.stderr_slope) << ","
            << num(rep.predicted_l1_slope) << "," << num(rep.predicted_reg_slope) << "," << num(rep.predicted_slope)
            << "," << num(rep.fitted_rate) << "," << num(rep.predicted_rate) << "," << num(rep.t_lo) << ","
            << num(rep.t_hi) << "," << num(rep.tolerance) << "," << num(rep.envelope_constant) << ","
            << (rep.envelope_dominated ? 1 : 0) << "," << (rep.verdict ? "pass" : "fail") << "\n";

    const std::string stem = std::string(to_string(cfg.kind)) + "_k" + std::to_string(cfg.k);
    Outcome o;
    o.files.emplace_back("norms_" + stem + ".csv", norms.str());
    o.files.emplace_back("rate_report_" + stem + ".csv", summary.str());

    out << "rates: kind=" << to_string(rep.kind) << " class=" << to_string(rep.cls) << " k=" << rep.k
        << " l=" << rep.l << " governing=" << rep.governing << "\n";
    if (exponential)
        out << "  fitted_rate=" << num(rep.fitted_rate) << " predicted_rate=" << num(rep.predicted_rate) << "\n";
    else
        out << "  fitted_slope=" << num(rep.fitted_slope) << " stderr=" << num(rep.stderr_slope)
            << " predicted=" << num(rep.predicted_slope) << " tolerance=" << num(rep.tolerance) << "\n";
    out << "  window=[" << num(rep.t_lo) << "," << num(rep.t_hi) << "] envelope_constant="
        << num(rep.envelope_constant) << " dominated=" << (rep.envelope_dominated ? "yes" : "no")
        << " verdict=" << (rep.verdict ? "pass" : "fail") << "\n";
    if (!rep.verdict) {
        if (exponential) fail(o, "rate", rep.fitted_rate, rep.predicted_rate);
        else if (!rep.envelope_dominated) fail(o, "rate_domination", rep.fitted_slope, rep.predicted_slope);
        else fail(o, "rate_slope", rep.fitted_slope, rep.predicted_slope);
    }
    return o;
}

Outcome dispatch(const ExperimentConfig& cfg, std::ostream& out) {
    switch (cfg.command) {
    case Command::Bounds: return run_bounds(cfg, out);
    case Command::Simulate: return run_simulate(cfg, out);
    case Command::Envelope: return run_envelope(cfg, out);
    case Command::Verify: return run_verify(cfg, out);
    case Command::Rates: return run_rates(cfg, out);
    }
    return {};
}

void write_files(const ExperimentConfig& cfg, const Outcome& o) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
    for (const auto& [name, body] : o.files) {
        const fs::path path = fs::path(cfg.out_dir) / name;
        std::ofstream f(path, std::ios::binary);
        f << body;
        if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    }
}

bool is_config_error(const Error& e) {
    return e.code() == "ConfigError" || e.code() == "NonPositiveCoefficient" || e.code() == "BadAssignment" ||
           e.code() == "WrongKind";
}

} // namespace

int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::string cmd(to_string(cfg.command));
    try {
        validate(cfg);
        const Outcome o = dispatch(cfg, out);
        write_files(cfg, o);
        for (const std::string& line : o.failures) err << line << " command=" << cmd << "\n";
        return o.failures.empty() ? kExitOk : kExitVerdict;
    } catch (const NonPositiveCoefficient& e) {
        err << "error code=" << e.code() << " command=" << cmd << " field=" << e.field()
            << " message=" << quote(e.what()) << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << "error code=" << e.code() << " command=" << cmd << " message=" << quote(e.what()) << "\n";
        return is_config_error(e) ? kExitConfig : kExitVerdict;
    }
}

} // namespace bresse::cli
