#include "bresse/envelopes.hpp"

#include "bresse/errors.hpp"
#include "bresse/frequency_grid.hpp"
#include "bresse/functionals.hpp"
#include "bresse/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace bresse {

double s1(double xi) noexcept {
    const double x2 = xi * xi;
    const double x4 = x2 * x2;
    return x4 / (1.0 + x2 + x4 + x4 * x2 + x4 * x4);
}

double s2(double xi) noexcept {
    const double x2 = xi * xi;
    const double x4 = x2 * x2;
    const double q = 1.0 + x2 + x4;
    return x4 / ((1.0 + x2) * q * q);
}

double envelope_rate(SpeedClass cls, double xi) noexcept {
    return cls == SpeedClass::Equal ? s1(xi) : s2(xi);
}

BoundCheck bound_check(std::size_t per_region) {
    BoundCheck b;
    b.s1_low = b.s1_high = b.s2_low = b.s2_high = std::numeric_limits<double>::infinity();
    auto visit = [&](double& margin, double s, double bound) {
        const double m = s / bound - 1.0;
        margin = std::min(margin, m);
        // Relative rounding of the rational expressions.
        if (m < -1e-13) ++b.violations;
        ++b.points;
    };
    for (double xi : geomspace(1e-4, 1.0, per_region)) {
        const double x4 = std::pow(xi, 4);
        visit(b.s1_low, s1(xi), x4 / 5.0);
        visit(b.s2_low, s2(xi), x4 / 18.0);
    }
    for (double xi : geomspace(1.0, 1e4, per_region)) {
        visit(b.s1_high, s1(xi), std::pow(xi, -4) / 5.0);
        visit(b.s2_high, s2(xi), std::pow(xi, -6) / 18.0);
    }
    return b;
}

EnvelopeFit fit_envelope(std::span<const Trajectory> trajectories, const Parameters& p,
                         const EnvelopeOptions& options) {
    const SpeedClass cls = classify_speeds(p);
    const double log_cap = std::log(options.c_cap);
    const double inf = std::numeric_limits<double>::infinity();

    struct Series {
        double s;
        std::vector<double> st;
        std::vector<double> log_ratio;
    };
    std::vector<Series> series;
    EnvelopeFit fit;
    fit.cls = cls;
    if (!trajectories.empty()) fit.kind = trajectories.front().kind;

    double beta_sup = inf;
    bool resolved = true;
    for (const Trajectory& tr : trajectories) {
        EnvelopeMode mode;
        mode.xi = tr.xi;
        mode.s = envelope_rate(cls, tr.xi);
        const double log_e0 = tr.size() > 0 ? log_energy(tr, 0, p) : -inf;
        if (!std::isfinite(log_e0) || mode.s <= 0.0) {
            mode.excluded = true;
            fit.modes.push_back(mode);
            continue;
        }
        Series ser{mode.s, {}, {}};
        double local = inf;
        double last_ratio = 0.0;
        for (std::size_t i = 0; i < tr.size(); ++i) {
            const double lr = log_energy(tr, i, p) - log_e0;
            const double st = mode.s * tr.times[i];
            if (lr == -inf) continue;
            ser.st.push_back(st);
            ser.log_ratio.push_back(lr);
            if (st > 0.0) local = std::min(local, (log_cap - lr) / st);
            last_ratio = lr;
        }
        if (last_ratio > -log_cap) resolved = false;
        mode.beta_local = std::isfinite(local) ? local * (1.0 - options.beta_tolerance) : 0.0;
        beta_sup = std::min(beta_sup, local);
        fit.modes.push_back(mode);
        series.push_back(std::move(ser));
    }
    if (series.empty()) throw NoDecay("no mode with positive initial energy");
    if (!(beta_sup > 0.0) || !std::isfinite(beta_sup) || !resolved)
        throw NoDecay("energy decay is not resolved within the sampled horizon");

    fit.beta = beta_sup * (1.0 - options.beta_tolerance);
    double log_c = 0.0;
    for (const Series& ser : series)
        for (std::size_t i = 0; i < ser.st.size(); ++i)
            log_c = std::max(log_c, ser.log_ratio[i] + fit.beta * ser.st[i]);
    fit.C = std::exp(log_c);

    double worst = -inf;
    for (const Series& ser : series)
        for (std::size_t i = 0; i < ser.st.size(); ++i)
            worst = std::max(worst, std::exp(ser.log_ratio[i]) - std::exp(log_c - fit.beta * ser.st[i]));
    fit.max_violation = worst;
    return fit;
}

Trajectory envelope_trajectory(const Parameters& p, SystemKind kind, double xi, const StateVector& u0,
                               int per_octave) {
    const double s = envelope_rate(classify_speeds(p), xi);
    const double t0 = 1e-2;
    const double t_end = std::max(t0, 1e6 / s);
    return evolve_on_lattice(build_generator(p, kind, xi), u0, t0, t_end, per_octave);
}

std::vector<Trajectory> envelope_trajectories(const Parameters& p, SystemKind kind, std::span<const double> xis,
                                              std::uint64_t seed, int per_octave, unsigned threads) {
    std::vector<Trajectory> out(xis.size());
    parallel_for(xis.size(), threads, [&](std::size_t i) {
        std::seed_seq sseq{seed, static_cast<std::uint64_t>(i)};
        std::mt19937_64 rng(sseq);
        out[i] = envelope_trajectory(p, kind, xis[i], random_state(kind, rng), per_octave);
    });
    return out;
}

} // namespace bresse
