#include "bresse/rate_fitting.hpp"

#include "bresse/envelopes.hpp"
#include "bresse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace bresse {

namespace {

SlopeFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < kMinSlopeSamples)
        throw InsufficientSamples("need at least " + std::to_string(kMinSlopeSamples) + " samples in the window, got " +
                                  std::to_string(x.size()));
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw InsufficientSamples("window samples share a single abscissa");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.samples = x.size();
    if (x.size() > 2) {
        double sse = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - f.intercept - f.slope * x[i];
            sse += r * r;
        }
        f.stderr_slope = std::sqrt(sse / (n - 2.0) / sxx);
    }
    return f;
}

SlopeFit windowed(std::span<const double> times, std::span<const double> log_values, double t_lo, double t_hi,
                  const std::function<double(double)>& abscissa) {
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (!std::isfinite(log_values[i])) throw NonPositiveNorm("norm is zero or not finite inside the window");
        x.push_back(abscissa(times[i]));
        y.push_back(log_values[i]);
    }
    return least_squares(x, y);
}

} // namespace

SlopeFit fit_log_slope(std::span<const double> times, std::span<const double> norms, double t_lo, double t_hi) {
    std::vector<double> logs(norms.size());
    for (std::size_t i = 0; i < norms.size(); ++i) {
        const bool inside = times[i] >= t_lo && times[i] <= t_hi;
        if (inside && !(norms[i] > 0.0)) throw NonPositiveNorm("norm must be positive inside the window");
        logs[i] = norms[i] > 0.0 ? std::log(norms[i]) : -std::numeric_limits<double>::infinity();
    }
    return fit_log_slope_logs(times, logs, t_lo, t_hi);
}

SlopeFit fit_log_slope_logs(std::span<const double> times, std::span<const double> log_norms, double t_lo,
                            double t_hi) {
    return windowed(times, log_norms, t_lo, t_hi, [](double t) { return std::log1p(t); });
}

SlopeFit fit_exponential(std::span<const double> times, std::span<const double> log_values, double t_lo,
                         double t_hi) {
    return windowed(times, log_values, t_lo, t_hi, [](double t) { return t; });
}

RatePrediction theorem_rate_prediction(int k, int l, SpeedClass cls) {
    RatePrediction r;
    r.l1_slope = -0.125 - 0.25 * k;
    r.regularity_slope = cls == SpeedClass::Equal ? -l / 4.0 : -l / 6.0;
    return r;
}

RateReport rate_report(const RateExperiment& ex) {
    const SpeedClass cls = classify_speeds(ex.params);
    const std::vector<int> orders{ex.k};
    const NormSeries series =
        sobolev_series(ex.params, ex.kind, ex.data, orders, ex.t_lo, ex.t_hi, ex.per_octave, ex.grid, ex.threads);

    RateReport rep;
    rep.times = series.times;
    rep.log_norms = series.log_norms.front();
    rep.kind = ex.kind;
    rep.cls = cls;
    rep.k = ex.k;
    rep.t_lo = ex.t_lo;
    rep.t_hi = ex.t_hi;
    rep.tolerance = ex.tolerance >= 0.0 ? ex.tolerance : (ex.k == 0 ? 0.02 : 0.03);

    // Model log bound as a function of t, up to an additive constant.
    std::function<double(double)> model;
    std::vector<double> fitted_values = rep.log_norms;
    if (has_l1(ex.data)) {
        const RatePrediction base = theorem_rate_prediction(ex.k, 0, cls);
        const double per_l = cls == SpeedClass::Equal ? 0.25 : 1.0 / 6.0;
        int l = ex.l;
        if (l < 0) l = static_cast<int>(std::ceil(-base.l1_slope / per_l - 1e-12));
        if (const auto m = regularity_order(ex.kind, ex.data)) l = std::min(l, std::max(0, *m - ex.k));
        rep.l = l;
        const RatePrediction pred = theorem_rate_prediction(ex.k, l, cls);
        const bool regular_governs = pred.regularity_slope > pred.l1_slope;
        rep.governing = regular_governs ? "regularity" : "l1";
        rep.predicted_l1_slope = pred.l1_slope;
        rep.predicted_reg_slope = pred.regularity_slope;
        rep.predicted_slope = regular_governs ? pred.regularity_slope : pred.l1_slope;
        const SlopeFit f = fit_log_slope_logs(rep.times, rep.log_norms, ex.t_lo, ex.t_hi);
        rep.fitted_slope = f.slope;
        rep.stderr_slope = f.stderr_slope;
        const double slope = rep.predicted_slope;
        model = [slope](double t) { return slope * std::log1p(t); };
    } else {
        rep.governing = "exponential";
        for (double& v : fitted_values) v *= 2.0;
        const SlopeFit f = fit_exponential(rep.times, fitted_values, ex.t_lo, ex.t_hi);
        rep.fitted_rate = -f.slope;
        rep.fitted_slope = f.slope;
        rep.stderr_slope = f.stderr_slope;
        rep.predicted_l1_slope = std::numeric_limits<double>::quiet_NaN();
        rep.predicted_reg_slope = std::numeric_limits<double>::quiet_NaN();
        double xi_star = ex.xi_star.value_or(0.0);
        if (!ex.xi_star)
            for (const auto& [slot, prof] : ex.data)
                if (prof.shape == Profile::Shape::Band) xi_star = prof.xi_lo;
        rep.predicted_rate = ex.envelope_beta ? *ex.envelope_beta * envelope_rate(cls, xi_star)
                                              : std::numeric_limits<double>::quiet_NaN();
        rep.predicted_slope = -rep.predicted_rate;
        const double rate = rep.predicted_rate;
        model = [rate](double t) { return -rate * t; };
    }

    double log_c = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        const double t = rep.times[i];
        if (t >= ex.t_lo && t <= 10.0 * ex.t_lo) log_c = std::max(log_c, fitted_values[i] - model(t));
    }
    rep.envelope_constant = std::exp(log_c);
    bool dominated = std::isfinite(log_c);
    for (std::size_t i = 0; i < rep.times.size() && dominated; ++i) {
        const double t = rep.times[i];
        if (t < ex.t_lo || t > ex.t_hi) continue;
        const double bound = log_c + model(t);
        if (fitted_values[i] > bound + 1e-12 * std::max(1.0, std::abs(bound))) dominated = false;
    }
    rep.envelope_dominated = dominated;

    if (rep.governing == "exponential") {
        rep.verdict = std::isfinite(rep.predicted_rate) &&
                      std::abs(rep.fitted_rate - rep.predicted_rate) <= 0.05 * rep.predicted_rate;
    } else {
        rep.verdict = dominated && std::abs(rep.fitted_slope - rep.predicted_slope) <= rep.tolerance;
    }
    return rep;
}

} // namespace bresse
