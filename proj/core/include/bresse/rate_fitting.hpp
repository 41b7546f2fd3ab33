#pragma once

#include "bresse/reconstruction.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bresse {

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Standard error of the slope; zero for fewer than three samples.
    double stderr_slope = 0.0;
    std::size_t samples = 0;
};

inline constexpr std::size_t kMinSlopeSamples = 8;

/// Least squares of log(norm) against log(1 + t) on t in [t_lo, t_hi].
/// Throws NonPositiveNorm and InsufficientSamples.
SlopeFit fit_log_slope(std::span<const double> times, std::span<const double> norms, double t_lo, double t_hi);

/// Same fit from log norms, for values below the floating-point range.
SlopeFit fit_log_slope_logs(std::span<const double> times, std::span<const double> log_norms, double t_lo,
                            double t_hi);

/// Least squares of log value against t; the slope is minus the rate.
SlopeFit fit_exponential(std::span<const double> times, std::span<const double> log_values, double t_lo,
                         double t_hi);

/// Algebraic decay exponents of the two terms of the decay estimate.
struct RatePrediction {
    double l1_slope = 0.0;
    double regularity_slope = 0.0;
};

RatePrediction theorem_rate_prediction(int k, int l, SpeedClass cls);

struct RateExperiment {
    Parameters params;
    SystemKind kind = SystemKind::TypeI;
    InitialData data;
    int k = 0;
    /// Extra regularity order; -1 picks the smallest order whose term does
    /// not govern, capped by the data.
    int l = -1;
    FrequencyGrid grid;
    double t_lo = 1e3;
    double t_hi = 1e6;
    int per_octave = 8;
    /// Slope tolerance; negative selects 0.02 for k = 0 and 0.03 otherwise.
    double tolerance = -1.0;
    /// Envelope rate beta for data without an L1 bound.
    std::optional<double> envelope_beta;
    /// Frequency at which the envelope is evaluated for band data.
    std::optional<double> xi_star;
    unsigned threads = 1;
};

struct RateReport {
    SystemKind kind = SystemKind::TypeI;
    SpeedClass cls = SpeedClass::Equal;
    std::string governing;
    int k = 0;
    int l = 0;
    double fitted_slope = 0.0;
    double stderr_slope = 0.0;
    double predicted_l1_slope = 0.0;
    double predicted_reg_slope = 0.0;
    /// The governing (slower) of the two exponents.
    double predicted_slope = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double tolerance = 0.0;
    /// Energy-level exponential rates for band data.
    double fitted_rate = 0.0;
    double predicted_rate = 0.0;
    /// Constant fitted on the first decade of the window.
    double envelope_constant = 0.0;
    bool envelope_dominated = false;
    bool verdict = false;
    std::vector<double> times;
    std::vector<double> log_norms;
};

RateReport rate_report(const RateExperiment& experiment);

} // namespace bresse
