#pragma once

#include "bresse/parameters.hpp"
#include "bresse/spectral_system.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace bresse {

/// xi^4 / (1 + xi^2 + xi^4 + xi^6 + xi^8)
double s1(double xi) noexcept;

/// xi^4 / ((1 + xi^2) (1 + xi^2 + xi^4)^2)
double s2(double xi) noexcept;

/// s1 for equal speeds, s2 otherwise.
double envelope_rate(SpeedClass cls, double xi) noexcept;

/// Worst margins of the polynomial lower bounds
///   s1 >= xi^4 / 5 and s2 >= xi^4 / 18 on |xi| <= 1,
///   s1 >= xi^-4 / 5 and s2 >= xi^-6 / 18 on |xi| >= 1.
/// A margin is min(s / bound) - 1 and must be non-negative.
struct BoundCheck {
    double s1_low = 0.0;
    double s1_high = 0.0;
    double s2_low = 0.0;
    double s2_high = 0.0;
    std::size_t points = 0;
    std::size_t violations = 0;

    bool ok() const noexcept { return violations == 0; }
};

/// Samples `per_region` log-spaced points in [1e-4, 1] and [1, 1e4].
BoundCheck bound_check(std::size_t per_region = 10000);

struct EnvelopeMode {
    double xi = 0.0;
    double s = 0.0;
    double beta_local = 0.0;
    bool excluded = false;
};

/// E(xi, t) <= C E(xi, 0) exp(-beta s(xi) t) on every sample.
struct EnvelopeFit {
    SystemKind kind = SystemKind::TypeI;
    SpeedClass cls = SpeedClass::Equal;
    double C = 1.0;
    double beta = 0.0;
    double max_violation = 0.0;
    std::vector<EnvelopeMode> modes;
};

struct EnvelopeOptions {
    double c_cap = 1e6;
    /// Relative resolution of beta; the reported value is the certified
    /// lower end of this band below the supremum.
    double beta_tolerance = 1e-3;
};

/// Energies are read in log form so that horizons far beyond the underflow
/// range are usable. Modes with zero initial energy are excluded.
/// Throws NoDecay if no beta > 0 is resolved beyond the cap alone.
EnvelopeFit fit_envelope(std::span<const Trajectory> trajectories, const Parameters& p,
                         const EnvelopeOptions& options = {});

/// Times 2^(j/per_octave) * 1e-2 up to 1e6 / s(xi), preceded by t = 0.
Trajectory envelope_trajectory(const Parameters& p, SystemKind kind, double xi, const StateVector& u0,
                               int per_octave = 1);

/// One seeded random trajectory per mode of the given frequencies.
std::vector<Trajectory> envelope_trajectories(const Parameters& p, SystemKind kind, std::span<const double> xis,
                                              std::uint64_t seed, int per_octave = 1, unsigned threads = 1);

} // namespace bresse
