#pragma once

#include "bresse/frequency_grid.hpp"
#include "bresse/parameters.hpp"
#include "bresse/spectral_system.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bresse {

/// Scalar initial profile with transform f^(xi) = int f(x) exp(-i xi x) dx.
struct Profile {
    enum class Shape { Gaussian, Box, Band, DerivGaussian };

    Shape shape = Shape::Gaussian;
    double sigma = 1.0;   // Gaussian, DerivGaussian: exp(-x^2 / (2 sigma^2))
    double half_width = 1.0; // Box: indicator of [-h, h]
    double xi_lo = 10.0;  // Band: indicator of xi_lo <= |xi| <= xi_hi
    double xi_hi = 20.0;
    int order = 1;        // DerivGaussian: n-th derivative

    static Profile gaussian(double sigma);
    static Profile box(double half_width);
    static Profile band(double xi_lo, double xi_hi);
    static Profile deriv_gaussian(double sigma, int order);

    cplx transform(double xi) const;

    /// L1 norm in physical space; empty for Band.
    std::optional<double> l1_norm() const;
};

Profile::Shape parse_shape(std::string_view name);

/// Slot name -> profile. Slots: phi0 phi1 psi0 psi1 omega0 omega1 theta10
/// theta20, plus theta11 theta21 for Type III.
using InitialData = std::map<std::string, Profile>;

/// Throws BadAssignment for unknown slots or slots missing from the kind.
int slot_index(SystemKind kind, const std::string& slot);

ModeState initial_mode_state(SystemKind kind, const InitialData& data, double xi);

/// Components of the first-order field whose squared modulus is the energy.
StateVector vector_solution_components(const ModeState& s, const Parameters& p);

/// True if every profile is in L1.
bool has_l1(const InitialData& data);

/// Largest l such that the k + l derivative of the initial field is square
/// integrable; empty when unbounded.
std::optional<int> regularity_order(SystemKind kind, const InitialData& data);

/// Grid with the band edges of the data inserted as breakpoints.
FrequencyGrid adapted_grid(const FrequencyGrid& grid, const InitialData& data);

struct NormReport {
    double value = 0.0;
    double log_value = 0.0;
    /// Bound on the neglected high-frequency part, relative to the
    /// squared norm.
    double tail_fraction = 0.0;
};

inline constexpr double kTailTolerance = 1e-6;

/// ||d^k V(t)||_2 from (1/pi) int_0^inf xi^(2k) E(xi, t) dxi.
/// Throws TailTooFat when the tail beyond the grid may exceed kTailTolerance.
NormReport sobolev_norm(const Parameters& p, SystemKind kind, const InitialData& data, int k, double t,
                        const FrequencyGrid& grid);

/// Norms on a time lattice t0 * 2^(j / per_octave) up to t_end (plus
/// t = 0), for several derivative orders at once.
struct NormSeries {
    std::vector<double> times;
    std::vector<int> orders;
    /// log_norms[order index][time index]
    std::vector<std::vector<double>> log_norms;
    std::vector<double> tail_fraction;
};

NormSeries sobolev_series(const Parameters& p, SystemKind kind, const InitialData& data, std::span<const int> orders,
                          double t0, double t_end, int per_octave, const FrequencyGrid& grid, unsigned threads = 1);

/// Log of (1/pi) int_{hi}^{inf} xi^(2k) E(xi, 0) dxi, bounding every later tail.
double log_tail_bound(const Parameters& p, SystemKind kind, const InitialData& data, int k, double from);

} // namespace bresse
