#pragma once

#include "bresse/parameters.hpp"

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bresse {

using cplx = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Slot positions of the named unknowns inside a state vector. Type I has
/// no thermal velocities; those slots are -1.
struct StateLayout {
    int phi = 0;
    int phi_t = 1;
    int psi = 2;
    int psi_t = 3;
    int omega = 4;
    int omega_t = 5;
    int theta1 = 6;
    int theta1_t = -1;
    int theta2 = 7;
    int theta2_t = -1;

    static StateLayout of(SystemKind kind) noexcept;
};

struct ModeState {
    SystemKind kind = SystemKind::TypeI;
    double xi = 0.0;
    StateVector u;

    static ModeState zero(SystemKind kind, double xi);
};

struct Generator {
    SystemKind kind = SystemKind::TypeI;
    double xi = 0.0;
    ComplexMatrix matrix;
};

Generator build_generator(const Parameters& p, SystemKind kind, double xi);

StateVector state_derivative(const Generator& g, const StateVector& u);

/// Degree-13 Pade approximant with scaling and squaring.
ComplexMatrix expm(const ComplexMatrix& a);

/// exp(a) == exp(log_scale) * unit, with `unit` renormalised after every
/// squaring so that very long horizons neither overflow nor underflow.
struct ScaledMatrix {
    ComplexMatrix unit;
    double log_scale = 0.0;
};

ScaledMatrix expm_scaled(const ComplexMatrix& a);

/// Squares a scaled matrix in place: exp(2 a) from exp(a).
void square_scaled(ScaledMatrix& m);

/// Plain exponential propagation. Throws NonFiniteResult.
ModeState propagate(const Generator& g, const ModeState& u0, double t);

/// True state == exp(log_scale) * direction.
struct ScaledState {
    StateVector direction;
    double log_scale = 0.0;
};

ScaledState propagate_scaled(const Generator& g, const StateVector& u0, double t);

/// Sampled trajectory of one mode. The true state at times[i] is
/// exp(log_scales[i]) * states[i].u.
struct Trajectory {
    SystemKind kind = SystemKind::TypeI;
    double xi = 0.0;
    std::vector<double> times;
    std::vector<ModeState> states;
    std::vector<double> log_scales;
    std::vector<double> energies;

    std::size_t size() const noexcept { return times.size(); }
    StateVector true_state(std::size_t i) const;
};

/// Steps from one sample time to the next with scaled exponentials.
/// `times` must be non-decreasing and start at or after zero.
Trajectory evolve_trajectory(const Parameters& p, SystemKind kind, double xi, const StateVector& u0,
                             std::span<const double> times);

Trajectory evolve_trajectory(const Generator& g, const StateVector& u0, std::span<const double> times);

/// Geometric lattice t0 * 2^(j / per_octave), j = 0, 1, ... up to t_end,
/// preceded by t = 0. One exponential per base time, then squarings only.
std::vector<double> doubling_lattice(double t0, double t_end, int per_octave);

Trajectory evolve_on_lattice(const Generator& g, const StateVector& u0, double t0, double t_end, int per_octave);

/// Largest real part of the spectrum, averaging eigenvalues that lie within
/// 1e-6 max|A_ij| of each other. Throws EigenFailure.
double spectral_abscissa(const Generator& g);

std::string trajectory_filename(SystemKind kind, double xi);

/// Header "t,re_u0,im_u0,...,energy" followed by one row per sample.
void write_trajectory_rows(std::ostream& out, const Trajectory& tr);

} // namespace bresse
