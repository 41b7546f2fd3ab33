#pragma once

#include "bresse/functionals.hpp"

#include <span>
#include <vector>

namespace bresse {

struct PropositionMode {
    double xi = 0.0;
    double abscissa = 0.0;
    /// |abscissa| / s(xi): the fitted beta may not exceed this.
    double beta_ceiling = 0.0;
    double sandwich = 0.0;
};

/// Outcome of the Lyapunov construction on a sample set:
///   dL1/dt <= -M W + C R,
///   |w L1| <= M1 P E,
///   dL/dt <= -beta s(xi) L  with  L = w L1 + N P E.
struct PropositionReport {
    ResidualReport residual;
    SpeedClass cls = SpeedClass::Equal;
    double rhs_constant = 0.0;
    double M = 0.0;
    double M1 = 0.0;
    double N = 0.0;
    double beta = 0.0;
    bool monotone = false;
    LyapunovConfig cfg;
    std::vector<PropositionMode> modes;

    /// M > 0, beta > 0, N > M1, L non-increasing and beta under every ceiling.
    bool holds() const;
};

/// Weight w(xi) on L1 inside L: xi^2 for equal speeds, 1 otherwise.
double lyapunov_weight(SpeedClass cls, double xi) noexcept;

/// Polynomial P(xi) multiplying the energy inside L.
double energy_weight(SpeedClass cls, double xi) noexcept;

/// Exact max over states of |w L1| / (P E) at one frequency, from a
/// generalised Hermitian eigenproblem. Requires xi != 0.
double sandwich_constant(const Parameters& p, SystemKind kind, double xi, const LyapunovConfig& cfg);

/// Dissipated coercive combination W and thermal right-hand side R.
double coercive_sum(const ModeState& s, const Parameters& p, SpeedClass cls);
double thermal_rhs(const ModeState& s, SpeedClass cls);

PropositionReport check_proposition(std::span<const Trajectory> trajectories, const Parameters& p,
                                    const LyapunovConfig& cfg);

/// Chooses lambda1 and lambda2 on a logarithmic grid to maximise beta;
/// returns the configuration unchanged for equal speeds.
LyapunovConfig fit_lambdas(std::span<const Trajectory> trajectories, const Parameters& p, LyapunovConfig cfg);

} // namespace bresse
