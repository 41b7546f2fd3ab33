#pragma once

#include "bresse/hermitian_form.hpp"
#include "bresse/parameters.hpp"
#include "bresse/spectral_system.hpp"

#include <random>
#include <string>
#include <string_view>

namespace bresse {

/// Quadratic functionals of a mode. Lyapunov1 is the weighted sum of the
/// multiplier functionals; Lyapunov adds the energy with weight N or N'.
enum class FunctionalId { Energy, J1, T1, T2, J2, J3, J4, K, H, S, Lyapunov1, Lyapunov };

std::string_view to_string(FunctionalId id) noexcept;
FunctionalId parse_functional(std::string_view name);

/// Small parameters and weights of the Lyapunov construction.
struct LyapunovConfig {
    double eps1 = 0.0;
    double eps2 = 0.0;
    double eps3 = 0.0;
    double eps4 = 0.0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double delta = 0.0;
    double N = 1.0;
    double Nprime = 1.0;

    /// eps1 = rho2 l^2 / (4 rho1), delta = min(l^2, 1) / 2, eps2 = m2 / (4 s1),
    /// eps3 half of its admissible ceiling; N, N' and lambdas are later fitted.
    static LyapunovConfig defaults(const Parameters& p, SystemKind kind, SpeedClass cls);
};

/// Ratio rho2 l^2 / rho1 + 1 that bounds the kinetic term in K.
double shear_ratio(const Parameters& p);

double mode_energy(const ModeState& s, const Parameters& p);

/// Exact energy derivative along solutions; non-positive.
double dissipation(const ModeState& s, const Parameters& p);

HermitianForm energy_form(const Parameters& p, SystemKind kind, double xi);

/// Throws WrongKind for S on Type I.
HermitianForm functional_form(FunctionalId id, const Parameters& p, SystemKind kind, SpeedClass cls, double xi,
                              const LyapunovConfig& cfg);

/// Speed class is taken from the parameters.
double eval_functional(FunctionalId id, const ModeState& s, const Parameters& p, const LyapunovConfig& cfg);

/// Energy of sample i in log form, robust to huge log scales.
double log_energy(const Trajectory& tr, std::size_t i, const Parameters& p);

/// Fills tr.energies with true (unscaled) energies.
void fill_energies(Trajectory& tr, const Parameters& p);

/// Complex Gaussian entries, normalised to unit Euclidean norm.
StateVector random_state(SystemKind kind, std::mt19937_64& rng);

struct ResidualReport {
    std::string lemma_id;
    double max_violation = 0.0;
    double fitted_constant = 0.0;
    std::size_t n_samples = 0;
    /// Largest magnitude among the terms entering a residual.
    double scale = 0.0;

    bool holds(double rel_tol) const;
};

/// Largest |dE/dt - D| / (1 + E) over the samples, with dE/dt taken from the
/// chain rule along the given generator.
ResidualReport check_dissipation_identity(const Trajectory& tr, const Generator& g, const Parameters& p);
ResidualReport check_dissipation_identity(const Trajectory& tr, const Parameters& p);

} // namespace bresse
