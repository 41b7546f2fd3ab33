#pragma once

#include "bresse/functionals.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bresse {

/// Pieces of one multiplier estimate
///   dF/dt + coercive <= explicit_rhs + C * constant_rhs
/// evaluated on a single state.
struct LemmaTerms {
    double coercive = 0.0;
    double explicit_rhs = 0.0;
    double constant_rhs = 0.0;
};

/// Estimate identifiers available for a kind: J1 T1 T2 J2 J3 J4 K H, plus S
/// for Type III.
std::vector<std::string> lemma_ids(SystemKind kind);

/// Functional whose derivative an estimate controls.
FunctionalId lemma_functional(std::string_view id, SystemKind kind);

/// Throws UnknownLemma or WrongKind.
LemmaTerms lemma_terms(std::string_view id, const ModeState& s, const Parameters& p, SpeedClass cls,
                       const LyapunovConfig& cfg);

/// Fits the smallest C making the estimate hold on every sample and reports
/// the largest remaining residual. Samples with a vanishing constant_rhs
/// only contribute to the residual.
ResidualReport check_lemma_inequality(std::string_view id, std::span<const Trajectory> trajectories,
                                      const Parameters& p, const LyapunovConfig& cfg);

ResidualReport check_lemma_inequality(std::string_view id, const Trajectory& tr, const Parameters& p,
                                      const LyapunovConfig& cfg);

/// t = 0 followed by `count - 1` log-spaced times in [1e-2, 1e3].
std::vector<double> lemma_sample_times(std::size_t count = 32);

/// `per_xi` random trajectories for every xi. With `quiet` set, every other
/// trajectory starts with all thermal slots zero.
std::vector<Trajectory> sample_trajectories(const Parameters& p, SystemKind kind, std::span<const double> xis,
                                            std::size_t per_xi, std::span<const double> times, std::uint64_t seed,
                                            bool quiet = true, unsigned threads = 1);

} // namespace bresse
