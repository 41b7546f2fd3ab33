#include <bresse/errors.hpp>
#include <bresse/frequency_grid.hpp>
#include <bresse/functionals.hpp>
#include <bresse/proposition.hpp>
#include <bresse/reconstruction.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bresse;

namespace {

constexpr cplx I{0.0, 1.0};

Parameters random_parameters(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.3, 3.0);
    Parameters p;
    for (const std::string& name : Parameters::names()) p.at(name) = u(rng);
    return p;
}

// Energy written out term by term.
double literal_energy(const Parameters& p, SystemKind kind, double xi, const StateVector& u) {
    const cplx shear = I * xi * u[0] - u[2] - p.l * u[4];
    const cplx axial = I * xi * u[4] - p.l * u[0];
    double e = p.rho1 * std::norm(u[1]) + p.rho2 * std::norm(u[3]) + p.rho1 * std::norm(u[5]) +
               p.b * xi * xi * std::norm(u[2]) + p.k * std::norm(shear) + p.k0 * std::norm(axial);
    if (kind == SystemKind::TypeI) {
        e += p.gamma / p.m1 * std::norm(u[6]) + p.gamma / p.m2 * std::norm(u[7]);
    } else {
        e += p.gamma / p.m1 * std::norm(u[7]) + p.k1 * p.gamma / p.m1 * xi * xi * std::norm(u[6]);
        e += p.gamma / p.m2 * std::norm(u[9]) + p.k2 * p.gamma / p.m2 * xi * xi * std::norm(u[8]);
    }
    return e;
}

double literal_dissipation(const Parameters& p, SystemKind kind, double xi, const StateVector& u) {
    if (kind == SystemKind::TypeI)
        return -2.0 * p.gamma * xi * xi * (p.k1 / p.m1 * std::norm(u[6]) + p.k2 / p.m2 * std::norm(u[7]));
    return -2.0 * p.gamma * xi * xi * (p.alpha1 / p.m1 * std::norm(u[7]) + p.alpha2 / p.m2 * std::norm(u[9]));
}

class Kinds : public ::testing::TestWithParam<SystemKind> {};

} // namespace

TEST(ModeEnergy, ZeroStateAndSingleDisplacement) {
    const Parameters p;
    EXPECT_EQ(mode_energy(ModeState::zero(SystemKind::TypeI, 1.0), p), 0.0);
    ModeState s = ModeState::zero(SystemKind::TypeI, 0.0);
    s.u[0] = 1.0;
    EXPECT_DOUBLE_EQ(mode_energy(s, p), 1.0);
}

TEST_P(Kinds, EnergyMatchesLiteralFormula) {
    std::mt19937_64 rng(1);
    for (int draw = 0; draw < 50; ++draw) {
        const Parameters p = random_parameters(rng);
        const double xi = std::exp(std::uniform_real_distribution<double>(-4.0, 4.0)(rng));
        const StateVector u = random_state(GetParam(), rng);
        const double ref = literal_energy(p, GetParam(), xi, u);
        const ModeState s{GetParam(), xi, u};
        EXPECT_NEAR(mode_energy(s, p), ref, 1e-12 * ref);
        EXPECT_NEAR(energy_form(p, GetParam(), xi)(u), ref, 1e-12 * ref);
        EXPECT_NEAR(vector_solution_components(s, p).squaredNorm(), ref, 1e-12 * ref);
        EXPECT_GE(mode_energy(s, p), 0.0);
    }
}

TEST_P(Kinds, ConjugateStateAtNegativeFrequency) {
    std::mt19937_64 rng(2);
    const Parameters p = random_parameters(rng);
    const StateVector u = random_state(GetParam(), rng);
    const double a = mode_energy({GetParam(), 1.7, u}, p);
    const double b = mode_energy({GetParam(), -1.7, u.conjugate()}, p);
    EXPECT_NEAR(a, b, 1e-15 * a);
}

TEST_P(Kinds, DissipationMatchesLiteralFormula) {
    std::mt19937_64 rng(3);
    for (int draw = 0; draw < 20; ++draw) {
        const Parameters p = random_parameters(rng);
        const double xi = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
        const StateVector u = random_state(GetParam(), rng);
        const double ref = literal_dissipation(p, GetParam(), xi, u);
        EXPECT_NEAR(dissipation({GetParam(), xi, u}, p), ref, 1e-14 * std::abs(ref) + 1e-300);
        EXPECT_LE(dissipation({GetParam(), xi, u}, p), 0.0);
    }
    EXPECT_EQ(dissipation({GetParam(), 0.0, random_state(GetParam(), rng)}, Parameters{}), 0.0);
}

TEST_P(Kinds, ChainRuleEqualsDissipation) {
    std::mt19937_64 rng(4);
    const std::vector<double> times = linspace(0.0, 50.0, 26);
    for (int draw = 0; draw < 20; ++draw) {
        const Parameters p = random_parameters(rng);
        const double xi = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
        const Trajectory tr = evolve_trajectory(p, GetParam(), xi, random_state(GetParam(), rng), times);
        const ResidualReport r = check_dissipation_identity(tr, p);
        EXPECT_EQ(r.lemma_id, "dissipation");
        EXPECT_EQ(r.n_samples, times.size());
        EXPECT_LE(r.max_violation, 1e-10) << "draw " << draw;
    }
}

TEST_P(Kinds, CorruptedGeneratorBreaksIdentity) {
    const Parameters p;
    std::mt19937_64 rng(5);
    const double xi = 0.7;
    Generator g = build_generator(p, GetParam(), xi);
    const StateLayout L = StateLayout::of(GetParam());
    g.matrix(L.psi_t, L.phi) *= -1.0;
    const std::vector<double> times{0.0, 0.5, 1.0};
    const Trajectory tr = evolve_trajectory(g, random_state(GetParam(), rng), times);
    EXPECT_GT(check_dissipation_identity(tr, g, p).max_violation, 1e-3);
}

TEST_P(Kinds, EnergyIsNonIncreasing) {
    const Parameters p;
    std::mt19937_64 rng(6);
    for (double xi : {0.05, 1.0, 30.0}) {
        Trajectory tr = evolve_trajectory(p, GetParam(), xi, random_state(GetParam(), rng), linspace(0.0, 200.0, 401));
        fill_energies(tr, p);
        for (std::size_t i = 1; i < tr.size(); ++i) ASSERT_LE(tr.energies[i], tr.energies[i - 1] * (1.0 + 1e-9));
    }
}

TEST_P(Kinds, ZeroFrequencyConservesEnergy) {
    const Parameters p;
    std::mt19937_64 rng(7);
    Trajectory tr = evolve_trajectory(p, GetParam(), 0.0, random_state(GetParam(), rng), linspace(0.0, 100.0, 201));
    fill_energies(tr, p);
    for (double e : tr.energies) EXPECT_NEAR(e, tr.energies.front(), 1e-10 * tr.energies.front());
}

TEST_P(Kinds, FunctionalsScaleQuadratically) {
    std::mt19937_64 rng(8);
    for (double b : {1.0, 2.0}) {
        Parameters p;
        p.b = b;
        const LyapunovConfig cfg = LyapunovConfig::defaults(p, GetParam(), classify_speeds(p));
        const ModeState s{GetParam(), 0.9, random_state(GetParam(), rng)};
        const cplx c(1.5, -2.0);
        const ModeState cs{GetParam(), 0.9, c * s.u};
        for (FunctionalId id : {FunctionalId::Energy, FunctionalId::J1, FunctionalId::T1, FunctionalId::T2,
                                FunctionalId::J2, FunctionalId::J3, FunctionalId::J4, FunctionalId::K, FunctionalId::H,
                                FunctionalId::Lyapunov1, FunctionalId::Lyapunov}) {
            const double f = eval_functional(id, s, p, cfg);
            EXPECT_NEAR(eval_functional(id, cs, p, cfg), std::norm(c) * f, 1e-12 * (1.0 + std::abs(f)))
                << to_string(id);
            EXPECT_EQ(eval_functional(id, ModeState::zero(GetParam(), 0.9), p, cfg), 0.0) << to_string(id);
        }
    }
}

TEST_P(Kinds, J2IsCombinationOfT1AndT2) {
    std::mt19937_64 rng(9);
    for (int draw = 0; draw < 20; ++draw) {
        const Parameters p = random_parameters(rng);
        const LyapunovConfig cfg = LyapunovConfig::defaults(p, GetParam(), classify_speeds(p));
        const ModeState s{GetParam(), std::exp(std::uniform_real_distribution<double>(-2.0, 2.0)(rng)),
                          random_state(GetParam(), rng)};
        const double j2 = eval_functional(FunctionalId::J2, s, p, cfg);
        const double t1 = eval_functional(FunctionalId::T1, s, p, cfg);
        const double t2 = eval_functional(FunctionalId::T2, s, p, cfg);
        double extra = 0.0;
        if (GetParam() == SystemKind::TypeIII) {
            const StateLayout L = StateLayout::of(GetParam());
            const cplx axial = I * s.xi * s.u[L.omega] - p.l * s.u[L.phi];
            extra = p.rho1 * p.k1 / p.m1 * s.xi * s.xi * std::real(axial * std::conj(s.u[L.theta1]));
        }
        EXPECT_NEAR(j2, p.l * t1 + t2 + extra, 1e-12 * (std::abs(j2) + std::abs(t1) + std::abs(t2) + std::abs(extra)));
    }
}

TEST(Functionals, FirstMultiplierLiteral) {
    std::mt19937_64 rng(10);
    const Parameters p = random_parameters(rng);
    const LyapunovConfig cfg = LyapunovConfig::defaults(p, SystemKind::TypeI, classify_speeds(p));
    const double xi = 1.3;
    const StateVector u = random_state(SystemKind::TypeI, rng);
    const double ref = (I * p.rho2 * xi * u[3] * std::conj(u[7])).real();
    EXPECT_NEAR(eval_functional(FunctionalId::J1, {SystemKind::TypeI, xi, u}, p, cfg), ref, 1e-14);

    const StateVector v = random_state(SystemKind::TypeIII, rng);
    const double ref3 = (I * p.rho2 * xi * v[3] * std::conj(v[9])).real() +
                        (I * p.k2 * p.rho2 * xi * xi * xi * v[2] * std::conj(v[8])).real();
    EXPECT_NEAR(eval_functional(FunctionalId::J1, {SystemKind::TypeIII, xi, v}, p, cfg), ref3, 1e-14);
}

TEST(Functionals, SIsTypeIIIOnly) {
    const Parameters p;
    const LyapunovConfig cfg = LyapunovConfig::defaults(p, SystemKind::TypeI, SpeedClass::Equal);
    EXPECT_THROW(eval_functional(FunctionalId::S, ModeState::zero(SystemKind::TypeI, 1.0), p, cfg), WrongKind);
    EXPECT_NO_THROW(eval_functional(FunctionalId::S, ModeState::zero(SystemKind::TypeIII, 1.0), p, cfg));
    EXPECT_EQ(parse_functional("J3"), FunctionalId::J3);
}

TEST(LyapunovConfig, DefaultsSatisfyConstraints) {
    for (double l : {0.5, 1.0, 2.0}) {
        Parameters p;
        p.l = l;
        const LyapunovConfig cfg = LyapunovConfig::defaults(p, SystemKind::TypeI, SpeedClass::Equal);
        EXPECT_LT(cfg.eps1, p.rho2 * l * l / (2.0 * p.rho1));
        EXPECT_LE(cfg.delta, std::min(l * l, 1.0) / 2.0);
        for (double xi : geomspace(1e-3, 1e3, 50)) EXPECT_LE(2.0 * cfg.delta, (l * l + xi * xi) / (1.0 + xi * xi) + 1e-15);
        EXPECT_GT(cfg.eps2, 0.0);
        EXPECT_GT(cfg.eps3, 0.0);
    }
}

TEST_P(Kinds, SampledSandwichBelowExactConstant) {
    std::mt19937_64 rng(12);
    for (double b : {1.0, 2.0}) {
        Parameters p;
        p.b = b;
        const SpeedClass cls = classify_speeds(p);
        const LyapunovConfig cfg = LyapunovConfig::defaults(p, GetParam(), cls);
        for (double xi : {0.2, 1.0, 5.0}) {
            const double exact = sandwich_constant(p, GetParam(), xi, cfg);
            double sampled = 0.0;
            for (int i = 0; i < 10000; ++i) {
                const ModeState s{GetParam(), xi, random_state(GetParam(), rng)};
                const double ratio = std::abs(lyapunov_weight(cls, xi) * eval_functional(FunctionalId::Lyapunov1, s, p, cfg)) /
                                     (energy_weight(cls, xi) * mode_energy(s, p));
                sampled = std::max(sampled, ratio);
            }
            EXPECT_GT(sampled, 0.0);
            EXPECT_LE(sampled, exact * (1.0 + 1e-10)) << "xi " << xi;
        }
    }
}

TEST_P(Kinds, LogEnergySurvivesUnderflow) {
    const Parameters p;
    std::mt19937_64 rng(13);
    const Generator g = build_generator(p, GetParam(), 5.0);
    const Trajectory tr = evolve_on_lattice(g, random_state(GetParam(), rng), 1.0, 1e7, 1);
    const double last = log_energy(tr, tr.size() - 1, p);
    EXPECT_TRUE(std::isfinite(last));
    EXPECT_LT(last, -800.0);
}

INSTANTIATE_TEST_SUITE_P(Kinds, Kinds, ::testing::Values(SystemKind::TypeI, SystemKind::TypeIII),
                         [](const auto& info) { return std::string(to_string(info.param)); });
