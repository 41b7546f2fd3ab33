#include <bresse/errors.hpp>
#include <bresse/reconstruction.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace bresse;

namespace {

constexpr double kPi = std::numbers::pi;

// Trapezoidal transform of an even or odd profile sampled on [-span, span].
template <class F>
cplx quadrature_transform(F f, double xi, double span, std::size_t n) {
    const double h = 2.0 * span / static_cast<double>(n - 1);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -span + h * static_cast<double>(i);
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        sum += w * f(x) * std::exp(cplx(0.0, -xi * x));
    }
    return sum * h;
}

} // namespace

TEST(Profiles, GaussianTransformMatchesQuadrature) {
    const Profile g = Profile::gaussian(0.7);
    for (double xi : {0.0, 0.3, 2.0, 5.0}) {
        const cplx ref = quadrature_transform([](double x) { return std::exp(-x * x / (2.0 * 0.49)); }, xi, 12.0, 20001);
        EXPECT_LE(std::abs(g.transform(xi) - ref), 1e-8) << xi;
    }
}

TEST(Profiles, BoxTransformMatchesQuadrature) {
    const Profile b = Profile::box(1.5);
    for (double xi : {0.0, 0.4, 3.0}) {
        // Midpoint sums on the interval itself avoid the jump at the ends.
        const std::size_t n = 200000;
        const double h = 3.0 / static_cast<double>(n);
        cplx ref = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = -1.5 + h * (static_cast<double>(i) + 0.5);
            ref += std::exp(cplx(0.0, -xi * x)) * h;
        }
        EXPECT_LE(std::abs(b.transform(xi) - ref), 1e-8) << xi;
    }
}

TEST(Profiles, DerivativeOfGaussianTransform) {
    const Profile d = Profile::deriv_gaussian(1.0, 1);
    for (double xi : {0.5, 2.0}) {
        const cplx ref = quadrature_transform([](double x) { return -x * std::exp(-x * x / 2.0); }, xi, 14.0, 20001);
        EXPECT_LE(std::abs(d.transform(xi) - ref), 1e-8) << xi;
    }
}

TEST(Profiles, BandIsIndicatorInFrequency) {
    const Profile b = Profile::band(10.0, 20.0);
    EXPECT_EQ(b.transform(9.99), cplx(0.0));
    EXPECT_EQ(b.transform(15.0), cplx(1.0));
    EXPECT_EQ(b.transform(-15.0), cplx(1.0));
    EXPECT_EQ(b.transform(20.01), cplx(0.0));
    EXPECT_FALSE(b.l1_norm().has_value());
}

TEST(Profiles, L1Norms) {
    EXPECT_DOUBLE_EQ(*Profile::gaussian(2.0).l1_norm(), 2.0 * std::sqrt(2.0 * kPi));
    EXPECT_DOUBLE_EQ(*Profile::box(0.5).l1_norm(), 1.0);
    EXPECT_NEAR(*Profile::deriv_gaussian(0.5, 1).l1_norm(), 2.0, 1e-14);
    EXPECT_NEAR(*Profile::deriv_gaussian(1.0, 2).l1_norm(), 4.0 / std::sqrt(std::exp(1.0)), 1e-14);
    EXPECT_EQ(parse_shape("box"), Profile::Shape::Box);
    EXPECT_THROW(parse_shape("triangle"), ConfigError);
}

TEST(InitialData, SlotAssignment) {
    EXPECT_EQ(slot_index(SystemKind::TypeI, "psi1"), 3);
    EXPECT_EQ(slot_index(SystemKind::TypeIII, "theta11"), 7);
    EXPECT_EQ(slot_index(SystemKind::TypeIII, "theta20"), 8);
    EXPECT_THROW(slot_index(SystemKind::TypeI, "theta11"), BadAssignment);
    EXPECT_THROW(slot_index(SystemKind::TypeI, "chi0"), BadAssignment);
    const InitialData data{{"omega0", Profile::gaussian(1.0)}};
    const ModeState s = initial_mode_state(SystemKind::TypeI, data, 0.5);
    EXPECT_EQ(s.u.size(), 8);
    EXPECT_EQ(s.u[4], Profile::gaussian(1.0).transform(0.5));
    EXPECT_EQ(s.u.norm(), std::abs(s.u[4]));
}

TEST(InitialData, Classification) {
    const InitialData g{{"psi1", Profile::gaussian(1.0)}};
    const InitialData band{{"psi1", Profile::band(10.0, 20.0)}};
    const InitialData box_d{{"phi0", Profile::box(1.0)}};
    const InitialData box_v{{"phi1", Profile::box(1.0)}};
    EXPECT_TRUE(has_l1(g));
    EXPECT_FALSE(has_l1(band));
    EXPECT_FALSE(regularity_order(SystemKind::TypeI, g).has_value());
    EXPECT_EQ(*regularity_order(SystemKind::TypeI, box_d), -1);
    EXPECT_EQ(*regularity_order(SystemKind::TypeI, box_v), 0);
}

TEST(SobolevNorm, GaussianVelocityClosedForms) {
    Parameters p;
    p.rho2 = 2.0;
    const double sigma = 0.8;
    const InitialData data{{"psi1", Profile::gaussian(sigma)}};
    const FrequencyGrid grid = default_grid();
    for (SystemKind kind : {SystemKind::TypeI, SystemKind::TypeIII}) {
        const NormReport n0 = sobolev_norm(p, kind, data, 0, 0.0, grid);
        EXPECT_NEAR(n0.value * n0.value, p.rho2 * sigma * std::sqrt(kPi), 1e-9);
        const NormReport n1 = sobolev_norm(p, kind, data, 1, 0.0, grid);
        EXPECT_NEAR(n1.value * n1.value, p.rho2 * std::sqrt(kPi) / (2.0 * sigma), 1e-9);
        EXPECT_LE(n1.tail_fraction, kTailTolerance);
    }
}

TEST(SobolevNorm, GaussianDisplacementClosedForm) {
    // phi0 = Gaussian: energy k |i xi phi|^2 + k0 l^2 |phi|^2.
    const Parameters p;
    const InitialData data{{"phi0", Profile::gaussian(1.0)}};
    const NormReport n = sobolev_norm(p, SystemKind::TypeI, data, 0, 0.0, default_grid());
    const double l2 = std::sqrt(kPi);
    const double dx2 = std::sqrt(kPi) / 2.0;
    EXPECT_NEAR(n.value * n.value, p.k * dx2 + p.k0 * l2, 1e-9);
}

TEST(SobolevNorm, RefinementConverges) {
    const Parameters p;
    const InitialData data{{"psi1", Profile::gaussian(1.0)}};
    const FrequencyGrid g = default_grid(512, 256);
    for (double t : {10.0, 1e3}) {
        const double a = sobolev_norm(p, SystemKind::TypeI, data, 0, t, g).value;
        const double b = sobolev_norm(p, SystemKind::TypeI, data, 0, t, refine(g)).value;
        EXPECT_LE(std::abs(a - b) / b, 1e-5) << t;
    }
}

TEST(SobolevNorm, BandDataBoundsAndMonotonicity) {
    const Parameters p;
    const InitialData data{{"psi1", Profile::band(10.0, 20.0)}};
    const FrequencyGrid grid = default_grid();
    const FrequencyGrid adapted = adapted_grid(grid, data);
    EXPECT_TRUE(std::find(adapted.breakpoints.begin(), adapted.breakpoints.end(), 10.0) != adapted.breakpoints.end());
    EXPECT_TRUE(std::find(adapted.breakpoints.begin(), adapted.breakpoints.end(), 20.0) != adapted.breakpoints.end());
    EXPECT_EQ(initial_mode_state(SystemKind::TypeI, data, 5.0).u.norm(), 0.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double t : {0.0, 10.0, 100.0, 1000.0}) {
        const double n0 = sobolev_norm(p, SystemKind::TypeI, data, 0, t, grid).value;
        const double n1 = sobolev_norm(p, SystemKind::TypeI, data, 1, t, grid).value;
        EXPECT_GE(n1, 10.0 * n0 * (1.0 - 1e-12));
        EXPECT_LE(n1, 20.0 * n0 * (1.0 + 1e-12));
        EXPECT_LE(n0, prev * (1.0 + 1e-12));
        prev = n0;
    }
    // Energy of the band at t = 0: rho2 * 2 * (20 - 10) / (2 pi).
    EXPECT_NEAR(std::pow(sobolev_norm(p, SystemKind::TypeI, data, 0, 0.0, grid).value, 2), 20.0 / (2.0 * kPi), 1e-12);
}

TEST(SobolevNorm, BoxDisplacementTailIsTooFat) {
    const Parameters p;
    const InitialData data{{"phi0", Profile::box(1.0)}};
    EXPECT_THROW(sobolev_norm(p, SystemKind::TypeI, data, 0, 0.0, default_grid()), TailTooFat);
}

TEST(SobolevNorm, SeriesMatchesPointwiseNorms) {
    const Parameters p;
    const InitialData data{{"theta10", Profile::gaussian(1.0)}};
    const FrequencyGrid grid = default_grid(256, 128);
    const std::vector<int> orders{0, 1};
    const NormSeries s = sobolev_series(p, SystemKind::TypeIII, data, orders, 1.0, 64.0, 2, grid, 3);
    ASSERT_EQ(s.log_norms.size(), 2u);
    EXPECT_EQ(s.times.front(), 0.0);
    for (std::size_t j = 0; j < s.times.size(); j += 3)
        for (std::size_t o = 0; o < orders.size(); ++o) {
            const double ref = sobolev_norm(p, SystemKind::TypeIII, data, orders[o], s.times[j], grid).value;
            EXPECT_NEAR(std::exp(s.log_norms[o][j]), ref, 1e-9 * ref) << "t " << s.times[j];
        }
}

TEST(SobolevNorm, ZeroDataHasNoNorm) {
    const Parameters p;
    const InitialData data{{"psi1", Profile::band(200.0, 300.0)}};
    const std::vector<int> orders{0};
    EXPECT_THROW(sobolev_series(p, SystemKind::TypeI, data, orders, 1.0, 10.0, 1, default_grid(64, 16)),
                 NonPositiveNorm);
}
