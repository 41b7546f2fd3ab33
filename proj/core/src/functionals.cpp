#include "bresse/functionals.hpp"

#include "bresse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bresse {

namespace {

constexpr cplx I{0.0, 1.0};

double sq(cplx z) { return std::norm(z); }

/// Type I uses theta_i in the coupling, Type III uses d theta_i / dt.
const LinearForm& coupling1(const ModeForms& f, SystemKind kind) {
    return kind == SystemKind::TypeI ? f.theta1 : f.theta1_t;
}
const LinearForm& coupling2(const ModeForms& f, SystemKind kind) {
    return kind == SystemKind::TypeI ? f.theta2 : f.theta2_t;
}

HermitianForm j1_form(const Parameters& p, SystemKind kind, double xi, const ModeForms& f, int n) {
    HermitianForm h(n);
    h.add_re(I * p.rho2 * xi, f.psi_t, coupling2(f, kind));
    if (kind == SystemKind::TypeIII) h.add_re(I * p.k2 * p.rho2 * xi * xi * xi, f.psi, f.theta2);
    return h;
}

HermitianForm t1_form(const Parameters& p, SystemKind kind, const ModeForms& f, int n) {
    HermitianForm h(n);
    h.add_re(-p.rho1, f.phi_t, f.axial);
    h.add_re(-p.rho1 / p.m1, f.phi_t, coupling1(f, kind));
    return h;
}

HermitianForm t2_form(const Parameters& p, SystemKind kind, double xi, const ModeForms& f, int n) {
    HermitianForm h(n);
    h.add_re(I * p.rho1 * xi, f.omega_t, f.axial);
    h.add_re(I * (p.rho1 / p.m1) * xi, f.omega_t, coupling1(f, kind));
    return h;
}

HermitianForm j2_form(const Parameters& p, SystemKind kind, double xi, const ModeForms& f, int n) {
    HermitianForm h = t1_form(p, kind, f, n);
    HermitianForm out(n);
    out.add(h, p.l);
    out.add(t2_form(p, kind, xi, f, n));
    if (kind == SystemKind::TypeIII) out.add_re(p.rho1 * p.k1 / p.m1 * xi * xi, f.axial, f.theta1);
    return out;
}

HermitianForm j3_form(const Parameters& p, double xi, const ModeForms& f, int n) {
    HermitianForm h(n);
    h.add_re(-p.rho2, f.psi_t, f.shear);
    h.add_re(-I * (p.rho1 * p.b / p.k) * xi, f.psi, f.phi_t);
    return h;
}

HermitianForm j4_form(const Parameters& p, const ModeForms& f, int n) {
    HermitianForm h(n);
    h.add_re(p.rho2 * p.rho2 * p.l * p.l / p.rho1, f.psi_t, f.psi);
    h.add_re(-p.rho2 * p.l, f.omega_t, f.psi);
    return h;
}

HermitianForm h_form(const Parameters& p, const ModeForms& f, int n) {
    HermitianForm h(n);
    h.add_re(p.rho1, f.shear, f.omega_t);
    h.add_re(p.rho1, f.axial, f.phi_t);
    return h;
}

HermitianForm s_form(const Parameters& p, double xi, const ModeForms& f, int n) {
    const double x2 = xi * xi;
    HermitianForm h(n);
    h.add_re(p.gamma / p.m1 * x2, f.theta1_t, f.theta1);
    h.add_re(p.gamma / p.m2 * x2, f.theta2_t, f.theta2);
    h.add_square(0.5 * p.gamma * x2 * x2 * p.alpha1 / p.m1, f.theta1);
    h.add_square(0.5 * p.gamma * x2 * x2 * p.alpha2 / p.m2, f.theta2);
    h.add_re(I * p.gamma * x2 * xi, f.psi, f.theta2);
    h.add_re(p.gamma * x2, f.axial, f.theta1);
    return h;
}

HermitianForm lyapunov1_form(const Parameters& p, SystemKind kind, SpeedClass cls, double xi,
                             const LyapunovConfig& cfg, const ModeForms& f, int n) {
    const double x2 = xi * xi;
    HermitianForm j1 = j1_form(p, kind, xi, f, n);
    HermitianForm kk = j3_form(p, xi, f, n);
    kk.add(j4_form(p, f, n));
    HermitianForm j2 = j2_form(p, kind, xi, f, n);
    HermitianForm hh = h_form(p, f, n);
    const bool type3 = kind == SystemKind::TypeIII;

    HermitianForm out(n);
    if (cls == SpeedClass::Equal) {
        out.add(j1);
        out.add(kk, cfg.eps2 * x2);
        out.add(j2, x2);
        out.add(hh, cfg.eps3 * x2);
        if (type3) out.add(s_form(p, xi, f, n));
        return out;
    }
    const double p4 = 1.0 + x2 + x2 * x2;
    const double q = x2 / p4;
    HermitianForm inner(n);
    if (type3) {
        inner.add(kk, cfg.eps3 * cfg.lambda2 * x2);
        inner.add(j2, x2);
        inner.add(hh, cfg.eps3 * x2);
        inner.add(s_form(p, xi, f, n));
        out.add(j1, q * cfg.lambda1 * cfg.eps3);
        out.add(inner, q / p4);
    } else {
        inner.add(kk, cfg.eps3 * cfg.lambda2);
        inner.add(j2);
        inner.add(hh, cfg.eps3);
        out.add(j1, q * cfg.lambda1 * cfg.eps3);
        out.add(inner, q * q);
    }
    return out;
}

} // namespace

std::string_view to_string(FunctionalId id) noexcept {
    switch (id) {
    case FunctionalId::Energy: return "E";
    case FunctionalId::J1: return "J1";
    case FunctionalId::T1: return "T1";
    case FunctionalId::T2: return "T2";
    case FunctionalId::J2: return "J2";
    case FunctionalId::J3: return "J3";
    case FunctionalId::J4: return "J4";
    case FunctionalId::K: return "K";
    case FunctionalId::H: return "H";
    case FunctionalId::S: return "S";
    case FunctionalId::Lyapunov1: return "L1";
    case FunctionalId::Lyapunov: return "L";
    }
    return "?";
}

FunctionalId parse_functional(std::string_view name) {
    for (auto id : {FunctionalId::Energy, FunctionalId::J1, FunctionalId::T1, FunctionalId::T2, FunctionalId::J2,
                    FunctionalId::J3, FunctionalId::J4, FunctionalId::K, FunctionalId::H, FunctionalId::S,
                    FunctionalId::Lyapunov1, FunctionalId::Lyapunov})
        if (to_string(id) == name) return id;
    throw UnknownLemma("unknown functional '" + std::string(name) + "'");
}

double shear_ratio(const Parameters& p) {
    return p.rho2 * p.l * p.l / p.rho1 + 1.0;
}

LyapunovConfig LyapunovConfig::defaults(const Parameters& p, SystemKind kind, SpeedClass cls) {
    (void)cls;
    LyapunovConfig c;
    const double s1 = shear_ratio(p);
    c.eps1 = p.rho2 * p.l * p.l / (4.0 * p.rho1);
    c.delta = 0.5 * std::min(p.l * p.l, 1.0);
    c.eps2 = p.m2 / (4.0 * s1);
    const double last = (2.0 * p.b * p.l / p.k) * (0.5 * p.m2 - s1 * c.eps2);
    const double ceiling = kind == SystemKind::TypeI
                               ? std::min({2.0 * c.delta / (3.0 * p.l), c.eps2 / (8.0 * p.l), last})
                               : std::min({c.delta / (2.0 * p.l), c.eps2 / (6.0 * p.l), last});
    c.eps3 = 0.5 * ceiling;
    c.eps4 = p.rho1 * p.l / 4.0;
    c.lambda1 = 4.0;
    c.lambda2 = 4.0;
    c.N = 1.0;
    c.Nprime = 1.0;
    return c;
}

double mode_energy(const ModeState& s, const Parameters& p) {
    const StateLayout L = StateLayout::of(s.kind);
    const auto& u = s.u;
    const double xi = s.xi;
    const cplx shear = I * xi * u[L.phi] - u[L.psi] - p.l * u[L.omega];
    const cplx axial = I * xi * u[L.omega] - p.l * u[L.phi];
    double e = p.rho1 * sq(u[L.phi_t]) + p.rho2 * sq(u[L.psi_t]) + p.rho1 * sq(u[L.omega_t]) +
               p.b * xi * xi * sq(u[L.psi]) + p.k * sq(shear) + p.k0 * sq(axial);
    if (s.kind == SystemKind::TypeI) {
        e += p.gamma / p.m1 * sq(u[L.theta1]) + p.gamma / p.m2 * sq(u[L.theta2]);
    } else {
        e += p.gamma / p.m1 * sq(u[L.theta1_t]) + p.gamma / p.m2 * sq(u[L.theta2_t]);
        e += p.k1 * p.gamma / p.m1 * xi * xi * sq(u[L.theta1]) + p.k2 * p.gamma / p.m2 * xi * xi * sq(u[L.theta2]);
    }
    return e;
}

double dissipation(const ModeState& s, const Parameters& p) {
    const StateLayout L = StateLayout::of(s.kind);
    const double x2 = s.xi * s.xi;
    if (s.kind == SystemKind::TypeI)
        return -2.0 * p.gamma * x2 * (p.k1 / p.m1 * sq(s.u[L.theta1]) + p.k2 / p.m2 * sq(s.u[L.theta2]));
    return -2.0 * p.gamma * x2 * (p.alpha1 / p.m1 * sq(s.u[L.theta1_t]) + p.alpha2 / p.m2 * sq(s.u[L.theta2_t]));
}

HermitianForm energy_form(const Parameters& p, SystemKind kind, double xi) {
    const ModeForms f(kind, xi, p.l);
    HermitianForm h(state_dimension(kind));
    h.add_square(p.rho1, f.phi_t).add_square(p.rho2, f.psi_t).add_square(p.rho1, f.omega_t);
    h.add_square(p.b * xi * xi, f.psi).add_square(p.k, f.shear).add_square(p.k0, f.axial);
    h.add_square(p.gamma / p.m1, coupling1(f, kind)).add_square(p.gamma / p.m2, coupling2(f, kind));
    if (kind == SystemKind::TypeIII) {
        h.add_square(p.k1 * p.gamma / p.m1 * xi * xi, f.theta1);
        h.add_square(p.k2 * p.gamma / p.m2 * xi * xi, f.theta2);
    }
    return h;
}

HermitianForm functional_form(FunctionalId id, const Parameters& p, SystemKind kind, SpeedClass cls, double xi,
                              const LyapunovConfig& cfg) {
    const int n = state_dimension(kind);
    const ModeForms f(kind, xi, p.l);
    switch (id) {
    case FunctionalId::Energy: return energy_form(p, kind, xi);
    case FunctionalId::J1: return j1_form(p, kind, xi, f, n);
    case FunctionalId::T1: return t1_form(p, kind, f, n);
    case FunctionalId::T2: return t2_form(p, kind, xi, f, n);
    case FunctionalId::J2: return j2_form(p, kind, xi, f, n);
    case FunctionalId::J3: return j3_form(p, xi, f, n);
    case FunctionalId::J4: return j4_form(p, f, n);
    case FunctionalId::K: {
        HermitianForm h = j3_form(p, xi, f, n);
        h.add(j4_form(p, f, n));
        return h;
    }
    case FunctionalId::H: return h_form(p, f, n);
    case FunctionalId::S:
        if (kind != SystemKind::TypeIII) throw WrongKind("S is defined for Type III only");
        return s_form(p, xi, f, n);
    case FunctionalId::Lyapunov1: return lyapunov1_form(p, kind, cls, xi, cfg, f, n);
    case FunctionalId::Lyapunov: {
        const double x2 = xi * xi;
        HermitianForm h(n);
        if (cls == SpeedClass::Equal) {
            const double poly = 1.0 + x2 + x2 * x2 + x2 * x2 * x2 + x2 * x2 * x2 * x2;
            h.add(lyapunov1_form(p, kind, cls, xi, cfg, f, n), x2);
            h.add(energy_form(p, kind, xi), cfg.N * poly);
        } else {
            h.add(lyapunov1_form(p, kind, cls, xi, cfg, f, n));
            h.add(energy_form(p, kind, xi), cfg.Nprime * (1.0 + x2));
        }
        return h;
    }
    }
    throw UnknownLemma("unknown functional");
}

double eval_functional(FunctionalId id, const ModeState& s, const Parameters& p, const LyapunovConfig& cfg) {
    if (id == FunctionalId::Energy) return mode_energy(s, p);
    return functional_form(id, p, s.kind, classify_speeds(p), s.xi, cfg)(s.u);
}

double log_energy(const Trajectory& tr, std::size_t i, const Parameters& p) {
    const double e = mode_energy(tr.states[i], p);
    if (e <= 0.0) return -std::numeric_limits<double>::infinity();
    return 2.0 * tr.log_scales[i] + std::log(e);
}

void fill_energies(Trajectory& tr, const Parameters& p) {
    tr.energies.resize(tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) tr.energies[i] = std::exp(log_energy(tr, i, p));
}

StateVector random_state(SystemKind kind, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    StateVector u(state_dimension(kind));
    for (int j = 0; j < u.size(); ++j) {
        const double re = nd(rng);
        const double im = nd(rng);
        u[j] = cplx(re, im);
    }
    return u / u.norm();
}

bool ResidualReport::holds(double rel_tol) const {
    return std::isfinite(fitted_constant) && max_violation <= rel_tol * std::max(1.0, scale);
}

ResidualReport check_dissipation_identity(const Trajectory& tr, const Generator& g, const Parameters& p) {
    const HermitianForm e = energy_form(p, tr.kind, tr.xi);
    ResidualReport r;
    r.lemma_id = "dissipation";
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const StateVector u = tr.true_state(i);
        const ModeState s{tr.kind, tr.xi, u};
        const double chain = e.derivative(u, g.matrix * u);
        const double energy = mode_energy(s, p);
        const double d = dissipation(s, p);
        r.max_violation = std::max(r.max_violation, std::abs(chain - d) / (1.0 + energy));
        r.scale = std::max(r.scale, std::abs(chain));
        ++r.n_samples;
    }
    return r;
}

ResidualReport check_dissipation_identity(const Trajectory& tr, const Parameters& p) {
    return check_dissipation_identity(tr, build_generator(p, tr.kind, tr.xi), p);
}

} // namespace bresse
