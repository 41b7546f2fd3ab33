#include "bresse/lemmas.hpp"

#include "bresse/errors.hpp"
#include "bresse/frequency_grid.hpp"
#include "bresse/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bresse {

namespace {

constexpr cplx I{0.0, 1.0};

/// Named quantities of one state; c1 and c2 are the thermal variables that
/// enter the coupling (theta_i for Type I, their rates for Type III).
struct View {
    double xi, ax, x2;
    cplx phi, phi_t, psi, psi_t, omega_t, theta1, theta2, c1, c2, shear, axial;

    View(const ModeState& s, double l) : xi(s.xi), ax(std::abs(s.xi)), x2(s.xi * s.xi) {
        const StateLayout L = StateLayout::of(s.kind);
        const auto& u = s.u;
        phi = u[L.phi];
        phi_t = u[L.phi_t];
        psi = u[L.psi];
        psi_t = u[L.psi_t];
        const cplx omega = u[L.omega];
        omega_t = u[L.omega_t];
        theta1 = u[L.theta1];
        theta2 = u[L.theta2];
        c1 = s.kind == SystemKind::TypeI ? theta1 : u[L.theta1_t];
        c2 = s.kind == SystemKind::TypeI ? theta2 : u[L.theta2_t];
        shear = I * xi * phi - psi - l * omega;
        axial = I * xi * omega - l * phi;
    }
};

double a(cplx z) { return std::abs(z); }
double sq(cplx z) { return std::norm(z); }
/// Re(c x conj(y))
double re(cplx c, cplx x, cplx y) { return (c * x * std::conj(y)).real(); }

LemmaTerms j1_terms(const View& v, const Parameters& p, bool type3) {
    const double cubic = v.ax * v.x2;
    LemmaTerms t;
    t.coercive = 0.5 * p.m2 * p.rho2 * v.x2 * sq(v.psi_t);
    t.explicit_rhs = ((type3 ? p.k2 * p.rho2 : 0.0) + p.b) * cubic * a(v.psi) * a(v.c2) +
                     p.k * v.ax * a(v.c2) * a(v.shear);
    t.constant_rhs = (1.0 + v.x2) * v.x2 * sq(v.c2);
    return t;
}

LemmaTerms t1_terms(const View& v, const Parameters& p, bool type3) {
    LemmaTerms t;
    t.coercive = 0.5 * p.k0 * p.l * sq(v.axial);
    t.explicit_rhs = -re(I * p.k * v.xi, v.shear, v.axial);
    if (type3) {
        t.explicit_rhs += p.alpha1 * p.rho1 / p.m1 * v.x2 * a(v.phi_t) * a(v.c1) -
                          p.k / p.m1 * re(I * v.xi, std::conj(v.c1), std::conj(v.shear)) +
                          p.rho1 * p.k1 / p.m1 * re(v.x2, v.phi_t, v.theta1);
    } else {
        t.explicit_rhs += p.rho1 * p.k1 / p.m1 * v.x2 * a(v.phi_t) * a(v.c1) +
                          p.k / p.m1 * v.ax * a(v.c1) * a(v.shear);
    }
    t.constant_rhs = sq(v.c1);
    return t;
}

LemmaTerms t2_terms(const View& v, const Parameters& p, bool type3) {
    const double cubic = v.ax * v.x2;
    LemmaTerms t;
    t.coercive = 0.5 * p.k0 * v.x2 * sq(v.axial);
    t.explicit_rhs = re(I * p.k * p.l * v.xi, v.shear, v.axial);
    if (type3) {
        t.explicit_rhs += p.alpha1 * p.rho1 / p.m1 * cubic * a(v.omega_t) * a(v.c1) +
                          p.k * p.l / p.m1 * re(I * v.xi, std::conj(v.c1), std::conj(v.shear)) -
                          p.k1 * p.rho1 / p.m1 * re(I * v.xi * v.x2, v.omega_t, v.theta1);
    } else {
        t.explicit_rhs += p.rho1 * p.k1 / p.m1 * cubic * a(v.omega_t) * a(v.c1) +
                          p.k * p.l / p.m1 * v.ax * a(v.c1) * a(v.shear);
    }
    t.constant_rhs = v.x2 * sq(v.c1);
    return t;
}

LemmaTerms j2_terms(const View& v, const Parameters& p, const LyapunovConfig& cfg, bool type3) {
    const double cubic = v.ax * v.x2;
    LemmaTerms t;
    if (type3) {
        t.coercive = p.k0 * 0.5 * cfg.delta * (1.0 + v.x2) * sq(v.axial);
        t.explicit_rhs = p.alpha1 * p.rho1 * p.l / p.m1 * v.x2 * a(v.phi_t) * a(v.c1) +
                         p.alpha1 * p.rho1 / p.m1 * cubic * a(v.omega_t) * a(v.c1);
    } else {
        t.coercive = p.k0 * cfg.delta * (1.0 + v.x2) * sq(v.axial);
        t.explicit_rhs = p.rho1 * p.l * p.k1 / p.m1 * v.x2 * a(v.phi_t) * a(v.c1) +
                         2.0 * p.k * p.l / p.m1 * v.ax * a(v.c1) * a(v.shear) +
                         p.rho1 * p.k1 / p.m1 * cubic * a(v.omega_t) * a(v.c1);
    }
    t.constant_rhs = (1.0 + v.x2) * sq(v.c1);
    return t;
}

LemmaTerms j3_terms(const View& v, const Parameters& p, SpeedClass cls) {
    LemmaTerms t;
    t.coercive = 0.5 * p.k * sq(v.shear);
    const double xcoef = cls == SpeedClass::Equal ? p.b * p.l : p.k0 * p.b * p.l / p.k;
    t.explicit_rhs = p.rho2 * sq(v.psi_t) + p.rho2 * p.l * re(1.0, v.psi_t, v.omega_t) -
                     xcoef * re(I * v.xi, v.psi, v.axial) +
                     p.b * p.l * p.gamma / p.k * v.ax * a(v.psi) * a(v.c1);
    if (cls == SpeedClass::Distinct)
        t.explicit_rhs += (p.rho2 - p.b * p.rho1 / p.k) * re(I * v.xi, v.psi_t, v.phi_t);
    t.constant_rhs = v.x2 * sq(v.c2);
    return t;
}

LemmaTerms j4_terms(const View& v, const Parameters& p, const LyapunovConfig& cfg) {
    const double r = p.rho2 * p.l * p.l / p.rho1;
    LemmaTerms t;
    t.coercive = p.b * (r - 0.5 * cfg.eps1) * v.x2 * sq(v.psi);
    t.explicit_rhs = p.rho2 * r * sq(v.psi_t) - p.rho2 * p.l * re(1.0, std::conj(v.psi_t), std::conj(v.omega_t)) +
                     p.rho2 * p.k0 * p.l / p.rho1 * re(I * v.xi, v.psi, v.axial);
    t.constant_rhs = sq(v.c1) + sq(v.c2);
    return t;
}

LemmaTerms k_terms(const View& v, const Parameters& p, SpeedClass cls, const LyapunovConfig& cfg) {
    const double r = p.rho2 * p.l * p.l / p.rho1;
    LemmaTerms t;
    t.coercive = (r - cfg.eps1) * p.b * v.x2 * sq(v.psi) + 0.5 * p.k * sq(v.shear);
    t.explicit_rhs = p.rho2 * shear_ratio(p) * sq(v.psi_t);
    if (cls == SpeedClass::Distinct) {
        t.explicit_rhs += (p.rho2 / p.rho1 - p.b / p.k) * p.k0 * p.l * re(I * v.xi, v.psi, v.axial) +
                          (p.rho2 - p.b * p.rho1 / p.k) * re(I * v.xi, v.psi_t, v.phi_t);
    }
    t.constant_rhs = sq(v.c1) + (1.0 + v.x2) * sq(v.c2);
    return t;
}

LemmaTerms h_terms(const View& v, const Parameters& p, SpeedClass cls) {
    LemmaTerms t;
    t.coercive = p.rho1 * p.l * sq(v.phi_t) + 0.5 * p.rho1 * p.l * sq(v.omega_t);
    if (cls == SpeedClass::Equal) {
        t.explicit_rhs = p.rho2 * p.k / (2.0 * p.b * p.l) * sq(v.psi_t) + 1.5 * p.k * p.l * sq(v.shear) +
                         1.5 * p.k0 * p.l * sq(v.axial);
        t.constant_rhs = (1.0 + v.x2) * sq(v.c1);
    } else {
        t.explicit_rhs = p.rho1 / (2.0 * p.l) * sq(v.psi_t);
        t.constant_rhs = sq(v.shear) + (1.0 + v.x2) * sq(v.axial) + (1.0 + v.x2) * sq(v.c1);
    }
    return t;
}

LemmaTerms s_terms(const View& v, const Parameters& p) {
    const double x4 = v.x2 * v.x2;
    LemmaTerms t;
    t.coercive = p.k1 * p.gamma / p.m1 * x4 * sq(v.theta1) + p.k2 * p.gamma / p.m2 * x4 * sq(v.theta2);
    t.explicit_rhs = p.gamma * v.x2 * a(v.c1) * a(v.axial) + p.gamma * v.ax * v.x2 * a(v.psi) * a(v.c2) +
                     p.gamma / p.m1 * v.x2 * sq(v.c1) + p.gamma / p.m2 * v.x2 * sq(v.c2);
    t.constant_rhs = 0.0;
    return t;
}

} // namespace

std::vector<std::string> lemma_ids(SystemKind kind) {
    std::vector<std::string> ids{"J1", "T1", "T2", "J2", "J3", "J4", "K", "H"};
    if (kind == SystemKind::TypeIII) ids.push_back("S");
    return ids;
}

FunctionalId lemma_functional(std::string_view id, SystemKind kind) {
    const auto ids = lemma_ids(SystemKind::TypeIII);
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
        throw UnknownLemma("unknown estimate '" + std::string(id) + "'");
    if (id == "S" && kind != SystemKind::TypeIII) throw WrongKind("S is defined for Type III only");
    return parse_functional(id);
}

LemmaTerms lemma_terms(std::string_view id, const ModeState& s, const Parameters& p, SpeedClass cls,
                       const LyapunovConfig& cfg) {
    const FunctionalId f = lemma_functional(id, s.kind);
    const View v(s, p.l);
    const bool type3 = s.kind == SystemKind::TypeIII;
    switch (f) {
    case FunctionalId::J1: return j1_terms(v, p, type3);
    case FunctionalId::T1: return t1_terms(v, p, type3);
    case FunctionalId::T2: return t2_terms(v, p, type3);
    case FunctionalId::J2: return j2_terms(v, p, cfg, type3);
    case FunctionalId::J3: return j3_terms(v, p, cls);
    case FunctionalId::J4: return j4_terms(v, p, cfg);
    case FunctionalId::K: return k_terms(v, p, cls, cfg);
    case FunctionalId::H: return h_terms(v, p, cls);
    case FunctionalId::S: return s_terms(v, p);
    default: break;
    }
    throw UnknownLemma("unknown estimate '" + std::string(id) + "'");
}

ResidualReport check_lemma_inequality(std::string_view id, std::span<const Trajectory> trajectories,
                                      const Parameters& p, const LyapunovConfig& cfg) {
    const SpeedClass cls = classify_speeds(p);
    struct Sample {
        double excess;   // dF + coercive - explicit, in true units
        double constant; // constant_rhs, in true units
    };
    std::vector<Sample> samples;
    double scale = 0.0;
    for (const Trajectory& tr : trajectories) {
        const FunctionalId f = lemma_functional(id, tr.kind);
        const Generator g = build_generator(p, tr.kind, tr.xi);
        const HermitianForm rate = functional_form(f, p, tr.kind, cls, tr.xi, cfg).along(g.matrix);
        for (std::size_t i = 0; i < tr.size(); ++i) {
            const LemmaTerms t = lemma_terms(id, tr.states[i], p, cls, cfg);
            const double d = rate(tr.states[i].u);
            const double w = std::exp(2.0 * tr.log_scales[i]);
            samples.push_back({w * (d + t.coercive - t.explicit_rhs), w * t.constant_rhs});
            scale = std::max({scale, w * std::abs(d), w * t.coercive, w * std::abs(t.explicit_rhs)});
        }
    }

    ResidualReport r;
    r.lemma_id = std::string(id);
    r.n_samples = samples.size();
    r.scale = scale;
    // Rounding floor below which an excess is treated as zero.
    const double floor = 1e-12 * scale;
    double c = 0.0;
    for (const Sample& s : samples) {
        if (s.excess <= floor) continue;
        if (s.constant > 0.0) {
            c = std::max(c, s.excess / s.constant);
        } else {
            c = std::numeric_limits<double>::infinity();
        }
    }
    if (std::isfinite(c)) c *= 1.0 + 1e-12;
    r.fitted_constant = c;
    double worst = samples.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
    for (const Sample& s : samples) {
        const double allowance = s.constant > 0.0 && std::isfinite(c) ? c * s.constant : 0.0;
        worst = std::max(worst, s.excess - allowance);
    }
    r.max_violation = worst;
    return r;
}

ResidualReport check_lemma_inequality(std::string_view id, const Trajectory& tr, const Parameters& p,
                                      const LyapunovConfig& cfg) {
    return check_lemma_inequality(id, std::span<const Trajectory>(&tr, 1), p, cfg);
}

std::vector<double> lemma_sample_times(std::size_t count) {
    std::vector<double> times{0.0};
    if (count > 1) {
        const auto rest = geomspace(1e-2, 1e3, count - 1);
        times.insert(times.end(), rest.begin(), rest.end());
    }
    return times;
}

std::vector<Trajectory> sample_trajectories(const Parameters& p, SystemKind kind, std::span<const double> xis,
                                            std::size_t per_xi, std::span<const double> times, std::uint64_t seed,
                                            bool quiet, unsigned threads) {
    std::vector<Trajectory> out(xis.size() * per_xi);
    const StateLayout L = StateLayout::of(kind);
    parallel_for(out.size(), threads, [&](std::size_t idx) {
        const std::size_t ix = idx / per_xi;
        const std::size_t j = idx % per_xi;
        std::seed_seq sseq{seed, static_cast<std::uint64_t>(ix), static_cast<std::uint64_t>(j)};
        std::mt19937_64 rng(sseq);
        StateVector u0 = random_state(kind, rng);
        if (quiet && j % 2 == 1) {
            for (int slot : {L.theta1, L.theta2, L.theta1_t, L.theta2_t})
                if (slot >= 0) u0[slot] = 0.0;
            u0 /= u0.norm();
        }
        out[idx] = evolve_trajectory(p, kind, xis[ix], u0, times);
    });
    return out;
}

} // namespace bresse
