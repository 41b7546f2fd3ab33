#include "bresse/proposition.hpp"

#include "bresse/envelopes.hpp"
#include "bresse/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace bresse {

namespace {

constexpr cplx I{0.0, 1.0};
double sq(cplx z) { return std::norm(z); }

struct Prepared {
    const Trajectory* tr;
    HermitianForm l1;
    HermitianForm dl1;
    HermitianForm e;
    double w;
    double poly;
    double s;
};

std::vector<Prepared> prepare(std::span<const Trajectory> trajectories, const Parameters& p, SpeedClass cls,
                              const LyapunovConfig& cfg) {
    std::vector<Prepared> out;
    out.reserve(trajectories.size());
    for (const Trajectory& tr : trajectories) {
        const Generator g = build_generator(p, tr.kind, tr.xi);
        HermitianForm l1 = functional_form(FunctionalId::Lyapunov1, p, tr.kind, cls, tr.xi, cfg);
        HermitianForm dl1 = l1.along(g.matrix);
        out.push_back({&tr, std::move(l1), std::move(dl1), energy_form(p, tr.kind, tr.xi),
                       lyapunov_weight(cls, tr.xi), energy_weight(cls, tr.xi), envelope_rate(cls, tr.xi)});
    }
    return out;
}

PropositionReport evaluate(const std::vector<Prepared>& prep, const Parameters& p, SpeedClass cls,
                           LyapunovConfig cfg, const std::map<double, PropositionMode>& modes) {
    const double inf = std::numeric_limits<double>::infinity();
    PropositionReport rep;
    rep.cls = cls;

    double c_min = 0.0;
    for (const Prepared& q : prep) {
        for (std::size_t i = 0; i < q.tr->size(); ++i) {
            const ModeState& st = q.tr->states[i];
            const double d = q.dl1(st.u);
            if (d <= 0.0) continue;
            const double r = thermal_rhs(st, cls);
            c_min = r > 0.0 ? std::max(c_min, d / r) : inf;
        }
    }
    rep.rhs_constant = 2.0 * c_min;

    double m = inf;
    double n_decay = 0.0;
    double worst = -inf;
    std::size_t count = 0;
    for (const Prepared& q : prep) {
        for (std::size_t i = 0; i < q.tr->size(); ++i) {
            const ModeState& st = q.tr->states[i];
            const double d = q.dl1(st.u);
            const double wsum = coercive_sum(st, p, cls);
            const double r = thermal_rhs(st, cls);
            if (wsum > 0.0) m = std::min(m, (rep.rhs_constant * r - d) / wsum);
            const double de = dissipation(st, p);
            if (d > 0.0) n_decay = de < 0.0 ? std::max(n_decay, q.w * d / (q.poly * -de)) : inf;
            ++count;
        }
    }
    rep.M = m;

    double m1 = 0.0;
    for (const auto& [xi, mode] : modes) m1 = std::max(m1, mode.sandwich);
    rep.M1 = m1;
    rep.N = 2.0 * std::max(m1, n_decay);
    if (cls == SpeedClass::Equal) {
        cfg.N = rep.N;
    } else {
        cfg.Nprime = rep.N;
    }

    double beta = inf;
    bool monotone = true;
    for (const Prepared& q : prep) {
        for (std::size_t i = 0; i < q.tr->size(); ++i) {
            const ModeState& st = q.tr->states[i];
            const double d = q.dl1(st.u);
            const double e = q.e(st.u);
            const double lyap = q.w * q.l1(st.u) + rep.N * q.poly * e;
            const double dlyap = q.w * d + rep.N * q.poly * dissipation(st, p);
            if (dlyap > 1e-12 * (std::abs(q.w * d) + rep.N * q.poly * e)) monotone = false;
            if (lyap > 0.0 && q.s > 0.0) beta = std::min(beta, -dlyap / (q.s * lyap));
            const double scale = std::exp(2.0 * q.tr->log_scales[i]);
            if (std::isfinite(rep.M) && std::isfinite(rep.rhs_constant))
                worst = std::max(worst, scale * (d + rep.M * coercive_sum(st, p, cls) -
                                                 rep.rhs_constant * thermal_rhs(st, cls)));
        }
    }
    rep.beta = beta;
    rep.monotone = monotone;
    rep.cfg = cfg;
    rep.residual.lemma_id = "proposition";
    rep.residual.fitted_constant = rep.rhs_constant;
    rep.residual.max_violation = std::isfinite(worst) ? worst : (count ? inf : 0.0);
    rep.residual.n_samples = count;
    for (const auto& [xi, mode] : modes) rep.modes.push_back(mode);
    return rep;
}

std::map<double, PropositionMode> mode_table(std::span<const Trajectory> trajectories, const Parameters& p,
                                             SpeedClass cls, const LyapunovConfig& cfg) {
    std::map<double, PropositionMode> modes;
    for (const Trajectory& tr : trajectories) {
        if (modes.count(tr.xi)) continue;
        PropositionMode m;
        m.xi = tr.xi;
        m.abscissa = spectral_abscissa(build_generator(p, tr.kind, tr.xi));
        const double s = envelope_rate(cls, tr.xi);
        m.beta_ceiling = s > 0.0 ? std::abs(m.abscissa) / s : std::numeric_limits<double>::infinity();
        m.sandwich = tr.xi != 0.0 ? sandwich_constant(p, tr.kind, tr.xi, cfg) : 0.0;
        modes.emplace(tr.xi, m);
    }
    return modes;
}

} // namespace

bool PropositionReport::holds() const {
    if (!(M > 0.0) || !(beta > 0.0) || !(N > M1) || !monotone) return false;
    if (!std::isfinite(rhs_constant) || !std::isfinite(N)) return false;
    return std::all_of(modes.begin(), modes.end(), [&](const PropositionMode& m) { return beta <= m.beta_ceiling; });
}

double lyapunov_weight(SpeedClass cls, double xi) noexcept {
    return cls == SpeedClass::Equal ? xi * xi : 1.0;
}

double energy_weight(SpeedClass cls, double xi) noexcept {
    const double x2 = xi * xi;
    if (cls == SpeedClass::Equal) return 1.0 + x2 * (1.0 + x2 * (1.0 + x2 * (1.0 + x2)));
    return 1.0 + x2;
}

double sandwich_constant(const Parameters& p, SystemKind kind, double xi, const LyapunovConfig& cfg) {
    const SpeedClass cls = classify_speeds(p);
    const ComplexMatrix e = energy_form(p, kind, xi).matrix();
    const ComplexMatrix l1 = functional_form(FunctionalId::Lyapunov1, p, kind, cls, xi, cfg).matrix();
    Eigen::LLT<ComplexMatrix> llt(e);
    if (llt.info() != Eigen::Success) throw EigenFailure("energy form is not positive definite");
    const ComplexMatrix y = llt.matrixL().solve(l1);
    const ComplexMatrix c = llt.matrixL().solve(y.adjoint()).adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (c + c.adjoint()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenFailure("Hermitian eigenproblem did not converge");
    const double mu = es.eigenvalues().cwiseAbs().maxCoeff();
    return mu * lyapunov_weight(cls, xi) / energy_weight(cls, xi);
}

double coercive_sum(const ModeState& s, const Parameters& p, SpeedClass cls) {
    const StateLayout L = StateLayout::of(s.kind);
    const auto& u = s.u;
    const double xi = s.xi;
    const double x2 = xi * xi;
    const cplx shear = I * xi * u[L.phi] - u[L.psi] - p.l * u[L.omega];
    const cplx axial = I * xi * u[L.omega] - p.l * u[L.phi];
    double brace = p.b * x2 * sq(u[L.psi]) + p.k * sq(shear) + p.rho2 * sq(u[L.psi_t]) + p.k0 * sq(axial) +
                   p.rho1 * sq(u[L.phi_t]) + p.rho1 * sq(u[L.omega_t]);
    if (s.kind == SystemKind::TypeIII)
        brace += p.k1 * p.gamma / p.m1 * x2 * sq(u[L.theta1]) + p.k2 * p.gamma / p.m2 * x2 * sq(u[L.theta2]);
    if (cls == SpeedClass::Equal) return x2 * brace;
    const double q = 1.0 + x2 + x2 * x2;
    return x2 * x2 / (q * q) * brace;
}

double thermal_rhs(const ModeState& s, SpeedClass cls) {
    const StateLayout L = StateLayout::of(s.kind);
    const bool type3 = s.kind == SystemKind::TypeIII;
    const double a1 = sq(s.u[type3 ? L.theta1_t : L.theta1]);
    const double a2 = sq(s.u[type3 ? L.theta2_t : L.theta2]);
    const double x2 = s.xi * s.xi;
    if (cls == SpeedClass::Equal)
        return (1.0 + x2 * (1.0 + x2 * (1.0 + x2))) * x2 * a1 + (1.0 + x2 * (1.0 + x2)) * a2;
    return (1.0 + x2) * x2 * (a1 + a2);
}

PropositionReport check_proposition(std::span<const Trajectory> trajectories, const Parameters& p,
                                    const LyapunovConfig& cfg) {
    const SpeedClass cls = classify_speeds(p);
    const auto prep = prepare(trajectories, p, cls, cfg);
    return evaluate(prep, p, cls, cfg, mode_table(trajectories, p, cls, cfg));
}

LyapunovConfig fit_lambdas(std::span<const Trajectory> trajectories, const Parameters& p, LyapunovConfig cfg) {
    const SpeedClass cls = classify_speeds(p);
    if (cls == SpeedClass::Equal) return cfg;
    LyapunovConfig best = cfg;
    double best_beta = -std::numeric_limits<double>::infinity();
    bool best_holds = false;
    for (double l1 : {0.25, 1.0, 4.0, 16.0, 64.0}) {
        for (double l2 : {0.25, 1.0, 4.0, 16.0, 64.0}) {
            LyapunovConfig c = cfg;
            c.lambda1 = l1;
            c.lambda2 = l2;
            const PropositionReport rep = check_proposition(trajectories, p, c);
            const bool ok = rep.holds();
            if ((ok && !best_holds) || (ok == best_holds && rep.beta > best_beta)) {
                best = c;
                best_beta = rep.beta;
                best_holds = ok;
            }
        }
    }
    return best;
}

} // namespace bresse
