#include "bresse/spectral_system.hpp"

#include "bresse/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <vector>

namespace bresse {

namespace {

constexpr cplx I{0.0, 1.0};

double one_norm(const ComplexMatrix& a) {
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

ComplexMatrix pade13(const ComplexMatrix& a) {
    static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                   1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                   670442572800.0,      33522128640.0,       1323241920.0,
                                   40840800.0,          960960.0,            16380.0,
                                   182.0,               1.0};
    const auto n = a.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
    const ComplexMatrix u = a * (inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const ComplexMatrix inner_v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
    const ComplexMatrix v = inner_v + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return (v - u).partialPivLu().solve(v + u);
}

int squarings_for(double norm) {
    constexpr double theta13 = 5.371920351148152;
    if (!std::isfinite(norm)) throw NonFiniteResult("matrix exponential of a non-finite matrix");
    if (norm <= theta13) return 0;
    return static_cast<int>(std::ceil(std::log2(norm / theta13)));
}

bool all_finite(const StateVector& v) {
    return v.allFinite();
}

void normalise(StateVector& v, double& log_scale) {
    const double n = v.norm();
    if (n == 0.0) return;
    if (!std::isfinite(n)) throw NonFiniteResult("state norm is not finite");
    v /= n;
    log_scale += std::log(n);
}

} // namespace

StateLayout StateLayout::of(SystemKind kind) noexcept {
    StateLayout s;
    if (kind == SystemKind::TypeIII) {
        s.theta1 = 6;
        s.theta1_t = 7;
        s.theta2 = 8;
        s.theta2_t = 9;
    }
    return s;
}

ModeState ModeState::zero(SystemKind kind, double xi) {
    return ModeState{kind, xi, StateVector::Zero(state_dimension(kind))};
}

Generator build_generator(const Parameters& p, SystemKind kind, double xi) {
    const StateLayout s = StateLayout::of(kind);
    const int n = state_dimension(kind);
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    const double x2 = xi * xi;
    const bool type3 = kind == SystemKind::TypeIII;
    const int c1 = type3 ? s.theta1_t : s.theta1;
    const int c2 = type3 ? s.theta2_t : s.theta2;

    a(s.phi, s.phi_t) = 1.0;
    a(s.psi, s.psi_t) = 1.0;
    a(s.omega, s.omega_t) = 1.0;

    a(s.phi_t, s.phi) = (-p.k * x2 - p.k0 * p.l * p.l) / p.rho1;
    a(s.phi_t, s.psi) = -I * p.k * xi / p.rho1;
    a(s.phi_t, s.omega) = I * (p.k0 - p.k) * p.l * xi / p.rho1;
    a(s.phi_t, c1) = -p.l * p.gamma / p.rho1;

    a(s.psi_t, s.phi) = I * p.k * xi / p.rho2;
    a(s.psi_t, s.psi) = (-p.b * x2 - p.k) / p.rho2;
    a(s.psi_t, s.omega) = -p.k * p.l / p.rho2;
    a(s.psi_t, c2) = -I * p.gamma * xi / p.rho2;

    a(s.omega_t, s.phi) = I * (p.k - p.k0) * p.l * xi / p.rho1;
    a(s.omega_t, s.psi) = -p.k * p.l / p.rho1;
    a(s.omega_t, s.omega) = (-p.k0 * x2 - p.k * p.l * p.l) / p.rho1;
    a(s.omega_t, c1) = -I * p.gamma * xi / p.rho1;

    if (type3) {
        a(s.theta1, s.theta1_t) = 1.0;
        a(s.theta2, s.theta2_t) = 1.0;
        a(s.theta1_t, s.theta1) = -p.k1 * x2;
        a(s.theta1_t, s.theta1_t) = -p.alpha1 * x2;
        a(s.theta2_t, s.theta2) = -p.k2 * x2;
        a(s.theta2_t, s.theta2_t) = -p.alpha2 * x2;
    } else {
        a(s.theta1, s.theta1) = -p.k1 * x2;
        a(s.theta2, s.theta2) = -p.k2 * x2;
    }
    a(c1, s.omega_t) = -I * p.m1 * xi;
    a(c1, s.phi_t) = p.m1 * p.l;
    a(c2, s.psi_t) = -I * p.m2 * xi;

    return Generator{kind, xi, std::move(a)};
}

StateVector state_derivative(const Generator& g, const StateVector& u) {
    return g.matrix * u;
}

ComplexMatrix expm(const ComplexMatrix& a) {
    const int s = squarings_for(one_norm(a));
    ComplexMatrix r = pade13(a / std::ldexp(1.0, s));
    for (int i = 0; i < s; ++i) r = r * r;
    return r;
}

ScaledMatrix expm_scaled(const ComplexMatrix& a) {
    const int s = squarings_for(one_norm(a));
    ScaledMatrix m{pade13(a / std::ldexp(1.0, s)), 0.0};
    const double n0 = one_norm(m.unit);
    m.unit /= n0;
    m.log_scale = std::log(n0);
    for (int i = 0; i < s; ++i) square_scaled(m);
    return m;
}

void square_scaled(ScaledMatrix& m) {
    m.unit = m.unit * m.unit;
    const double n = one_norm(m.unit);
    if (!(n > 0.0) || !std::isfinite(n)) throw NonFiniteResult("scaled squaring lost all significance");
    m.unit /= n;
    m.log_scale = 2.0 * m.log_scale + std::log(n);
}

ModeState propagate(const Generator& g, const ModeState& u0, double t) {
    if (t == 0.0) return ModeState{g.kind, g.xi, u0.u};
    StateVector v = expm(t * g.matrix) * u0.u;
    if (!all_finite(v)) throw NonFiniteResult("propagated state is not finite");
    return ModeState{g.kind, g.xi, std::move(v)};
}

ScaledState propagate_scaled(const Generator& g, const StateVector& u0, double t) {
    ScaledState out{u0, 0.0};
    normalise(out.direction, out.log_scale);
    if (t == 0.0) return out;
    const ScaledMatrix m = expm_scaled(t * g.matrix);
    out.direction = m.unit * out.direction;
    out.log_scale += m.log_scale;
    normalise(out.direction, out.log_scale);
    if (!all_finite(out.direction)) throw NonFiniteResult("propagated state is not finite");
    return out;
}

StateVector Trajectory::true_state(std::size_t i) const {
    return std::exp(log_scales[i]) * states[i].u;
}

Trajectory evolve_trajectory(const Parameters& p, SystemKind kind, double xi, const StateVector& u0,
                             std::span<const double> times) {
    return evolve_trajectory(build_generator(p, kind, xi), u0, times);
}

Trajectory evolve_trajectory(const Generator& g, const StateVector& u0, std::span<const double> times) {
    Trajectory tr;
    tr.kind = g.kind;
    tr.xi = g.xi;
    tr.times.assign(times.begin(), times.end());
    tr.states.reserve(times.size());
    tr.log_scales.reserve(times.size());

    StateVector dir = u0;
    double log_scale = 0.0;
    normalise(dir, log_scale);
    double t_prev = 0.0;
    double cached_dt = std::numeric_limits<double>::quiet_NaN();
    ScaledMatrix step;
    for (double t : times) {
        if (t < t_prev) throw ConfigError("trajectory times must be non-negative and non-decreasing");
        const double dt = t - t_prev;
        if (dt > 0.0) {
            if (dt != cached_dt) {
                step = expm_scaled(dt * g.matrix);
                cached_dt = dt;
            }
            dir = step.unit * dir;
            log_scale += step.log_scale;
            normalise(dir, log_scale);
            if (!all_finite(dir)) throw NonFiniteResult("propagated state is not finite");
        }
        tr.states.push_back(ModeState{g.kind, g.xi, dir});
        tr.log_scales.push_back(log_scale);
        t_prev = t;
    }
    return tr;
}

std::vector<double> doubling_lattice(double t0, double t_end, int per_octave) {
    if (!(t0 > 0.0) || per_octave < 1) throw ConfigError("doubling lattice needs t0 > 0 and per_octave >= 1");
    std::vector<double> times{0.0};
    const double limit = t_end * (1.0 + 1e-12);
    for (int m = 0; m < per_octave; ++m) {
        for (double t = t0 * std::exp2(static_cast<double>(m) / per_octave); t <= limit; t *= 2.0)
            times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    return times;
}

Trajectory evolve_on_lattice(const Generator& g, const StateVector& u0, double t0, double t_end, int per_octave) {
    if (!(t0 > 0.0) || per_octave < 1) throw ConfigError("doubling lattice needs t0 > 0 and per_octave >= 1");
    StateVector dir0 = u0;
    double log0 = 0.0;
    normalise(dir0, log0);

    struct Sample {
        double t;
        StateVector dir;
        double log_scale;
    };
    std::vector<Sample> samples;
    samples.push_back({0.0, dir0, log0});
    const double limit = t_end * (1.0 + 1e-12);
    for (int m = 0; m < per_octave; ++m) {
        double t = t0 * std::exp2(static_cast<double>(m) / per_octave);
        if (t > limit) break;
        ScaledMatrix e = expm_scaled(t * g.matrix);
        while (true) {
            StateVector v = e.unit * dir0;
            double ls = log0 + e.log_scale;
            normalise(v, ls);
            if (!all_finite(v)) throw NonFiniteResult("propagated state is not finite");
            samples.push_back({t, std::move(v), ls});
            t *= 2.0;
            if (t > limit) break;
            square_scaled(e);
        }
    }
    std::stable_sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.t < b.t; });

    Trajectory tr;
    tr.kind = g.kind;
    tr.xi = g.xi;
    for (auto& s : samples) {
        tr.times.push_back(s.t);
        tr.states.push_back(ModeState{g.kind, g.xi, std::move(s.dir)});
        tr.log_scales.push_back(s.log_scale);
    }
    return tr;
}

double spectral_abscissa(const Generator& g) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(g.matrix, false);
    if (es.info() != Eigen::Success) throw EigenFailure("eigenvalue iteration did not converge");
    // Eigenvalues of a defective block scatter by about sqrt(eps); the mean
    // of each tight cluster is accurate to rounding.
    const Eigen::VectorXcd ev = es.eigenvalues();
    const double tol = 1e-6 * std::max(1.0, g.matrix.cwiseAbs().maxCoeff());
    const Eigen::Index n = ev.size();
    std::vector<Eigen::Index> cluster(n);
    for (Eigen::Index i = 0; i < n; ++i) cluster[i] = i;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (std::abs(ev[i] - ev[j]) <= tol) {
                const Eigen::Index a = cluster[i];
                const Eigen::Index b = cluster[j];
                if (a != b)
                    for (Eigen::Index& c : cluster)
                        if (c == b) c = a;
            }
    double abscissa = -std::numeric_limits<double>::infinity();
    for (Eigen::Index root = 0; root < n; ++root) {
        double sum = 0.0;
        int count = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (cluster[i] == root) {
                sum += ev[i].real();
                ++count;
            }
        if (count > 0) abscissa = std::max(abscissa, sum / count);
    }
    return abscissa;
}

std::string trajectory_filename(SystemKind kind, double xi) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "mode_%s_%.6g.csv", std::string(to_string(kind)).c_str(), xi);
    return buf;
}

void write_trajectory_rows(std::ostream& out, const Trajectory& tr) {
    const int n = state_dimension(tr.kind);
    out << "t";
    for (int j = 0; j < n; ++j) out << ",re_u" << j << ",im_u" << j;
    out << ",energy\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t i = 0; i < tr.size(); ++i) {
        put(tr.times[i]);
        const StateVector u = tr.true_state(i);
        for (int j = 0; j < n; ++j) {
            out << ',';
            put(u[j].real());
            out << ',';
            put(u[j].imag());
        }
        out << ',';
        put(i < tr.energies.size() ? tr.energies[i] : std::numeric_limits<double>::quiet_NaN());
        out << '\n';
    }
}

} // namespace bresse
