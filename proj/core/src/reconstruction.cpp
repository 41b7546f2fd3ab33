#include "bresse/reconstruction.hpp"

#include "bresse/errors.hpp"
#include "bresse/functionals.hpp"
#include "bresse/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bresse {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Streaming log-sum-exp.
struct LogSum {
    double max = kNegInf;
    double sum = 0.0;

    void add(double x) {
        if (x == kNegInf) return;
        if (x <= max) {
            sum += std::exp(x - max);
        } else {
            sum = sum * std::exp(max - x) + 1.0;
            max = x;
        }
    }
    double value() const { return max == kNegInf ? kNegInf : max + std::log(sum); }
};

double log_weighted(double weight, double xi, int k) {
    if (weight <= 0.0) return kNegInf;
    if (k > 0 && xi == 0.0) return kNegInf;
    return std::log(weight) + (k > 0 ? 2.0 * k * std::log(xi) : 0.0);
}

double hermite(int n, double x) {
    double h0 = 1.0;
    if (n == 0) return h0;
    double h1 = 2.0 * x;
    for (int j = 1; j < n; ++j) {
        const double h2 = 2.0 * x * h1 - 2.0 * j * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

bool is_displacement(const std::string& slot, SystemKind kind) {
    if (slot == "phi0" || slot == "psi0" || slot == "omega0") return true;
    return kind == SystemKind::TypeIII && (slot == "theta10" || slot == "theta20");
}

} // namespace

Profile Profile::gaussian(double sigma) {
    Profile p;
    p.shape = Shape::Gaussian;
    p.sigma = sigma;
    return p;
}

Profile Profile::box(double half_width) {
    Profile p;
    p.shape = Shape::Box;
    p.half_width = half_width;
    return p;
}

Profile Profile::band(double xi_lo, double xi_hi) {
    Profile p;
    p.shape = Shape::Band;
    p.xi_lo = xi_lo;
    p.xi_hi = xi_hi;
    return p;
}

Profile Profile::deriv_gaussian(double sigma, int order) {
    Profile p;
    p.shape = Shape::DerivGaussian;
    p.sigma = sigma;
    p.order = order;
    return p;
}

cplx Profile::transform(double xi) const {
    switch (shape) {
    case Shape::Gaussian:
        return sigma * std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * sigma * sigma * xi * xi);
    case Shape::Box:
        if (xi == 0.0) return 2.0 * half_width;
        return 2.0 * std::sin(half_width * xi) / xi;
    case Shape::Band: {
        const double a = std::abs(xi);
        return (a >= xi_lo && a <= xi_hi) ? 1.0 : 0.0;
    }
    case Shape::DerivGaussian:
        return std::pow(I * xi, order) * sigma * std::sqrt(2.0 * std::numbers::pi) *
               std::exp(-0.5 * sigma * sigma * xi * xi);
    }
    return 0.0;
}

std::optional<double> Profile::l1_norm() const {
    switch (shape) {
    case Shape::Gaussian: return sigma * std::sqrt(2.0 * std::numbers::pi);
    case Shape::Box: return 2.0 * half_width;
    case Shape::Band: return std::nullopt;
    case Shape::DerivGaussian: {
        // |g^(n)| integrates to the total variation of g^(n-1) across the roots of H_n.
        if (order == 0) return sigma * std::sqrt(2.0 * std::numbers::pi);
        const double scale = 1.0 / (sigma * std::sqrt(2.0));
        auto lower = [&](double u) {
            return std::pow(scale, order - 1) * hermite(order - 1, u) * std::exp(-u * u);
        };
        Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
        for (int j = 1; j < order; ++j) jacobi(j - 1, j) = jacobi(j, j - 1) = std::sqrt(0.5 * j);
        const Eigen::VectorXd roots = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(jacobi).eigenvalues();
        double total = std::abs(lower(roots[0])) + std::abs(lower(roots[order - 1]));
        for (int j = 1; j < order; ++j) total += std::abs(lower(roots[j]) - lower(roots[j - 1]));
        return total;
    }
    }
    return std::nullopt;
}

Profile::Shape parse_shape(std::string_view name) {
    if (name == "gaussian") return Profile::Shape::Gaussian;
    if (name == "box") return Profile::Shape::Box;
    if (name == "band") return Profile::Shape::Band;
    if (name == "deriv_gaussian" || name == "derivgaussian") return Profile::Shape::DerivGaussian;
    throw ConfigError("unknown profile '" + std::string(name) + "'");
}

int slot_index(SystemKind kind, const std::string& slot) {
    const StateLayout L = StateLayout::of(kind);
    if (slot == "phi0") return L.phi;
    if (slot == "phi1") return L.phi_t;
    if (slot == "psi0") return L.psi;
    if (slot == "psi1") return L.psi_t;
    if (slot == "omega0") return L.omega;
    if (slot == "omega1") return L.omega_t;
    if (slot == "theta10") return L.theta1;
    if (slot == "theta20") return L.theta2;
    if (kind == SystemKind::TypeIII) {
        if (slot == "theta11") return L.theta1_t;
        if (slot == "theta21") return L.theta2_t;
    }
    throw BadAssignment("slot '" + slot + "' is not available for " + std::string(to_string(kind)));
}

ModeState initial_mode_state(SystemKind kind, const InitialData& data, double xi) {
    ModeState s = ModeState::zero(kind, xi);
    for (const auto& [slot, profile] : data) s.u[slot_index(kind, slot)] += profile.transform(xi);
    return s;
}

StateVector vector_solution_components(const ModeState& s, const Parameters& p) {
    const StateLayout L = StateLayout::of(s.kind);
    const auto& u = s.u;
    const double xi = s.xi;
    const int n = state_dimension(s.kind);
    StateVector v(n);
    v[0] = std::sqrt(p.k) * (I * xi * u[L.phi] - u[L.psi] - p.l * u[L.omega]);
    v[1] = std::sqrt(p.k0) * (I * xi * u[L.omega] - p.l * u[L.phi]);
    v[2] = std::sqrt(p.b) * I * xi * u[L.psi];
    v[3] = std::sqrt(p.rho1) * u[L.phi_t];
    v[4] = std::sqrt(p.rho2) * u[L.psi_t];
    v[5] = std::sqrt(p.rho1) * u[L.omega_t];
    if (s.kind == SystemKind::TypeI) {
        v[6] = std::sqrt(p.gamma / p.m1) * u[L.theta1];
        v[7] = std::sqrt(p.gamma / p.m2) * u[L.theta2];
    } else {
        v[6] = std::sqrt(p.gamma / p.m1) * u[L.theta1_t];
        v[7] = std::sqrt(p.gamma / p.m2) * u[L.theta2_t];
        v[8] = std::sqrt(p.k1 * p.gamma / p.m1) * I * xi * u[L.theta1];
        v[9] = std::sqrt(p.k2 * p.gamma / p.m2) * I * xi * u[L.theta2];
    }
    return v;
}

bool has_l1(const InitialData& data) {
    return std::all_of(data.begin(), data.end(), [](const auto& kv) { return kv.second.l1_norm().has_value(); });
}

std::optional<int> regularity_order(SystemKind kind, const InitialData& data) {
    std::optional<int> order;
    for (const auto& [slot, profile] : data) {
        if (profile.shape != Profile::Shape::Box) continue;
        // |box^|^2 ~ xi^-2, one more power of xi for displacement slots.
        const int m = is_displacement(slot, kind) ? -1 : 0;
        order = order ? std::min(*order, m) : m;
    }
    return order;
}

FrequencyGrid adapted_grid(const FrequencyGrid& grid, const InitialData& data) {
    std::vector<double> extra;
    for (const auto& [slot, profile] : data)
        if (profile.shape == Profile::Shape::Band) {
            extra.push_back(profile.xi_lo);
            extra.push_back(profile.xi_hi);
        }
    if (extra.empty()) return grid;
    std::vector<double> bp = grid.breakpoints;
    for (double x : extra)
        if (x > grid.lo() && x < grid.hi()) bp.push_back(x);
    return make_gauss_grid(std::move(bp), grid.points_per_cell);
}

double log_tail_bound(const Parameters& p, SystemKind kind, const InitialData& data, int k, double from) {
    const double end = 1e4 * std::max(from, 1e-3);
    const FrequencyGrid tail = make_gauss_grid(geomspace(std::max(from, 1e-3), end, 401), 2);
    LogSum acc;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        const double e = mode_energy(initial_mode_state(kind, data, tail.nodes[i]), p);
        if (e > 0.0) acc.add(log_weighted(tail.weights[i], tail.nodes[i], k) + std::log(e));
    }
    // Beyond `end`: assume the integrand decays at least like 1/xi^2, giving end * f(end).
    const double e_end = mode_energy(initial_mode_state(kind, data, end), p);
    if (e_end > 0.0) acc.add(log_weighted(end, end, k) + std::log(e_end));
    return acc.value() - std::log(std::numbers::pi);
}

NormReport sobolev_norm(const Parameters& p, SystemKind kind, const InitialData& data, int k, double t,
                        const FrequencyGrid& grid) {
    const FrequencyGrid g = adapted_grid(grid, data);
    LogSum acc;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double xi = g.nodes[i];
        const ModeState s0 = initial_mode_state(kind, data, xi);
        if (s0.u.squaredNorm() == 0.0) continue;
        const Generator gen = build_generator(p, kind, xi);
        const ScaledState st = propagate_scaled(gen, s0.u, t);
        const double e = mode_energy(ModeState{kind, xi, st.direction}, p);
        if (e <= 0.0) continue;
        acc.add(log_weighted(g.weights[i], xi, k) + 2.0 * st.log_scale + std::log(e));
    }
    const double log_sq = acc.value() - std::log(std::numbers::pi);
    if (log_sq == kNegInf) throw NonPositiveNorm("norm of the data vanishes");
    NormReport r;
    r.log_value = 0.5 * log_sq;
    r.value = std::exp(r.log_value);
    const double log_tail = log_tail_bound(p, kind, data, k, g.hi());
    r.tail_fraction = log_tail == kNegInf ? 0.0 : std::exp(log_tail - log_sq);
    if (r.tail_fraction > kTailTolerance)
        throw TailTooFat("high-frequency tail beyond the grid is not negligible");
    return r;
}

NormSeries sobolev_series(const Parameters& p, SystemKind kind, const InitialData& data, std::span<const int> orders,
                          double t0, double t_end, int per_octave, const FrequencyGrid& grid, unsigned threads) {
    const FrequencyGrid g = adapted_grid(grid, data);
    NormSeries out;
    out.times = doubling_lattice(t0, t_end, per_octave);
    out.orders.assign(orders.begin(), orders.end());
    const std::size_t nt = out.times.size();

    // Per-node log energies, reduced afterwards in node order.
    std::vector<std::vector<double>> log_e(g.size());
    parallel_for(g.size(), threads, [&](std::size_t i) {
        const double xi = g.nodes[i];
        const ModeState s0 = initial_mode_state(kind, data, xi);
        if (s0.u.squaredNorm() == 0.0) return;
        const Trajectory tr = evolve_on_lattice(build_generator(p, kind, xi), s0.u, t0, t_end, per_octave);
        std::vector<double> le(nt);
        for (std::size_t j = 0; j < nt; ++j) le[j] = log_energy(tr, j, p);
        log_e[i] = std::move(le);
    });

    for (int k : out.orders) {
        std::vector<LogSum> acc(nt);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (log_e[i].empty()) continue;
            const double lw = log_weighted(g.weights[i], g.nodes[i], k);
            for (std::size_t j = 0; j < nt; ++j) acc[j].add(lw + log_e[i][j]);
        }
        std::vector<double> ln(nt);
        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < nt; ++j) {
            const double log_sq = acc[j].value() - std::log(std::numbers::pi);
            if (log_sq == kNegInf) throw NonPositiveNorm("norm of the data vanishes");
            ln[j] = 0.5 * log_sq;
            smallest = std::min(smallest, log_sq);
        }
        const double log_tail = log_tail_bound(p, kind, data, k, g.hi());
        const double frac = log_tail == kNegInf ? 0.0 : std::exp(log_tail - smallest);
        if (frac > kTailTolerance) throw TailTooFat("high-frequency tail beyond the grid is not negligible");
        out.log_norms.push_back(std::move(ln));
        out.tail_fraction.push_back(frac);
    }
    return out;
}

} // namespace bresse
