#include "bresse/frequency_grid.hpp"

#include "bresse/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace bresse {

namespace {

struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

GaussRule gauss_legendre(int n) {
    switch (n) {
    case 1: return {{0.0}, {2.0}};
    case 2: {
        const double a = 1.0 / std::sqrt(3.0);
        return {{-a, a}, {1.0, 1.0}};
    }
    case 3: {
        const double a = std::sqrt(0.6);
        return {{-a, 0.0, a}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
    }
    case 4: {
        const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
        const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
        const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
        const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
        return {{-b, -a, a, b}, {wb, wa, wa, wb}};
    }
    case 5: {
        const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
        const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
        return {{-b, -a, 0.0, a, b}, {wb, wa, 128.0 / 225.0, wa, wb}};
    }
    default: throw ConfigError("points_per_cell must be between 1 and 5");
    }
}

} // namespace

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

std::vector<double> geomspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

FrequencyGrid make_gauss_grid(std::vector<double> breakpoints, int points_per_cell) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                  [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(b)); }),
                      breakpoints.end());
    if (breakpoints.size() < 2) throw ConfigError("a frequency grid needs at least two breakpoints");
    if (breakpoints.front() < 0.0) throw ConfigError("frequency grid breakpoints must be non-negative");

    const GaussRule rule = gauss_legendre(points_per_cell);
    FrequencyGrid grid;
    grid.points_per_cell = points_per_cell;
    grid.breakpoints = std::move(breakpoints);
    const std::size_t cells = grid.breakpoints.size() - 1;
    grid.nodes.reserve(cells * rule.x.size());
    grid.weights.reserve(cells * rule.x.size());
    for (std::size_t c = 0; c < cells; ++c) {
        const double a = grid.breakpoints[c];
        const double b = grid.breakpoints[c + 1];
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            grid.nodes.push_back(mid + half * rule.x[j]);
            grid.weights.push_back(half * rule.w[j]);
        }
    }
    return grid;
}

FrequencyGrid default_grid(std::size_t geometric, std::size_t linear) {
    std::vector<double> bp = geomspace(1e-3, 1e2, geometric);
    const std::vector<double> lin = linspace(0.0, 1.0, linear + 1);
    bp.insert(bp.end(), lin.begin(), lin.end());
    bp.push_back(0.0);
    return make_gauss_grid(std::move(bp), 2);
}

FrequencyGrid refine(const FrequencyGrid& grid) {
    std::vector<double> bp = grid.breakpoints;
    bp.reserve(2 * grid.breakpoints.size());
    for (std::size_t c = 0; c + 1 < grid.breakpoints.size(); ++c)
        bp.push_back(0.5 * (grid.breakpoints[c] + grid.breakpoints[c + 1]));
    return make_gauss_grid(std::move(bp), grid.points_per_cell);
}

FrequencyGrid restrict_grid(const FrequencyGrid& grid, double lo, double hi) {
    std::vector<double> bp{lo, hi};
    for (double x : grid.breakpoints)
        if (x > lo && x < hi) bp.push_back(x);
    return make_gauss_grid(std::move(bp), grid.points_per_cell);
}

double integrate(const FrequencyGrid& grid, std::span<const double> values) {
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * values[i];
    return sum;
}

} // namespace bresse
