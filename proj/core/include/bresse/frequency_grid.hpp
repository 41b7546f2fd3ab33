#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bresse {

/// Composite Gauss-Legendre rule on the half line [0, hi]. Integrands are
/// even in xi, so callers double the result for the full line.
struct FrequencyGrid {
    std::vector<double> breakpoints;
    std::vector<double> nodes;
    std::vector<double> weights;
    int points_per_cell = 2;

    std::size_t size() const noexcept { return nodes.size(); }
    double lo() const { return breakpoints.front(); }
    double hi() const { return breakpoints.back(); }
};

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> geomspace(double lo, double hi, std::size_t n);

/// Sorted, de-duplicated breakpoints; 1 to 5 Gauss points per cell.
FrequencyGrid make_gauss_grid(std::vector<double> breakpoints, int points_per_cell = 2);

/// Union of `geometric` log-spaced points on [1e-3, 1e2], `linear` uniform
/// cells on [0, 1], and the origin.
FrequencyGrid default_grid(std::size_t geometric = 2048, std::size_t linear = 1024);

/// Halves every cell.
FrequencyGrid refine(const FrequencyGrid& grid);

/// Keeps only the cells lying inside [lo, hi] after inserting both ends.
FrequencyGrid restrict_grid(const FrequencyGrid& grid, double lo, double hi);

double integrate(const FrequencyGrid& grid, std::span<const double> values);

} // namespace bresse
