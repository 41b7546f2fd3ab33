#pragma once

#include <bresse/parameters.hpp>
#include <bresse/reconstruction.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bresse::cli {

enum class Command { Bounds, Simulate, Envelope, Verify, Rates };

std::string_view to_string(Command c) noexcept;

/// Everything that determines a run. `out_dir` and `threads` do not affect
/// results and are left out of the hash.
struct ExperimentConfig {
    Command command = Command::Bounds;
    SystemKind kind = SystemKind::TypeI;
    Parameters params;
    bool allow_degenerate = false;
    std::uint64_t seed = 42;
    unsigned threads = 1;
    std::string out_dir = ".";

    // initial data
    std::string profile = "gaussian";
    std::string slot = "psi1";
    double sigma = 1.0;
    double half_width = 1.0;
    double band_lo = 10.0;
    double band_hi = 20.0;
    int order = 1;

    // rates
    int k = 0;
    int l = -1;
    double t_lo = 1e3;
    double t_hi = 1e6;
    int per_octave = 8;

    // envelope
    std::size_t modes = 512;
    double xi_min = 0.01;
    double xi_max = 100.0;

    // simulate
    std::vector<double> xis{0.1, 1.0, 10.0};
    double t_max = 100.0;
    std::size_t n_times = 101;
    bool random_initial = false;

    // frequency grid
    std::size_t grid_geometric = 2048;
    std::size_t grid_linear = 1024;

    // verify: flip the sign of one generator entry
    std::optional<std::pair<int, int>> mutate;

    InitialData initial_data() const;
    FrequencyGrid grid() const;

    /// Sorted key=value lines of every result-affecting setting.
    std::string canonical() const;
    std::uint64_t hash() const;
};

/// Applies "key = value" settings; parameter names and the option names
/// above (with '-' or '_') are accepted. Throws ConfigError.
void apply_settings(ExperimentConfig& cfg, const std::map<std::string, std::string>& values);

/// Throws ConfigError or NonPositiveCoefficient.
void validate(const ExperimentConfig& cfg);

} // namespace bresse::cli
