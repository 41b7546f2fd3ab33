#include "experiment_config.hpp"

#include <bresse/csv.hpp>
#include <bresse/errors.hpp>
#include <bresse/spectral_system.hpp>

#include <algorithm>
#include <charconv>
#include <sstream>

namespace bresse::cli {

namespace {

std::string normalise_key(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

template <class Int>
Int parse_integer(const std::string& key, const std::string& text) {
    Int v{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError("invalid integer for '" + key + "': '" + text + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw ConfigError("invalid boolean for '" + key + "': '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
    if (out.empty()) throw ConfigError("empty list for '" + key + "'");
    return out;
}

std::pair<int, int> parse_entry(const std::string& key, const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError("expected ROW,COL for '" + key + "': '" + text + "'");
    return {parse_integer<int>(key, text.substr(0, comma)), parse_integer<int>(key, text.substr(comma + 1))};
}

Command parse_command(const std::string& text) {
    if (text == "bounds") return Command::Bounds;
    if (text == "simulate") return Command::Simulate;
    if (text == "envelope") return Command::Envelope;
    if (text == "verify") return Command::Verify;
    if (text == "rates") return Command::Rates;
    throw ConfigError("unknown command '" + text + "'");
}

} // namespace

std::string_view to_string(Command c) noexcept {
    switch (c) {
    case Command::Bounds: return "bounds";
    case Command::Simulate: return "simulate";
    case Command::Envelope: return "envelope";
    case Command::Verify: return "verify";
    case Command::Rates: return "rates";
    }
    return "?";
}

InitialData ExperimentConfig::initial_data() const {
    Profile prof;
    switch (parse_shape(profile)) {
    case Profile::Shape::Gaussian: prof = Profile::gaussian(sigma); break;
    case Profile::Shape::Box: prof = Profile::box(half_width); break;
    case Profile::Shape::Band: prof = Profile::band(band_lo, band_hi); break;
    case Profile::Shape::DerivGaussian: prof = Profile::deriv_gaussian(sigma, order); break;
    }
    slot_index(kind, slot);
    return {{slot, prof}};
}

FrequencyGrid ExperimentConfig::grid() const {
    return default_grid(grid_geometric, grid_linear);
}

std::string ExperimentConfig::canonical() const {
    std::map<std::string, std::string> kv;
    for (const std::string& name : Parameters::names()) kv[name] = format_double(params.at(name));
    kv["command"] = to_string(command);
    kv["kind"] = to_string(kind);
    kv["allow_degenerate"] = allow_degenerate ? "1" : "0";
    kv["seed"] = std::to_string(seed);
    kv["profile"] = profile;
    kv["slot"] = slot;
    kv["sigma"] = format_double(sigma);
    kv["half_width"] = format_double(half_width);
    kv["band_lo"] = format_double(band_lo);
    kv["band_hi"] = format_double(band_hi);
    kv["order"] = std::to_string(order);
    kv["k_order"] = std::to_string(k);
    kv["l_order"] = std::to_string(l);
    kv["t_lo"] = format_double(t_lo);
    kv["t_hi"] = format_double(t_hi);
    kv["per_octave"] = std::to_string(per_octave);
    kv["modes"] = std::to_string(modes);
    kv["xi_min"] = format_double(xi_min);
    kv["xi_max"] = format_double(xi_max);
    std::string xs;
    for (double x : xis) xs += (xs.empty() ? "" : ",") + format_double(x);
    kv["xi"] = xs;
    kv["t_max"] = format_double(t_max);
    kv["n_times"] = std::to_string(n_times);
    kv["random_initial"] = random_initial ? "1" : "0";
    kv["grid_geometric"] = std::to_string(grid_geometric);
    kv["grid_linear"] = std::to_string(grid_linear);
    kv["corrupt_sign"] = mutate ? std::to_string(mutate->first) + "," + std::to_string(mutate->second) : "none";
    std::string out;
    for (const auto& [key, value] : kv) out += key + "=" + value + "\n";
    return out;
}

std::uint64_t ExperimentConfig::hash() const {
    return fnv1a64(canonical());
}

void apply_settings(ExperimentConfig& cfg, const std::map<std::string, std::string>& raw) {
    std::map<std::string, std::string> values;
    for (const auto& [key, value] : raw) values[normalise_key(key)] = value;
    for (const std::string& key : apply_parameters(cfg.params, values)) {
        const std::string& v = values.at(key);
        if (key == "command") cfg.command = parse_command(v);
        else if (key == "kind") cfg.kind = parse_kind(v);
        else if (key == "allow_degenerate") cfg.allow_degenerate = parse_bool(key, v);
        else if (key == "seed") cfg.seed = parse_integer<std::uint64_t>(key, v);
        else if (key == "threads") cfg.threads = parse_integer<unsigned>(key, v);
        else if (key == "out") cfg.out_dir = v;
        else if (key == "profile") cfg.profile = v;
        else if (key == "slot") cfg.slot = v;
        else if (key == "sigma") cfg.sigma = parse_double(key, v);
        else if (key == "half_width") cfg.half_width = parse_double(key, v);
        else if (key == "band_lo") cfg.band_lo = parse_double(key, v);
        else if (key == "band_hi") cfg.band_hi = parse_double(key, v);
        else if (key == "order") cfg.order = parse_integer<int>(key, v);
        else if (key == "k_order") cfg.k = parse_integer<int>(key, v);
        else if (key == "l_order") cfg.l = parse_integer<int>(key, v);
        else if (key == "t_lo") cfg.t_lo = parse_double(key, v);
        else if (key == "t_hi") cfg.t_hi = parse_double(key, v);
        else if (key == "per_octave") cfg.per_octave = parse_integer<int>(key, v);
        else if (key == "modes") cfg.modes = parse_integer<std::size_t>(key, v);
        else if (key == "xi_min") cfg.xi_min = parse_double(key, v);
        else if (key == "xi_max") cfg.xi_max = parse_double(key, v);
        else if (key == "xi") cfg.xis = parse_list(key, v);
        else if (key == "t_max") cfg.t_max = parse_double(key, v);
        else if (key == "n_times") cfg.n_times = parse_integer<std::size_t>(key, v);
        else if (key == "random_initial") cfg.random_initial = parse_bool(key, v);
        else if (key == "grid_geometric") cfg.grid_geometric = parse_integer<std::size_t>(key, v);
        else if (key == "grid_linear") cfg.grid_linear = parse_integer<std::size_t>(key, v);
        else if (key == "corrupt_sign") cfg.mutate = parse_entry(key, v);
        else throw ConfigError("unknown setting '" + key + "'");
    }
}

void validate(const ExperimentConfig& cfg) {
    validate(cfg.params, cfg.kind, cfg.allow_degenerate);
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    require(cfg.threads >= 1, "threads must be at least 1");
    require(cfg.sigma > 0.0 && cfg.half_width > 0.0, "profile widths must be positive");
    require(cfg.band_lo >= 0.0 && cfg.band_hi > cfg.band_lo, "band needs 0 <= band_lo < band_hi");
    require(cfg.order >= 0, "order must be non-negative");
    require(cfg.k >= 0, "k must be non-negative");
    require(cfg.t_lo > 0.0 && cfg.t_hi > cfg.t_lo, "window needs 0 < t_lo < t_hi");
    require(cfg.per_octave >= 1, "per_octave must be at least 1");
    require(cfg.modes >= 1, "modes must be at least 1");
    require(cfg.xi_min > 0.0 && cfg.xi_max >= cfg.xi_min, "envelope range needs 0 < xi_min <= xi_max");
    require(cfg.t_max >= 0.0 && cfg.n_times >= 1, "simulate needs t_max >= 0 and n_times >= 1");
    require(cfg.grid_geometric >= 2 && cfg.grid_linear >= 1, "grid too coarse");
    if (cfg.mutate) {
        const int n = state_dimension(cfg.kind);
        const auto [r, c] = *cfg.mutate;
        require(r >= 0 && r < n && c >= 0 && c < n, "corrupt_sign entry outside the generator");
    }
    cfg.initial_data();
}

} // namespace bresse::cli
