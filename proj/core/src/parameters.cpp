#include "bresse/parameters.hpp"

#include "bresse/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>

namespace bresse {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

bool relatively_equal(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

} // namespace

std::string_view to_string(SystemKind kind) noexcept {
    return kind == SystemKind::TypeI ? "type1" : "type3";
}

std::string_view to_string(SpeedClass cls) noexcept {
    return cls == SpeedClass::Equal ? "equal" : "distinct";
}

SystemKind parse_kind(std::string_view text) {
    const std::string t = lower(text);
    if (t == "type1" || t == "typei" || t == "i" || t == "1") return SystemKind::TypeI;
    if (t == "type3" || t == "typeiii" || t == "iii" || t == "3") return SystemKind::TypeIII;
    throw ConfigError("unknown system kind '" + std::string(text) + "'");
}

const std::vector<std::string>& Parameters::names() {
    static const std::vector<std::string> n{"rho1", "rho2", "b",     "k",  "k0", "k1",     "k2",
                                            "l",    "gamma", "m1", "m2", "alpha1", "alpha2"};
    return n;
}

double& Parameters::at(std::string_view name) {
    if (name == "rho1") return rho1;
    if (name == "rho2") return rho2;
    if (name == "b") return b;
    if (name == "k") return k;
    if (name == "k0") return k0;
    if (name == "k1") return k1;
    if (name == "k2") return k2;
    if (name == "l") return l;
    if (name == "gamma") return gamma;
    if (name == "m1") return m1;
    if (name == "m2") return m2;
    if (name == "alpha1") return alpha1;
    if (name == "alpha2") return alpha2;
    throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

double Parameters::at(std::string_view name) const {
    return const_cast<Parameters&>(*this).at(name);
}

SpeedClass classify_speeds(const Parameters& p, double tol) {
    const bool equal = relatively_equal(p.rho1 / p.rho2, p.k / p.b, tol) && relatively_equal(p.k, p.k0, tol);
    return equal ? SpeedClass::Equal : SpeedClass::Distinct;
}

void validate(const Parameters& p, SystemKind kind, bool allow_degenerate) {
    for (const auto& name : Parameters::names()) {
        if (kind == SystemKind::TypeI && (name == "alpha1" || name == "alpha2")) continue;
        const double v = p.at(name);
        if (!std::isfinite(v)) throw NonPositiveCoefficient(name);
        if (name == "gamma" && allow_degenerate) {
            if (v < 0.0) throw NonPositiveCoefficient(name);
            continue;
        }
        if (v <= 0.0) throw NonPositiveCoefficient(name);
    }
}

std::map<std::string, std::string> read_key_values(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        out[key] = value;
    }
    return out;
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw ConfigError("value for '" + key + "' is not a number: '" + text + "'");
    return v;
}

std::vector<std::string> apply_parameters(Parameters& p, const std::map<std::string, std::string>& values) {
    std::vector<std::string> unknown;
    const auto& names = Parameters::names();
    for (const auto& [key, text] : values) {
        if (std::find(names.begin(), names.end(), key) == names.end()) {
            unknown.push_back(key);
            continue;
        }
        p.at(key) = parse_double(key, text);
    }
    return unknown;
}

} // namespace bresse
