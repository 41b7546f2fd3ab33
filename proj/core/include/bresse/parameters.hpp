#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bresse {

enum class SystemKind { TypeI, TypeIII };
enum class SpeedClass { Equal, Distinct };

/// Number of complex unknowns per Fourier mode.
constexpr int state_dimension(SystemKind kind) noexcept {
    return kind == SystemKind::TypeI ? 8 : 10;
}

std::string_view to_string(SystemKind kind) noexcept;
std::string_view to_string(SpeedClass cls) noexcept;

/// Accepts "type1", "typeI", "I", "type3", "typeIII", "III" (case-insensitive).
SystemKind parse_kind(std::string_view text);

/// Physical coefficients. alpha1 and alpha2 are only read for Type III.
struct Parameters {
    double rho1 = 1.0;
    double rho2 = 1.0;
    double b = 1.0;
    double k = 1.0;
    double k0 = 1.0;
    double k1 = 1.0;
    double k2 = 1.0;
    double l = 1.0;
    double gamma = 1.0;
    double m1 = 1.0;
    double m2 = 1.0;
    double alpha1 = 1.0;
    double alpha2 = 1.0;

    /// Field names in declaration order.
    static const std::vector<std::string>& names();

    /// Mutable access by field name; throws ConfigError for unknown names.
    double& at(std::string_view name);
    double at(std::string_view name) const;
};

inline constexpr double kDefaultClassTolerance = 1e-12;

/// Equal when rho1/rho2 == k/b and k == k0 up to a relative tolerance.
SpeedClass classify_speeds(const Parameters& p, double tol = kDefaultClassTolerance);

/// Throws NonPositiveCoefficient naming the first offending field.
/// With allow_degenerate the coupling gamma may be zero.
void validate(const Parameters& p, SystemKind kind, bool allow_degenerate = false);

/// Reads "key = value" lines; '#' starts a comment. Throws ConfigError.
std::map<std::string, std::string> read_key_values(std::istream& in);

/// Overwrites the fields present in `values`; unknown keys are left alone
/// and returned so callers can decide whether they are errors.
std::vector<std::string> apply_parameters(Parameters& p, const std::map<std::string, std::string>& values);

double parse_double(const std::string& key, const std::string& text);

} // namespace bresse
