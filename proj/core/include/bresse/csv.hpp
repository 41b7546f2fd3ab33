#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace bresse {

std::string_view tool_version() noexcept;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// "# config_hash=<16 hex digits> tool_version=<semver>"
std::string csv_preamble(std::uint64_t config_hash);

/// Round-trip formatting of a double.
std::string format_double(double v);

} // namespace bresse
