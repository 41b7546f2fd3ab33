#include "bresse/csv.hpp"

#include <cstdio>

#ifndef BRESSE_TOOL_VERSION
#define BRESSE_TOOL_VERSION "0.0.0"
#endif

namespace bresse {

std::string_view tool_version() noexcept {
    return BRESSE_TOOL_VERSION;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string csv_preamble(std::uint64_t config_hash) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "# config_hash=%016llx tool_version=", static_cast<unsigned long long>(config_hash));
    return std::string(buf) + std::string(tool_version());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace bresse
