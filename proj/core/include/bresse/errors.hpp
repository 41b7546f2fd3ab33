#pragma once

#include <stdexcept>
#include <string>

namespace bresse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    /// Short machine-readable tag, e.g. "NonPositiveCoefficient".
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class NonPositiveCoefficient : public Error {
public:
    explicit NonPositiveCoefficient(std::string field)
        : Error("NonPositiveCoefficient", "coefficient '" + field + "' must be positive and finite"),
          field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

#define BRESSE_DEFINE_ERROR(Name)                                       \
    class Name : public Error {                                         \
    public:                                                             \
        explicit Name(const std::string& message) : Error(#Name, message) {} \
    }

BRESSE_DEFINE_ERROR(ConfigError);
BRESSE_DEFINE_ERROR(NonFiniteResult);
BRESSE_DEFINE_ERROR(EigenFailure);
BRESSE_DEFINE_ERROR(WrongKind);
BRESSE_DEFINE_ERROR(UnknownLemma);
BRESSE_DEFINE_ERROR(NoDecay);
BRESSE_DEFINE_ERROR(TailTooFat);
BRESSE_DEFINE_ERROR(BadAssignment);
BRESSE_DEFINE_ERROR(InsufficientSamples);
BRESSE_DEFINE_ERROR(NonPositiveNorm);

#undef BRESSE_DEFINE_ERROR

} // namespace bresse
