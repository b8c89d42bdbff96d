#pragma once

#include <stdexcept>
#include <string>

namespace phasecov {

// Coarse classification used by the CLI to pick an exit code.
enum class ErrorCategory { config, numerical };

class Error : public std::runtime_error {
public:
    Error(std::string kind, ErrorCategory category, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)), category_(category) {}

    const std::string& kind() const noexcept { return kind_; }
    ErrorCategory category() const noexcept { return category_; }

private:
    std::string kind_;
    ErrorCategory category_;
};

#define PHASECOV_DEFINE_ERROR(Name, category)                                        \
    class Name : public Error {                                                      \
    public:                                                                          \
        explicit Name(const std::string& message)                                    \
            : Error(#Name, ErrorCategory::category, message) {}                      \
    };

PHASECOV_DEFINE_ERROR(ValidationError, config)
PHASECOV_DEFINE_ERROR(DomainError, config)
PHASECOV_DEFINE_ERROR(SingularChannel, numerical)
PHASECOV_DEFINE_ERROR(NoNormalForm, numerical)
PHASECOV_DEFINE_ERROR(ConvergenceFailure, numerical)
PHASECOV_DEFINE_ERROR(QuadratureFailure, numerical)
PHASECOV_DEFINE_ERROR(NotInInterior, numerical)
PHASECOV_DEFINE_ERROR(DegenerateKernel, numerical)
PHASECOV_DEFINE_ERROR(PoleOnGrid, numerical)
PHASECOV_DEFINE_ERROR(UnsupportedInversion, numerical)

#undef PHASECOV_DEFINE_ERROR

} // namespace phasecov
