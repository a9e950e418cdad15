#pragma once

#include <stdexcept>
#include <string>

namespace posapprox {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    /// Stable machine-readable tag, used in JSON diagnostics.
    virtual const char* kind() const noexcept { return "Error"; }
};

#define POSAPPROX_DEFINE_ERROR(Name)                                         \
    class Name : public error {                                              \
    public:                                                                  \
        using error::error;                                                  \
        const char* kind() const noexcept override { return #Name; }         \
    };

// Refinement reached the precision cap without deciding a comparison. For
// algebraic inputs this means an exact equality, i.e. 1, a1, a2 are
// rationally dependent.
POSAPPROX_DEFINE_ERROR(PrecisionExhausted)
POSAPPROX_DEFINE_ERROR(IntervalTooWide)
POSAPPROX_DEFINE_ERROR(ParseError)
POSAPPROX_DEFINE_ERROR(InvalidArgument)
POSAPPROX_DEFINE_ERROR(SearchFailed)
POSAPPROX_DEFINE_ERROR(PreconditionNotCertified)
POSAPPROX_DEFINE_ERROR(DetConditionFailed)
POSAPPROX_DEFINE_ERROR(Inapplicable)
POSAPPROX_DEFINE_ERROR(CertificateFailed)
POSAPPROX_DEFINE_ERROR(NoApplicableNu)
POSAPPROX_DEFINE_ERROR(UsageError)

#undef POSAPPROX_DEFINE_ERROR

} // namespace posapprox
