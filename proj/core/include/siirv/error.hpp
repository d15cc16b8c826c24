#pragma once

#include <stdexcept>
#include <string>

namespace siirv {

// Every failure raised by the library derives from Error so callers can
// catch the whole family in one place. The CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad inputs that violate a documented precondition.
struct InvalidInput : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct WindowOverflow : Error {
    using Error::Error;
};

struct AssumptionViolation : Error {
    using Error::Error;
};

struct DegenerateCone : Error {
    using Error::Error;
};

struct InfeasibleProjection : Error {
    using Error::Error;
};

struct GridOverflow : Error {
    using Error::Error;
};

struct BracketFailure : Error {
    using Error::Error;
};

struct BudgetExceeded : Error {
    using Error::Error;
};

}  // namespace siirv
