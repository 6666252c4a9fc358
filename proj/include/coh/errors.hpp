#pragma once

#include <stdexcept>
#include <string>

namespace coh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitian : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct BadRank : Error { using Error::Error; };
struct NotPsd : Error { using Error::Error; };
struct NotCommensurate : Error { using Error::Error; };
struct SupportOverflow : Error { using Error::Error; };
struct PeriodMismatch : Error { using Error::Error; };
struct NotPeriodic : Error { using Error::Error; };
struct EnsemblePeriodViolation : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace coh
