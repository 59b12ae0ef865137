#pragma once

#include <stdexcept>
#include <string>

namespace semithermo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define SEMITHERMO_DEFINE_ERROR(Name)              \
    class Name : public Error {                    \
    public:                                        \
        explicit Name(const std::string& what)     \
            : Error(std::string(#Name ": ") + what) \
        {}                                         \
    };

// complex-rational
SEMITHERMO_DEFINE_ERROR(NonConvergence)
SEMITHERMO_DEFINE_ERROR(DegenerateEquation)
// skew-product
SEMITHERMO_DEFINE_ERROR(DepthExceeded)
SEMITHERMO_DEFINE_ERROR(BasePointTooClose)
SEMITHERMO_DEFINE_ERROR(CriticalBranch)
// thermodynamics / multifractal
SEMITHERMO_DEFINE_ERROR(NoSignChange)
SEMITHERMO_DEFINE_ERROR(GridTooCoarse)
// geometry
SEMITHERMO_DEFINE_ERROR(NotPolynomial)
SEMITHERMO_DEFINE_ERROR(NoRepellingSeed)
SEMITHERMO_DEFINE_ERROR(ScaleRangeSaturated)
// measures
SEMITHERMO_DEFINE_ERROR(SeriesNotSummable)
// input handling
SEMITHERMO_DEFINE_ERROR(ParseError)
SEMITHERMO_DEFINE_ERROR(ValidationError)
SEMITHERMO_DEFINE_ERROR(PreconditionError)

#undef SEMITHERMO_DEFINE_ERROR

} // namespace semithermo
