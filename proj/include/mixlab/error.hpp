#pragma once

#include <stdexcept>
#include <string>

namespace mixlab {

// Every failure surfaced by the library derives from Error so callers (the CLI
// in particular) can map categories onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MIXLAB_ERROR(Name)                      \
    class Name : public Error {                 \
    public:                                     \
        using Error::Error;                     \
    }

MIXLAB_ERROR(ConfigError);      // bad grid/experiment parameters
MIXLAB_ERROR(ParseError);       // malformed config text
MIXLAB_ERROR(SamplingError);    // non-finite sample
MIXLAB_ERROR(ShapeError);       // operands on different grids
MIXLAB_ERROR(DomainError);      // argument outside an operator's domain
MIXLAB_ERROR(RangeError);       // value not attained / out of range
MIXLAB_ERROR(GeometryError);    // empty or degenerate interval
MIXLAB_ERROR(HeightError);      // CZ root average above the height
MIXLAB_ERROR(HypothesisError);  // theorem hypothesis violated
MIXLAB_ERROR(PreflightError);   // weight class check failed

#undef MIXLAB_ERROR

}  // namespace mixlab
