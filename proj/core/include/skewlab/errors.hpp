#pragma once

#include <stdexcept>
#include <string>

namespace skewlab {

// Base class for every typed failure raised by the lab.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual const char* kind() const { return "Error"; }
};

// The map is undefined on the circle x = 1/2.
struct SingularInput : Error {
    const char* kind() const override { return "SingularInput"; }
    using Error::Error;
};

// A forward orbit hit x = 1/2 at some intermediate step.
struct SingularOrbit : Error {
    const char* kind() const override { return "SingularOrbit"; }
    unsigned step;
    explicit SingularOrbit(unsigned step_)
        : Error("forward orbit hit x = 1/2 at step " + std::to_string(step_)), step(step_) {}
};

// An inverse-branch application would land on the singular line
// (bit 1 pulled from x = 0 targets x = 1/2).
struct SingularPreimage : Error {
    const char* kind() const override { return "SingularPreimage"; }
    unsigned suffix_index;
    explicit SingularPreimage(unsigned idx)
        : Error("inverse branch lands on x = 1/2 at suffix index " + std::to_string(idx)),
          suffix_index(idx) {}
};

// The dyadic precision budget cannot cover the requested iteration count.
struct PrecisionExhausted : Error {
    const char* kind() const override { return "PrecisionExhausted"; }
    using Error::Error;
};

// A preimage level set would exceed the configured cardinality cap.
struct CardinalityOverflow : Error {
    const char* kind() const override { return "CardinalityOverflow"; }
    using Error::Error;
};

struct OutsideDomain : Error {
    const char* kind() const override { return "OutsideDomain"; }
    using Error::Error;
};

struct AtAsymptote : Error {
    const char* kind() const override { return "AtAsymptote"; }
    using Error::Error;
};

// Adaptive quadrature could not reach its tolerance within the depth cap.
struct QuadratureFailure : Error {
    const char* kind() const override { return "QuadratureFailure"; }
    using Error::Error;
};

// A pulled arc touched the forbidden strip around x = 1/2.
struct StripViolation : Error {
    const char* kind() const override { return "StripViolation"; }
    unsigned step;
    explicit StripViolation(unsigned step_)
        : Error("arc intersects the singular strip at pull step " + std::to_string(step_)),
          step(step_) {}
};

struct NonMonotoneArc : Error {
    const char* kind() const override { return "NonMonotoneArc"; }
    using Error::Error;
};

struct InsufficientWraps : Error {
    const char* kind() const override { return "InsufficientWraps"; }
    using Error::Error;
};

struct DegenerateRectangle : Error {
    const char* kind() const override { return "DegenerateRectangle"; }
    using Error::Error;
};

// Dense-grid verification missed at some iterate even after refinement.
// Indicates an implementation bug, not a property of the map.
struct WitnessFailed : Error {
    const char* kind() const override { return "WitnessFailed"; }
    unsigned time;
    explicit WitnessFailed(unsigned time_)
        : Error("no grid point of A landed in B at iterate " + std::to_string(time_)),
          time(time_) {}
};

}  // namespace skewlab
