#pragma once

#include <stdexcept>
#include <string>

namespace painlax {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedRank : Error {
    using Error::Error;
};
struct UnsupportedIndex : Error {
    using Error::Error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct SingularTime : Error {
    using Error::Error;
};
struct ConstraintViolation : Error {
    using Error::Error;
};
struct GaugeSingularity : Error {
    using Error::Error;
};
struct MissingAux : Error {
    using Error::Error;
};
struct SchemaError : Error {
    using Error::Error;
};
struct StepUnderflow : Error {
    using Error::Error;
};

// Carries which reflection failed and the vanishing expression.
struct DenominatorVanishes : Error {
    int index;
    DenominatorVanishes(int i, const std::string& what)
        : Error("reflection r_" + std::to_string(i) + ": denominator vanishes (" + what + ")"),
          index(i) {}
};

// Integration stopped before t_end; diagnostic names the guarded quantity.
struct SingularityApproach : Error {
    double t_stop;
    SingularityApproach(double t, const std::string& what)
        : Error("singularity approach at t=" + std::to_string(t) + ": " + what), t_stop(t) {}
};

}  // namespace painlax
