#pragma once

#include <stdexcept>
#include <string>

namespace coxinv {

// Base class for all toolkit errors. Subclasses correspond to the distinct
// failure modes callers are expected to handle.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedType : Error {
    using Error::Error;
};
struct RankOutOfRange : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct OrbitCapExceeded : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct FactorizationFailed : Error {
    using Error::Error;
};
struct NotInvariant : Error {
    using Error::Error;
};
struct SolveFailed : Error {
    using Error::Error;
};
struct OrderExceeded : Error {
    using Error::Error;
};
struct PointNotInField : Error {
    using Error::Error;
};
struct BasePointMismatch : Error {
    using Error::Error;
};
struct SingularSystem : Error {
    using Error::Error;
};
struct NotInImage : Error {
    using Error::Error;
};
struct SingularJacobian : Error {
    using Error::Error;
};
struct MissingDerivative : Error {
    using Error::Error;
};
struct InsufficientScales : Error {
    using Error::Error;
};
struct AmbiguousStratum : Error {
    using Error::Error;
};
struct DisconnectedGraph : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace coxinv
