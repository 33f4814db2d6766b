#pragma once

#include <stdexcept>
#include <string>

namespace stgfdm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct EmptySubdomain : Error { using Error::Error; };
struct InterfaceSamplingFailed : Error { using Error::Error; };
struct DegenerateGradient : Error { using Error::Error; };

// stencil
struct InsufficientNeighbors : Error { using Error::Error; };
struct SingularMomentMatrix : Error { using Error::Error; };

// assembly
struct MissingStar : Error { using Error::Error; };
struct InconsistentNormal : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };

// solver
struct SingularSystem : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };

// problems
struct UnknownExample : Error { using Error::Error; };
struct SideMismatch : Error { using Error::Error; };
struct NotOnInterface : Error { using Error::Error; };

// postprocess / cli
struct MissingValues : Error { using Error::Error; };
struct NonPositiveError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace stgfdm
