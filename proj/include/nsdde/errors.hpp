#pragma once

#include <stdexcept>
#include <string>

namespace nsdde {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Grid / resolution errors.
struct GridMismatch : Error { using Error::Error; };
struct BadStep : Error { using Error::Error; };
struct ResolutionMismatch : Error { using Error::Error; };

// Problem definition errors.
struct OutOfSegment : Error { using Error::Error; };
struct UnknownProblem : Error { using Error::Error; };

// Numerical input errors.
struct NonFiniteInput : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };

// Experiment errors.
struct DegenerateFit : Error { using Error::Error; };
struct InsufficientPaths : Error { using Error::Error; };

// Configuration errors (CLI exit code 2).
struct ConstraintViolation : Error { using Error::Error; };

}  // namespace nsdde
