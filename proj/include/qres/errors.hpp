#pragma once

#include <stdexcept>
#include <string>

namespace qres {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error { using Error::Error; };
struct IndexError : Error { using Error::Error; };
struct ConsistencyError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct NormalizationError : Error { using Error::Error; };
struct KindError : Error { using Error::Error; };
struct OrthogonalityError : Error { using Error::Error; };
struct SolverError : Error { using Error::Error; };
struct SymmetryError : Error { using Error::Error; };
struct ArgumentError : Error { using Error::Error; };
struct StateError : Error { using Error::Error; };
struct PoolError : Error { using Error::Error; };

}  // namespace qres
