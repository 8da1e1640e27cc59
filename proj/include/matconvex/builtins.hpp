#pragma once

#include <string>
#include <vector>

#include "matconvex/convexity.hpp"

namespace matconvex {

/// Known behaviour of a canned function on (0, inf), used as ground truth by
/// the detector tests.
struct KnownTruth {
  bool matrix_convex;
  bool matrix_monotone;
  bool scalar_convex;
  bool scalar_monotone;
};

struct BuiltinFunction {
  ScalarFunction function;
  KnownTruth truth;
};

/// Names: affine, x2, x3, x4, inv, sqrt, neglog, log, xlogx, exp.
const std::vector<std::string>& builtin_names();

/// Throws ValidationError for an unknown name.
BuiltinFunction builtin(const std::string& name);

}  // namespace matconvex
