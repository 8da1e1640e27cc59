#pragma once

#include <doctest.h>

#include "matconvex/linalg.hpp"

namespace mc = matconvex;

inline double dist(const mc::HermitianMatrix& a, const mc::HermitianMatrix& b) {
  return (a - b).frobenius_norm();
}

inline double dist(const mc::CMatrix& a, const mc::CMatrix& b) { return (a - b).norm(); }
