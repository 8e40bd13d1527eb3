#pragma once

#include <vector>

#include "equibench/types.hpp"

namespace equibench {

struct AceResult {
  double correlation = 0.0;    // |corr(theta(y), phi(x))| at the last iterate
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;   // correlation after each iteration
};

/// Maximal correlation by alternating conditional expectations with a
/// binned-mean smoother (ceil(sqrt(n)) equal-count bins per axis; tied values
/// share a bin). Non-convergence is reported through the flag, not thrown.
/// Requires n >= 20.
AceResult ace(VectorRef x, VectorRef y, int max_iter = 100, double tol = 1e-6);

}  // namespace equibench
