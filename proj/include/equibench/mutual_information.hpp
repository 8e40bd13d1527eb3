#pragma once

#include "equibench/types.hpp"

namespace equibench {

/// k-nearest-neighbour mutual information estimate in nats (neighbour-count
/// estimator, max-norm, strict marginal counts).
///
/// Both axes are copula-transformed to ranks before the neighbour search.
/// Ties are broken by the other coordinate's value, which acts as an
/// infinitesimal jitter that is deterministic and independent of the order
/// of the pairs. The estimate is therefore exactly invariant under strictly
/// increasing marginal maps, under joint permutation of the pairs and under
/// swapping x and y. Requires n > k + 1.
double mutual_information(VectorRef x, VectorRef y, int k = 6);

/// Binned mutual information divided by sqrt(H(x) H(y)), using ceil(sqrt(n))
/// equal-frequency bins per axis; in [0, 1].
double normalized_mutual_information(VectorRef x, VectorRef y);

}  // namespace equibench
