#pragma once

#include <Eigen/Core>

namespace equibench {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Read-only view accepted by every estimator; binds to vectors, segments and
/// mapped buffers without a copy.
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

}  // namespace equibench
