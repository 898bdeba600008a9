#pragma once

#include <Eigen/Dense>

namespace curvkit {

/// Largest intrinsic dimension supported by the dense kernels.
inline constexpr int kMaxDim = 8;
/// Largest number of ambient coordinates (includes the extra coordinate of
/// the sphere and hyperboloid models).
inline constexpr int kMaxAmbient = 12;

// Fixed-capacity dynamic matrices: no heap traffic inside per-node loops.
template <typename Scalar>
using DimMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
template <typename Scalar>
using DimVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
template <typename Scalar>
using AmbVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxAmbient, 1>;
template <typename Scalar>
using AmbMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxAmbient, kMaxDim>;

using Matrixd = DimMatrix<double>;
using Vectord = DimVector<double>;
using AmbVectord = AmbVector<double>;
using AmbMatrixd = AmbMatrix<double>;

/// A point in a chart's parameter box.
using Point = Vectord;

}  // namespace curvkit
