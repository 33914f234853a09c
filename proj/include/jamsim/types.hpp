#pragma once

#include <Eigen/Dense>

#include <complex>

namespace jamsim {

using Index = Eigen::Index;

template <class Scalar = double>
using Complex = std::complex<Scalar>;

template <class Scalar = double>
using ComplexMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar = double>
using ComplexVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <class Scalar = double>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar = double>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Power conversion used at the configuration boundary; all internal math is
/// linear scale.
template <class Scalar>
constexpr Scalar db_to_linear(Scalar db) {
  return std::pow(Scalar(10), db / Scalar(10));
}

}  // namespace jamsim
