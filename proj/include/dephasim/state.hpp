#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "dephasim/error.hpp"
#include "dephasim/linalg.hpp"

namespace dephasim {

inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPositivityTolerance = -1e-9;
inline constexpr double kNormTolerance = 1e-10;

/// Local level labels in basis order: qubits |1>,|0>; qutrits |1>,|0>,|-1>.
/// Returns the 0-based position of `label` or -1 when it is not in the alphabet.
inline int level_index(int label, std::size_t local_dim) {
  if (local_dim == 2) return label == 1 ? 0 : label == 0 ? 1 : -1;
  if (local_dim == 3) return (label >= -1 && label <= 1) ? 1 - label : -1;
  return -1;
}

/// Composite index of |m1, m2>; labels must be valid for `dims`.
inline Eigen::Index basis_index(int m1, int m2, const Dims& dims) {
  const int i = level_index(m1, dims.first);
  const int j = level_index(m2, dims.second);
  if (i < 0 || j < 0)
    throw Error(ErrorCode::LabelError, "|" + std::to_string(m1) + "," + std::to_string(m2) +
                                           "> is not a basis state for dims " + to_string(dims));
  return static_cast<Eigen::Index>(i) * static_cast<Eigen::Index>(dims.second) + j;
}

/// Normalized pure state of a bipartite system.
class StateVector {
 public:
  /// Rescales `amplitudes` to unit norm; throws ZeroNorm if they all vanish.
  static StateVector normalized(ComplexVector amplitudes, Dims dims) {
    if (static_cast<std::size_t>(amplitudes.size()) != dims.total())
      throw Error(ErrorCode::DimensionMismatch,
                  "state vector of length " + std::to_string(amplitudes.size()) + " for dims " +
                      to_string(dims));
    const double norm = amplitudes.norm();
    if (!std::isfinite(norm))
      throw Error(ErrorCode::InvalidArgument, "amplitudes are not finite");
    if (!(norm > 1e-14)) throw Error(ErrorCode::ZeroNorm, "all amplitudes cancel");
    amplitudes /= norm;
    return StateVector(std::move(amplitudes), dims);
  }

  StateVector(ComplexVector amplitudes, Dims dims)
      : amplitudes_(std::move(amplitudes)), dims_(dims) {
    if (static_cast<std::size_t>(amplitudes_.size()) != dims_.total())
      throw Error(ErrorCode::DimensionMismatch, "state vector length does not match dims " +
                                                    to_string(dims_));
    const double deviation = std::abs(amplitudes_.squaredNorm() - 1.0);
    if (!(deviation <= kNormTolerance))
      throw Error(ErrorCode::InvalidArgument,
                  "state vector norm deviates from 1 by " + std::to_string(deviation));
  }

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  const Dims& dims() const noexcept { return dims_; }

 private:
  ComplexVector amplitudes_;
  Dims dims_;
};

/// Hermitian, unit-trace, positive semidefinite matrix with subsystem dims.
/// Instances only come out of validate() or pure_density().
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const Dims& dims() const noexcept { return dims_; }
  Complex operator()(Eigen::Index row, Eigen::Index col) const { return matrix_(row, col); }

  friend DensityMatrix validate(const ComplexMatrix& matrix, Dims dims);
  friend DensityMatrix pure_density(const StateVector& psi);

 private:
  DensityMatrix(ComplexMatrix matrix, Dims dims) : matrix_(std::move(matrix)), dims_(dims) {}

  ComplexMatrix matrix_;
  Dims dims_;
};

/// Checks every DensityMatrix invariant; the error names the violated one
/// and its magnitude.
inline DensityMatrix validate(const ComplexMatrix& matrix, Dims dims) {
  detail::require_bipartite(matrix, dims, "validate");
  if (!all_finite(matrix))
    throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");

  const double defect = hermiticity_defect(matrix);
  if (defect > kHermitianTolerance)
    throw Error(ErrorCode::NotHermitian, "||rho - rho^dagger||_max = " + std::to_string(defect));

  const Complex trace = matrix.trace();
  const double trace_error = std::abs(trace - Complex(1.0, 0.0));
  if (trace_error > kTraceTolerance)
    throw Error(ErrorCode::TraceNotOne, "trace = " + std::to_string(trace.real()) +
                                            " (|tr - 1| = " + std::to_string(trace_error) + ")");

  const double lowest = min_eigenvalue(matrix);
  if (lowest < kPositivityTolerance)
    throw Error(ErrorCode::NotPositive, "minimum eigenvalue " + std::to_string(lowest));

  return DensityMatrix(matrix, dims);
}

inline DensityMatrix pure_density(const StateVector& psi) {
  const ComplexVector& v = psi.amplitudes();
  return DensityMatrix(v * v.adjoint(), psi.dims());
}

inline double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

}  // namespace dephasim
