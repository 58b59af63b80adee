#pragma once

// Dense complex linear algebra for two-party systems of dimension <= 9
// (superoperators up to 81x81).
//
// Basis convention: subsystem 1 is the slow (leftmost) index, so the
// composite index of |i, j> is i * d2 + j.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dephasim/error.hpp"

namespace dephasim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Absolute max-norm tolerance on ||h - h^dagger|| for Hermitian input.
inline constexpr double kHermitianTolerance = 1e-10;

/// Local dimensions (d1, d2) of a bipartite system.
struct Dims {
  std::size_t first = 2;
  std::size_t second = 2;

  constexpr std::size_t total() const noexcept { return first * second; }
  friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

enum class Subsystem { first, second };

inline std::string to_string(const Dims& dims) {
  return "(" + std::to_string(dims.first) + "," + std::to_string(dims.second) + ")";
}

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const Complex z = m.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

inline double hermiticity_defect(const ComplexMatrix& h) {
  return max_abs(h - h.adjoint());
}

inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct Eigensystem {
  RealVector values;     // descending
  ComplexMatrix vectors;  // column k belongs to values[k]
};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted descending.
/// Throws NonHermitian when ||h - h^dagger||_max exceeds 1e-10.
inline Eigensystem hermitian_eigensystem(const ComplexMatrix& h) {
  if (h.rows() != h.cols())
    throw Error(ErrorCode::DimensionMismatch, "eigensystem of a non-square matrix");
  const double defect = hermiticity_defect(h);
  if (defect > kHermitianTolerance)
    throw Error(ErrorCode::NonHermitian, "||h - h^dagger||_max = " + std::to_string(defect));

  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  const Eigen::Index n = h.rows();
  Eigensystem out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()[n - 1 - k];
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
  return hermitian_eigensystem(h).values;
}

inline double min_eigenvalue(const ComplexMatrix& h) {
  const RealVector values = hermitian_eigenvalues(h);
  return values[values.size() - 1];
}

inline double one_norm(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().colwise().sum().maxCoeff();
}

/// exp(m) by scaling and squaring with the diagonal [13/13] Pade approximant.
inline ComplexMatrix matrix_exponential(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "exponential of a non-square matrix");
  const Eigen::Index n = m.rows();

  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm = one_norm(m);
  if (norm == 0.0) return ComplexMatrix::Identity(n, n);
  int squarings = 0;
  if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));

  const ComplexMatrix a = m / std::ldexp(1.0, squarings);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;

  const ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                                b[5] * a4 + b[3] * a2 + b[1] * id;
  const ComplexMatrix u = a * u_inner;
  const ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                          b[2] * a2 + b[0] * id;

  ComplexMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

namespace detail {
inline void require_bipartite(const ComplexMatrix& rho, const Dims& dims, const char* what) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  if (rho.rows() != n || rho.cols() != n)
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": matrix is " + std::to_string(rho.rows()) + "x" +
                    std::to_string(rho.cols()) + ", dims " + to_string(dims));
}
}  // namespace detail

/// Reduced matrix on subsystem `keep`, tracing out the other one.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep, const Dims& dims) {
  detail::require_bipartite(rho, dims, "partial_trace");
  const auto d1 = static_cast<Eigen::Index>(dims.first);
  const auto d2 = static_cast<Eigen::Index>(dims.second);
  if (keep == Subsystem::first) {
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (Eigen::Index i = 0; i < d1; ++i)
      for (Eigen::Index k = 0; k < d1; ++k)
        for (Eigen::Index j = 0; j < d2; ++j) out(i, k) += rho(i * d2 + j, k * d2 + j);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (Eigen::Index j = 0; j < d2; ++j)
    for (Eigen::Index l = 0; l < d2; ++l)
      for (Eigen::Index i = 0; i < d1; ++i) out(j, l) += rho(i * d2 + j, i * d2 + l);
  return out;
}

/// Transpose on subsystem `sub` only: <i,j|out|k,l> = <i,l|rho|k,j> for the second.
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, Subsystem sub, const Dims& dims) {
  detail::require_bipartite(rho, dims, "partial_transpose");
  const auto d1 = static_cast<Eigen::Index>(dims.first);
  const auto d2 = static_cast<Eigen::Index>(dims.second);
  ComplexMatrix out(rho.rows(), rho.cols());
  for (Eigen::Index i = 0; i < d1; ++i)
    for (Eigen::Index j = 0; j < d2; ++j)
      for (Eigen::Index k = 0; k < d1; ++k)
        for (Eigen::Index l = 0; l < d2; ++l) {
          const Complex value = sub == Subsystem::second ? rho(i * d2 + l, k * d2 + j)
                                                         : rho(k * d2 + j, i * d2 + l);
          out(i * d2 + j, k * d2 + l) = value;
        }
  return out;
}

/// Column-stacking vectorization; vec(A X B) = (B^T (x) A) vec(X).
inline ComplexVector vectorize(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

inline ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim)
    throw Error(ErrorCode::DimensionMismatch, "unvectorize: length " + std::to_string(v.size()) +
                                                  " is not " + std::to_string(dim) + "^2");
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

namespace pauli {
// Ordered as |1>, |0>; sigma_z = |1><1| - |0><0|.
inline ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }
inline ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
inline ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}
inline ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

}  // namespace dephasim
