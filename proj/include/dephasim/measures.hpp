#pragma once

// Entanglement and correlation functionals. All entropies are in bits.

#include <algorithm>
#include <cmath>

#include "dephasim/dephasing.hpp"
#include "dephasim/error.hpp"
#include "dephasim/linalg.hpp"
#include "dephasim/state.hpp"

namespace dephasim {

/// Eigenvalues below this are treated as exact zeros in entropies.
inline constexpr double kEntropyCutoff = 1e-12;
/// Margin applied to the strict 2x2-block inequalities of the qutrit test.
inline constexpr double kInequalityMargin = 1e-12;
/// A partial-transpose eigenvalue below -kNptTolerance certifies entanglement.
inline constexpr double kNptTolerance = 1e-10;

namespace detail {
inline void require_dims(const DensityMatrix& rho, Dims expected, const char* what) {
  if (rho.dims() != expected)
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " needs dims " +
                                                  to_string(expected) + ", got " +
                                                  to_string(rho.dims()));
}

inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const Eigensystem es = hermitian_eigensystem(m);
  RealVector roots(es.values.size());
  for (Eigen::Index k = 0; k < roots.size(); ++k) roots[k] = std::sqrt(std::max(es.values[k], 0.0));
  return es.vectors * roots.asDiagonal() * es.vectors.adjoint();
}

inline double xlog2x(double x) { return x <= kEntropyCutoff ? 0.0 : x * std::log2(x); }
}  // namespace detail

/// Wootters concurrence of a two-qubit state.
///
/// The lambda_i (square roots of the spectrum of rho * rho~, with
/// rho~ = (sy (x) sy) rho* (sy (x) sy)) are obtained as the singular values of
/// sqrt(rho) * sqrt(rho~); those are the eigenvalues of the Hermitian
/// sqrt(sqrt(rho) rho~ sqrt(rho)), without taking square roots of
/// rounding-level eigenvalues.
inline double concurrence(const DensityMatrix& rho) {
  detail::require_dims(rho, Dims{2, 2}, "concurrence");
  const ComplexMatrix flip = tensor_product(pauli::y(), pauli::y());
  const ComplexMatrix root = detail::psd_sqrt(rho.matrix());
  const ComplexMatrix root_flipped = flip * root.conjugate() * flip;
  const Eigen::JacobiSVD<ComplexMatrix> svd(root * root_flipped);
  const RealVector& lambda = svd.singularValues();  // descending
  const double c = lambda[0] - lambda[1] - lambda[2] - lambda[3];
  return std::clamp(c, 0.0, 1.0);
}

/// C_s = 2 max(0, |f| - sqrt(a d)).
inline double concurrence_xform(const StationaryXForm& x) {
  return 2.0 * std::max(0.0, std::abs(x.f) - std::sqrt(std::max(x.a * x.d, 0.0)));
}

inline double entropy_of_spectrum(const RealVector& p) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) s -= detail::xlog2x(p[k]);
  return s;
}

inline double von_neumann_entropy(const ComplexMatrix& rho) {
  return entropy_of_spectrum(hermitian_eigenvalues(rho));
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(rho.matrix());
}

/// S(Tr_2 rho) + S(Tr_1 rho) - S(rho).
inline double mutual_information(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  const double value = von_neumann_entropy(partial_trace(m, Subsystem::first, rho.dims())) +
                       von_neumann_entropy(partial_trace(m, Subsystem::second, rho.dims())) -
                       von_neumann_entropy(m);
  return (value < 0.0 && value > -1e-10) ? 0.0 : value;
}

/// Closed-form mutual information of an X-form state.
inline double mutual_information_xform(const StationaryXForm& x) {
  using detail::xlog2x;
  const double f2 = std::norm(x.f);
  const double root = std::sqrt((x.b - x.c) * (x.b - x.c) + 4.0 * f2);
  const double beta_plus = 0.5 * (x.b + x.c + root);
  const double beta_minus = 0.5 * (x.b + x.c - root);
  const double value = -xlog2x(x.a + x.b) - xlog2x(x.c + x.d) - xlog2x(x.a + x.c) -
                       xlog2x(x.b + x.d) + xlog2x(x.a) + xlog2x(x.d) + xlog2x(beta_plus) +
                       xlog2x(beta_minus);
  return (value < 0.0 && value > -1e-10) ? 0.0 : value;
}

inline double min_pt_eigenvalue(const DensityMatrix& rho, Subsystem sub = Subsystem::second) {
  return min_eigenvalue(partial_transpose(rho.matrix(), sub, rho.dims()));
}

// ---------------------------------------------------------------------------
// Two-qutrit sufficient condition.
//
// For states that are block diagonal in the collective Jz (the dephasing
// fixed points) the partial transpose splits into the 3x3 block on
// |1,1>,|0,0>,|-1,-1>, the 2x2 blocks {|1,0>,|0,-1>} and {|0,1>,|-1,0>},
// and two non-negative singletons. The cubic
//     x^3 - xi x^2 + zeta x + eta
// is the characteristic polynomial of the 3x3 block; the two inequalities
// are the negative-determinant conditions of the 2x2 blocks.

struct CubicCoefficients {
  double xi = 0.0;
  double zeta = 0.0;
  double eta = 0.0;
  /// Sum of squared populations, as the coefficient is sometimes quoted.
  double xi_squared_form = 0.0;

  double evaluate(double x) const { return ((x - xi) * x + zeta) * x + eta; }
};

struct CriterionReport {
  double xi = 0.0;
  double zeta = 0.0;
  double eta = 0.0;
  double xi_squared_form = 0.0;
  double block_min_eigenvalue = 0.0;
  bool cubic_has_negative_root = false;
  bool squared_form_has_negative_root = false;
  bool ineq14 = false;
  bool ineq15 = false;
  bool sufficient_entangled = false;
  double min_pt_eigenvalue = 0.0;
};

namespace detail {
// rho_{i,j;k,l} = <i,j|rho|k,l> with qutrit labels in {1, 0, -1}.
inline Complex element(const DensityMatrix& rho, int i, int j, int k, int l) {
  return rho(basis_index(i, j, rho.dims()), basis_index(k, l, rho.dims()));
}
}  // namespace detail

/// Partial transpose (second qutrit) restricted to |1,1>,|0,0>,|-1,-1>.
inline ComplexMatrix qutrit_pt_central_block(const DensityMatrix& rho) {
  detail::require_dims(rho, Dims{3, 3}, "qutrit_pt_central_block");
  static constexpr int levels[3] = {1, 0, -1};
  ComplexMatrix block(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) {
      const int i = levels[r];
      const int k = levels[s];
      // <i,i|rho^T2|k,k> = <i,k|rho|k,i>
      block(r, s) = detail::element(rho, i, k, k, i);
    }
  return block;
}

inline CubicCoefficients qutrit_cubic_coefficients(const DensityMatrix& rho) {
  detail::require_dims(rho, Dims{3, 3}, "qutrit_cubic_coefficients");
  using detail::element;
  const double p_plus = element(rho, 1, 1, 1, 1).real();
  const double p_zero = element(rho, 0, 0, 0, 0).real();
  const double p_minus = element(rho, -1, -1, -1, -1).real();
  const Complex r_0m = element(rho, 0, -1, -1, 0);
  const Complex r_10 = element(rho, 1, 0, 0, 1);
  const Complex r_1m = element(rho, 1, -1, -1, 1);

  CubicCoefficients out;
  out.xi = p_plus + p_zero + p_minus;
  out.xi_squared_form = p_plus * p_plus + p_zero * p_zero + p_minus * p_minus;
  out.zeta = p_plus * p_zero + p_plus * p_minus + p_zero * p_minus - std::norm(r_0m) -
             std::norm(r_10) - std::norm(r_1m);
  const Complex triple = r_1m * std::conj(r_0m) * std::conj(r_10);
  out.eta = -p_plus * p_zero * p_minus + p_plus * std::norm(r_0m) + p_minus * std::norm(r_10) +
            p_zero * std::norm(r_1m) - 2.0 * triple.real();
  return out;
}

/// Whether x^3 - xi2 x^2 + zeta x + eta has a real root below -tolerance.
inline bool cubic_has_negative_real_root(double xi2, double zeta, double eta,
                                         double tolerance = kNptTolerance) {
  Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
  companion(0, 0) = xi2;
  companion(0, 1) = -zeta;
  companion(0, 2) = -eta;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  const Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
  const double scale = 1.0 + std::abs(xi2) + std::abs(zeta) + std::abs(eta);
  for (int k = 0; k < 3; ++k) {
    const std::complex<double> root = solver.eigenvalues()[k];
    if (std::abs(root.imag()) <= 1e-9 * scale && root.real() < -tolerance) return true;
  }
  return false;
}

inline CriterionReport qutrit_sufficient_entangled(const DensityMatrix& rho) {
  detail::require_dims(rho, Dims{3, 3}, "qutrit_sufficient_entangled");
  using detail::element;
  const CubicCoefficients cubic = qutrit_cubic_coefficients(rho);

  CriterionReport report;
  report.xi = cubic.xi;
  report.zeta = cubic.zeta;
  report.eta = cubic.eta;
  report.xi_squared_form = cubic.xi_squared_form;
  report.block_min_eigenvalue = min_eigenvalue(qutrit_pt_central_block(rho));
  report.cubic_has_negative_root = report.block_min_eigenvalue < -kNptTolerance;
  report.squared_form_has_negative_root =
      cubic_has_negative_real_root(cubic.xi_squared_form, cubic.zeta, cubic.eta);

  report.ineq14 = std::norm(element(rho, 1, -1, 0, 0)) >
                  element(rho, 1, 0, 1, 0).real() * element(rho, 0, -1, 0, -1).real() +
                      kInequalityMargin;
  report.ineq15 = std::norm(element(rho, 0, 0, -1, 1)) >
                  element(rho, 0, 1, 0, 1).real() * element(rho, -1, 0, -1, 0).real() +
                      kInequalityMargin;
  report.sufficient_entangled = report.cubic_has_negative_root || report.ineq14 || report.ineq15;
  report.min_pt_eigenvalue = min_pt_eigenvalue(rho);
  return report;
}

}  // namespace dephasim
