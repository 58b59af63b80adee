#pragma once

// Collective dephasing of qubit and qutrit pairs, optionally with a local
// sigma_x drive on qubit 1 that is switched off at time T.
//
//   d rho/dt = -(i/2) Omega1 Theta(T - t) [sigma_x (x) I, rho]
//              + (gamma/2) (2 Jz rho Jz - Jz^2 rho - rho Jz^2)
//
// Jz = (sigma_z (x) I + I (x) sigma_z)/2 for qubits, j_z (x) I + I (x) j_z for
// qutrits. Superoperators act on column-stacked density matrices.

#include <cmath>
#include <cstddef>
#include <string>

#include "dephasim/error.hpp"
#include "dephasim/linalg.hpp"
#include "dephasim/state.hpp"

namespace dephasim {

/// Dense Liouvillian (or propagator) acting on vec(rho); `dim` is the
/// Hilbert-space dimension, the matrix is dim^2 x dim^2.
struct Superoperator {
  ComplexMatrix matrix;
  Dims dims;

  std::size_t dim() const noexcept { return dims.total(); }
};

/// Omega1/gamma ratio, decay rate and scaled action time gamma*T.
struct ModelParams {
  double omega_ratio = 0.0;
  double gamma = 1.0;
  double gamma_t = 0.0;

  double omega1() const noexcept { return omega_ratio * gamma; }
  double action_time() const noexcept { return gamma_t / gamma; }
};

inline void check(const ModelParams& params) {
  if (!(params.gamma > 0.0) || !std::isfinite(params.gamma))
    throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  if (!(params.gamma_t >= 0.0) || !std::isfinite(params.gamma_t))
    throw Error(ErrorCode::InvalidArgument, "gamma*T must be non-negative");
  if (!(params.omega_ratio >= 0.0) || !std::isfinite(params.omega_ratio))
    throw Error(ErrorCode::InvalidArgument, "Omega1/gamma must be non-negative");
}

/// Populations and the |10><01| coherence of a two-qubit X-form state.
struct StationaryXForm {
  double a = 0.0;  // <11|rho|11>
  double b = 0.0;  // <10|rho|10>
  double c = 0.0;  // <01|rho|01>
  double d = 0.0;  // <00|rho|00>
  Complex f{0.0, 0.0};  // <10|rho|01>
};

namespace detail {
inline void require_pair(const Dims& dims) {
  if (dims.first != dims.second || (dims.first != 2 && dims.first != 3))
    throw Error(ErrorCode::UnsupportedDimension,
                "collective dephasing needs a qubit or qutrit pair, got " + to_string(dims));
}

inline ComplexMatrix local_jz(std::size_t d) {
  if (d == 2) return 0.5 * pauli::z();
  ComplexMatrix jz = ComplexMatrix::Zero(3, 3);
  jz(0, 0) = 1.0;
  jz(2, 2) = -1.0;
  return jz;
}
}  // namespace detail

inline ComplexMatrix collective_jz(const Dims& dims) {
  detail::require_pair(dims);
  const ComplexMatrix jz = detail::local_jz(dims.first);
  const ComplexMatrix id = ComplexMatrix::Identity(jz.rows(), jz.cols());
  return tensor_product(jz, id) + tensor_product(id, jz);
}

/// Generator of the master equation; `drive_on` selects the t < T phase.
inline Superoperator build_liouvillian(const Dims& dims, const ModelParams& params,
                                       bool drive_on) {
  detail::require_pair(dims);
  check(params);
  if (drive_on && dims.first != 2)
    throw Error(ErrorCode::DriveNotSupported, "the local drive exists for qubit pairs only");

  const auto n = static_cast<Eigen::Index>(dims.total());
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix jz = collective_jz(dims);
  const ComplexMatrix jz2 = jz * jz;

  ComplexMatrix generator = 0.5 * params.gamma *
                            (2.0 * tensor_product(jz.transpose(), jz) - tensor_product(id, jz2) -
                             tensor_product(jz2.transpose(), id));
  if (drive_on && params.omega_ratio != 0.0) {
    const ComplexMatrix h = tensor_product(pauli::x(), pauli::identity());
    const ComplexMatrix commutator = tensor_product(id, h) - tensor_product(h.transpose(), id);
    generator += Complex(0.0, -0.5 * params.omega1()) * commutator;
  }
  return Superoperator{std::move(generator), dims};
}

inline ComplexMatrix propagator(const Superoperator& generator, double t) {
  return matrix_exponential(generator.matrix * t);
}

/// rho(t) = unvec(exp(L t) vec(rho0)).
inline DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& generator, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::InvalidArgument, "evolution time must be finite and non-negative");
  if (rho0.dims() != generator.dims)
    throw Error(ErrorCode::DimensionMismatch, "state dims " + to_string(rho0.dims()) +
                                                  " vs generator dims " +
                                                  to_string(generator.dims));
  if (t == 0.0) return rho0;
  const ComplexVector out = propagator(generator, t) * vectorize(rho0.matrix());
  return validate(unvectorize(out, static_cast<Eigen::Index>(generator.dim())), rho0.dims());
}

/// t -> infinity limit of drive-free dephasing: removes every coherence
/// between different eigenvalues of the collective Jz.
inline DensityMatrix dephasing_fixed_point(const DensityMatrix& rho) {
  const ComplexMatrix jz = collective_jz(rho.dims());
  ComplexMatrix out = rho.matrix();
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      if (jz(i, i).real() != jz(j, j).real()) out(i, j) = 0.0;
  return validate(out, rho.dims());
}

/// Drives for gamma*T with the given ratio, then takes the dephasing limit.
/// `driven` must be build_liouvillian(dims, params, true) for a qubit pair.
inline DensityMatrix stationary_state(const DensityMatrix& rho0, const Superoperator& driven,
                                      const ModelParams& params) {
  if (rho0.dims() != Dims{2, 2})
    throw Error(ErrorCode::UnsupportedDimension, "stationary_state is defined for qubit pairs");
  return dephasing_fixed_point(evolve(rho0, driven, params.action_time()));
}

inline DensityMatrix stationary_state(const DensityMatrix& rho0, const ModelParams& params) {
  return stationary_state(rho0, build_liouvillian(rho0.dims(), params, true), params);
}

inline constexpr double kXFormTolerance = 1e-8;

inline StationaryXForm extract_xform(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2})
    throw Error(ErrorCode::DimensionMismatch, "X-form extraction needs a two-qubit state");
  const ComplexMatrix& m = rho.matrix();
  double residual = 0.0;
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) {
      const bool kept = i == j || (i == 1 && j == 2) || (i == 2 && j == 1);
      if (!kept) residual = std::max(residual, std::abs(m(i, j)));
    }
  if (residual > kXFormTolerance)
    throw Error(ErrorCode::NotXForm, "largest element outside the X pattern is " +
                                         std::to_string(residual));
  return StationaryXForm{m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real(), m(1, 2)};
}

/// Embeds the five X-form parameters into a 4x4 matrix (no validation).
inline ComplexMatrix to_matrix(const StationaryXForm& x) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = x.a;
  m(1, 1) = x.b;
  m(2, 2) = x.c;
  m(3, 3) = x.d;
  m(1, 2) = x.f;
  m(2, 1) = std::conj(x.f);
  return m;
}

}  // namespace dephasim
