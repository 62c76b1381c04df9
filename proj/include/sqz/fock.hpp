#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sqz/expm.hpp"
#include "sqz/types.hpp"

namespace sqz {

/// Number of retained Fock levels; indices run over 0..dim-1.
class FockCutoff {
 public:
  explicit FockCutoff(int dim) : dim_(dim) {
    if (dim < 1) {
      throw InvalidInput("Fock cutoff must be >= 1, got " + std::to_string(dim));
    }
  }
  int dim() const noexcept { return dim_; }
  friend bool operator==(FockCutoff, FockCutoff) = default;

 private:
  int dim_;
};

/// Truncated Fock-basis state.
///
/// `leakage` is the probability mass in the top 10% of retained levels.
/// `norm_bound` is the largest |1 - <psi|psi>| the constructing operation
/// allows for this state.
struct StateVector {
  Amplitudes amplitudes;
  double leakage = 0.0;
  double norm_bound = 1e-12;

  int dim() const noexcept { return static_cast<int>(amplitudes.size()); }
  double norm_squared() const { return amplitudes.squaredNorm(); }

  static StateVector basis(int n, FockCutoff dim) {
    if (n < 0 || n >= dim.dim()) {
      throw InvalidInput("Fock index " + std::to_string(n) +
                         " outside cutoff " + std::to_string(dim.dim()));
    }
    StateVector s;
    s.amplitudes = Amplitudes::Zero(dim.dim());
    s.amplitudes(n) = 1.0;
    s.leakage = tail_mass(s.amplitudes);
    return s;
  }

  static double tail_mass(const Amplitudes& amps) {
    const auto dim = amps.size();
    const auto count = std::max<Eigen::Index>(1, (dim + 9) / 10);
    return amps.tail(count).squaredNorm();
  }
};

namespace detail {

inline SparseOperator sparse_lowering(int dim) {
  SparseOperator a(dim, dim);
  a.reserve(Eigen::VectorXi::Constant(dim, 1));
  for (int m = 1; m < dim; ++m) a.insert(m - 1, m) = std::sqrt(static_cast<double>(m));
  a.makeCompressed();
  return a;
}

inline SparseOperator displacement_generator(Complex alpha, int dim) {
  const SparseOperator a = sparse_lowering(dim);
  const SparseOperator ad = SparseOperator(a.adjoint());
  return SparseOperator(alpha * ad - std::conj(alpha) * a);
}

inline SparseOperator squeeze_generator(const SqueezeParams& z, int dim) {
  const SparseOperator a = sparse_lowering(dim);
  const SparseOperator a2 = a * a;
  const SparseOperator ad2 = SparseOperator(a2.adjoint());
  const Complex zc = z.z();
  return SparseOperator(0.5 * (zc * ad2 - std::conj(zc) * a2));
}

inline Complex expectation(const SparseOperator& op, const Amplitudes& psi) {
  return psi.dot(op * psi);
}

// D(alpha) S(z) |n> at the given dimension, no leakage or norm checks.
inline StateVector build_state_unchecked(int n, Complex alpha,
                                         const SqueezeParams& z, int dim) {
  Amplitudes psi = Amplitudes::Zero(dim);
  psi(n) = 1.0;
  if (z.r() != 0.0) psi = apply_exponential(squeeze_generator(z, dim), std::move(psi));
  if (alpha != Complex{}) {
    psi = apply_exponential(displacement_generator(alpha, dim), std::move(psi));
  }
  StateVector s;
  s.leakage = StateVector::tail_mass(psi);
  s.amplitudes = std::move(psi);
  return s;
}

}  // namespace detail

/// Lowering operator A (A[m-1, m] = sqrt(m)) and its adjoint.
inline std::pair<OperatorMatrix, OperatorMatrix> ladder_matrices(FockCutoff dim) {
  const OperatorMatrix a = OperatorMatrix(detail::sparse_lowering(dim.dim()));
  OperatorMatrix ad = a.adjoint();
  return {a, std::move(ad)};
}

/// X = (A + A^H)/sqrt(2), P = (A - A^H)/(i sqrt(2)).
inline std::pair<OperatorMatrix, OperatorMatrix> quadrature_matrices(FockCutoff dim) {
  const auto [a, ad] = ladder_matrices(dim);
  const double s = 1.0 / std::sqrt(2.0);
  const Complex minus_i{0.0, -1.0};
  OperatorMatrix x = s * (a + ad);
  OperatorMatrix p = (minus_i * s) * (a - ad);
  return {std::move(x), std::move(p)};
}

/// Truncated D(alpha) = exp(alpha A^H - alpha* A).
inline OperatorMatrix displacement_operator(Complex alpha, FockCutoff dim, double tol) {
  const OperatorMatrix gen = OperatorMatrix(detail::displacement_generator(alpha, dim.dim()));
  return matrix_exponential(gen, tol);
}

/// Truncated S(z) = exp[(z A^H^2 - z* A^2)/2].
inline OperatorMatrix squeeze_operator(const SqueezeParams& z, FockCutoff dim, double tol) {
  const OperatorMatrix gen = OperatorMatrix(detail::squeeze_generator(z, dim.dim()));
  return matrix_exponential(gen, tol);
}

/// D(alpha) S(z) |n>: squeeze first, then displace.
///
/// Throws InvalidInput when n >= dim and CutoffTooSmall when the tail
/// mass or the norm defect exceeds tol.
inline StateVector build_state(int n, Complex alpha, const SqueezeParams& z,
                               FockCutoff dim, double tol) {
  if (n < 0 || n >= dim.dim()) {
    throw InvalidInput("photon number n=" + std::to_string(n) +
                       " must satisfy 0 <= n < dim=" + std::to_string(dim.dim()));
  }
  if (!(tol > 0.0)) throw InvalidInput("build_state tolerance must be positive");
  StateVector s = detail::build_state_unchecked(n, alpha, z, dim.dim());
  s.norm_bound = tol;
  const double defect = std::abs(1.0 - s.norm_squared());
  if (s.leakage > tol || defect > tol) {
    throw CutoffTooSmall("cutoff " + std::to_string(dim.dim()) +
                             " too small: tail mass " + std::to_string(s.leakage),
                         s.leakage);
  }
  return s;
}

/// Moments as quadratic forms of the truncated N, X, X^2, P, P^2 matrices.
inline MomentSet moments_numeric(const StateVector& state) {
  const double defect = std::abs(1.0 - state.norm_squared());
  if (defect > state.norm_bound) {
    throw InvalidInput("state norm defect " + std::to_string(defect) +
                       " exceeds its declared bound");
  }
  const int dim = state.dim();
  const SparseOperator a = detail::sparse_lowering(dim);
  const SparseOperator ad = SparseOperator(a.adjoint());
  const double s = 1.0 / std::sqrt(2.0);
  const SparseOperator x = SparseOperator(s * (a + ad));
  const SparseOperator p = SparseOperator(Complex{0.0, -s} * (a - ad));
  const SparseOperator n_op = ad * a;
  const SparseOperator x2 = x * x;
  const SparseOperator p2 = p * p;

  const Amplitudes& psi = state.amplitudes;
  MomentSet m;
  m.mean_n = detail::expectation(n_op, psi).real();
  m.mean_x = detail::expectation(x, psi).real();
  m.mean_p = detail::expectation(p, psi).real();
  m.var_x = detail::expectation(x2, psi).real() - m.mean_x * m.mean_x;
  m.var_p = detail::expectation(p2, psi).real() - m.mean_p * m.mean_p;
  return m;
}

inline constexpr int kCutoffFloor = 8;
inline constexpr int kCutoffCeiling = 1024;

/// Smallest power-of-two multiple of the floor that passes the doubling
/// test: moments at dim and 2*dim differ by less than eps in every
/// component and the tail mass at dim is at most eps.
///
/// Throws CutoffTooSmall, carrying the last tail mass, when 2*dim would
/// exceed `ceiling`.
inline FockCutoff choose_cutoff(int n, Complex alpha, const SqueezeParams& z,
                                double eps, int ceiling = kCutoffCeiling) {
  if (!(eps > 0.0)) throw InvalidInput("choose_cutoff eps must be positive");
  if (n < 0) throw InvalidInput("photon number must be >= 0");
  int dim = kCutoffFloor;
  while (dim <= n) dim *= 2;

  double leakage = 1.0;
  if (2 * dim > ceiling) {
    throw CutoffTooSmall("cutoff ceiling " + std::to_string(ceiling) +
                             " leaves no room for the doubling test",
                         leakage);
  }
  StateVector small = detail::build_state_unchecked(n, alpha, z, dim);
  small.norm_bound = 1.0;
  MomentSet small_m = moments_numeric(small);
  while (2 * dim <= ceiling) {
    StateVector big = detail::build_state_unchecked(n, alpha, z, 2 * dim);
    big.norm_bound = 1.0;
    const MomentSet big_m = moments_numeric(big);
    leakage = small.leakage;
    if (leakage <= eps && max_deviation(small_m, big_m) < eps) {
      return FockCutoff(dim);
    }
    dim *= 2;
    small = std::move(big);
    small_m = big_m;
  }
  throw CutoffTooSmall("no cutoff up to " + std::to_string(ceiling) +
                           " passes the doubling test; last tail mass " +
                           std::to_string(leakage),
                       leakage);
}

}  // namespace sqz
