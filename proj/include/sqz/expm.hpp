#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sqz/types.hpp"

namespace sqz {

using OperatorMatrix = Eigen::MatrixXcd;
using SparseOperator = Eigen::SparseMatrix<Complex>;
using Amplitudes = Eigen::VectorXcd;

namespace detail {

// Pade approximant degrees and the 1-norm bounds below which each one has
// backward error under unit roundoff (Higham, scaling and squaring).
inline constexpr std::array<int, 4> kPadeDegrees{3, 5, 7, 9};
inline constexpr std::array<double, 4> kPadeTheta{
    1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
    2.097847961257068e0};
inline constexpr double kTheta13 = 5.371920351148152e0;

inline const double* pade_coefficients(int degree) {
  static constexpr double b3[] = {120.0, 60.0, 12.0, 1.0};
  static constexpr double b5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr double b7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                  25200.0,    1512.0,    56.0,      1.0};
  static constexpr double b9[] = {17643225600.0, 8821612800.0, 2075673600.0,
                                  302702400.0,   30270240.0,   2162160.0,
                                  110880.0,      3960.0,       90.0,
                                  1.0};
  static constexpr double b13[] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  switch (degree) {
    case 3: return b3;
    case 5: return b5;
    case 7: return b7;
    case 9: return b9;
    default: return b13;
  }
}

inline double one_norm(const OperatorMatrix& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

// Low-degree approximant: U = A * sum b_odd A^{2k}, V = sum b_even A^{2k}.
inline OperatorMatrix pade_low(const OperatorMatrix& a, int degree) {
  const double* b = pade_coefficients(degree);
  const auto dim = a.rows();
  const OperatorMatrix id = OperatorMatrix::Identity(dim, dim);
  const OperatorMatrix a2 = a * a;
  OperatorMatrix power = id;
  OperatorMatrix u_inner = OperatorMatrix::Zero(dim, dim);
  OperatorMatrix v = OperatorMatrix::Zero(dim, dim);
  for (int k = 0; 2 * k <= degree; ++k) {
    if (k > 0) power = power * a2;
    v += b[2 * k] * power;
    if (2 * k + 1 <= degree) u_inner += b[2 * k + 1] * power;
  }
  const OperatorMatrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

inline OperatorMatrix pade13(const OperatorMatrix& a) {
  const double* b = pade_coefficients(13);
  const auto dim = a.rows();
  const OperatorMatrix id = OperatorMatrix::Identity(dim, dim);
  const OperatorMatrix a2 = a * a;
  const OperatorMatrix a4 = a2 * a2;
  const OperatorMatrix a6 = a4 * a2;
  OperatorMatrix tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const OperatorMatrix u =
      a * (a6 * tmp + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  const OperatorMatrix v = a6 * tmp + b[6] * a6 + b[4] * a4 + b[2] * a2 +
                           b[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace detail

/// exp(M) by scaling and squaring with a degree 3..13 Pade approximant.
///
/// The approximant degree and scaling are chosen from ||M||_1 so the
/// backward error is at the unit-roundoff level. When M is skew-Hermitian
/// the result is checked for unitarity and ConvergenceError is thrown if
/// ||U^H U - I||_F exceeds tol. Non-finite output is always an error.
inline OperatorMatrix matrix_exponential(const OperatorMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw InvalidInput("matrix_exponential requires a square matrix");
  }
  if (!(tol > 0.0)) {
    throw InvalidInput("matrix_exponential tolerance must be positive");
  }
  const auto dim = m.rows();
  if (dim == 0) return m;

  const double norm = detail::one_norm(m);
  OperatorMatrix result;
  bool done = false;
  for (std::size_t i = 0; i < detail::kPadeDegrees.size(); ++i) {
    if (norm <= detail::kPadeTheta[i]) {
      result = detail::pade_low(m, detail::kPadeDegrees[i]);
      done = true;
      break;
    }
  }
  if (!done) {
    int squarings = 0;
    if (norm > detail::kTheta13) {
      squarings = std::max(
          0, static_cast<int>(std::ceil(std::log2(norm / detail::kTheta13))));
    }
    result = detail::pade13(m / std::ldexp(1.0, squarings));
    for (int i = 0; i < squarings; ++i) result = result * result;
  }

  if (!result.allFinite()) {
    throw ConvergenceError("matrix_exponential produced non-finite entries",
                           std::numeric_limits<double>::infinity());
  }
  const double skew = (m + m.adjoint()).norm();
  if (skew <= 1e-14 * std::max(1.0, m.norm())) {
    const double residual =
        (result.adjoint() * result - OperatorMatrix::Identity(dim, dim)).norm();
    if (residual > tol) {
      throw ConvergenceError(
          "matrix_exponential: unitarity residual " + std::to_string(residual) +
              " exceeds tolerance",
          residual);
    }
  }
  return result;
}

/// exp(M) v without forming exp(M).
///
/// The interval is split into s steps with ||M||_1 / s <= 8 and each step
/// sums the Taylor series until the next term is below unit roundoff
/// relative to the partial sum. Throws ConvergenceError if a step needs
/// more than 80 terms.
inline Amplitudes apply_exponential(const SparseOperator& m, Amplitudes v) {
  if (m.rows() != m.cols() || m.cols() != v.size()) {
    throw InvalidInput("apply_exponential: dimension mismatch");
  }
  double norm = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    double col = 0.0;
    for (SparseOperator::InnerIterator it(m, k); it; ++it) col += std::abs(it.value());
    norm = std::max(norm, col);
  }
  if (norm == 0.0) return v;

  constexpr double step_norm = 8.0;
  constexpr int max_terms = 80;
  const int steps = std::max(1, static_cast<int>(std::ceil(norm / step_norm)));
  const SparseOperator scaled = m / static_cast<double>(steps);
  const double eps = std::numeric_limits<double>::epsilon();

  Amplitudes term(v.size());
  for (int s = 0; s < steps; ++s) {
    term = v;
    Amplitudes sum = v;
    int k = 1;
    for (; k <= max_terms; ++k) {
      term = scaled * term / static_cast<double>(k);
      sum += term;
      if (term.norm() <= 0.5 * eps * sum.norm()) break;
    }
    if (k > max_terms) {
      throw ConvergenceError("apply_exponential: Taylor series did not converge",
                             term.norm() / sum.norm());
    }
    v = std::move(sum);
  }
  if (!v.allFinite()) {
    throw ConvergenceError("apply_exponential produced non-finite entries",
                           std::numeric_limits<double>::infinity());
  }
  return v;
}

}  // namespace sqz
