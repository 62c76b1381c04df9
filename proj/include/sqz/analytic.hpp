#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "sqz/types.hpp"

namespace sqz {

/// Mean-photon-number bound ns together with the Fock excitation n.
///
/// ns may be non-integer; it bounds an expectation value.
struct EnergyBudget {
  double ns = 0.0;
  int n = 0;

  bool feasible() const noexcept { return n >= 0 && ns >= static_cast<double>(n); }

  void require_feasible() const {
    if (!std::isfinite(ns) || ns < 0.0 || n < 0) {
      throw InvalidInput("energy budget requires finite ns >= 0 and n >= 0");
    }
    if (!feasible()) {
      throw InfeasibleBudget("infeasible: n exceeds energy budget (n=" +
                             std::to_string(n) + ", ns=" + std::to_string(ns) + ")");
    }
  }
};

/// Optimal state parameters for a budget. The optimum is taken with real
/// alpha along X and squeeze phase pi, so mu_star <= 0.
struct OptimalSolution {
  double alpha_star = 0.0;
  double lambda_star = 1.0;
  double mu_star = 0.0;
  double rho_max = 0.0;
  double var_x_star = 0.5;
};

inline SqueezeParams squeeze_params(double r, double phi) {
  return SqueezeParams::from_polar(r, phi);
}

namespace detail {
inline void require_photon_number(int n) {
  if (n < 0) throw InvalidInput("photon number n must be >= 0, got " + std::to_string(n));
}
}  // namespace detail

/// Moments of D(alpha)|n>.
inline MomentSet coherent_number_moments(int n, Complex alpha) {
  detail::require_photon_number(n);
  const double sqrt2 = std::sqrt(2.0);
  MomentSet m;
  m.mean_n = n + std::norm(alpha);
  m.mean_x = sqrt2 * alpha.real();
  m.mean_p = sqrt2 * alpha.imag();
  m.var_x = 0.5 * (2.0 * n + 1.0);
  m.var_p = m.var_x;
  return m;
}

/// Moments of D(alpha) S(z)|n>.
inline MomentSet squeezed_number_moments(int n, Complex alpha, const SqueezeParams& z) {
  detail::require_photon_number(n);
  const double sqrt2 = std::sqrt(2.0);
  const double lambda = z.lambda();
  const Complex mu = z.mu();
  const double level = 2.0 * n + 1.0;
  MomentSet m;
  m.mean_n = lambda * lambda * n + std::norm(mu) * (n + 1.0) + std::norm(alpha);
  m.mean_x = sqrt2 * alpha.real();
  m.mean_p = sqrt2 * alpha.imag();
  m.var_x = 0.5 * std::norm(lambda + mu) * level;
  m.var_p = 0.5 * std::norm(lambda - mu) * level;
  return m;
}

/// rho = <X>^2 / (Delta X)^2.
inline double snr(const MomentSet& m) {
  if (!(m.var_x > 0.0)) {
    throw InvalidInput("snr requires var_x > 0, got " + std::to_string(m.var_x));
  }
  return m.mean_x * m.mean_x / m.var_x;
}

inline double snr_coherent_number(int n, Complex alpha) {
  detail::require_photon_number(n);
  const double re = alpha.real();
  return 4.0 * re * re / (2.0 * n + 1.0);
}

inline double snr_squeezed_number(int n, Complex alpha, const SqueezeParams& z) {
  detail::require_photon_number(n);
  const double signal = std::norm(alpha + std::conj(alpha));
  return signal / (std::norm(z.lambda() + z.mu()) * (2.0 * n + 1.0));
}

/// <X>^2 + (dX)^2 + <P>^2 + (dP)^2 - (2<N> + 1); zero for physical moments.
inline double energy_partition_residual(const MomentSet& m) {
  return m.mean_x * m.mean_x + m.var_x + m.mean_p * m.mean_p + m.var_p -
         (2.0 * m.mean_n + 1.0);
}

/// (dX)^2 (dP)^2 for D(alpha)|n> (no z) or D(alpha)S(z)|n>.
inline double uncertainty_product(int n, const std::optional<SqueezeParams>& z = std::nullopt) {
  detail::require_photon_number(n);
  const double level = 2.0 * n + 1.0;
  const double base = 0.25 * level * level;
  if (!z) return base;
  const double lambda = z->lambda();
  const Complex mu = z->mu();
  return base * std::norm(lambda * lambda - mu * mu);
}

/// Best displaced Fock state: alpha = sqrt(ns - n), no squeezing.
inline OptimalSolution optimal_coherent_number(const EnergyBudget& b) {
  b.require_feasible();
  const double level = 2.0 * b.n + 1.0;
  OptimalSolution s;
  s.alpha_star = std::sqrt(b.ns - b.n);
  s.lambda_star = 1.0;
  s.mu_star = 0.0;
  s.rho_max = 4.0 * (b.ns - b.n) / level;
  s.var_x_star = 0.5 * level;
  return s;
}

/// Best squeezed displaced Fock state under <N> = ns, <P> = 0.
///
/// rho_max = 4 (ns - n)(ns + 1 + n) / (2n + 1)^2, attained at
/// (dX)^2 = (2n + 1)^2 / (2 (2 ns + 1)).
inline OptimalSolution optimal_squeezed_number(const EnergyBudget& b) {
  b.require_feasible();
  const double ns = b.ns;
  const double n = b.n;
  const double level = 2.0 * n + 1.0;
  const double budget = 2.0 * ns + 1.0;
  const double scale = std::sqrt(budget * level);
  OptimalSolution s;
  s.alpha_star = std::sqrt((ns - n) * (ns + 1.0 + n) / budget);
  s.lambda_star = (ns + 1.0 + n) / scale;
  s.mu_star = (n - ns) / scale;
  s.rho_max = 4.0 * (ns - n) * (ns + 1.0 + n) / (level * level);
  s.var_x_star = level * level / (2.0 * budget);
  return s;
}

/// Optimal squeezed-number rho divided by the n = 0 optimum 4 ns (ns + 1).
inline double ratio_to_yuen(const EnergyBudget& b) {
  b.require_feasible();
  if (!(b.ns > 0.0)) {
    throw InvalidInput("ratio_to_yuen is undefined for ns = 0");
  }
  const double ns = b.ns;
  const double n = b.n;
  const double level = 2.0 * n + 1.0;
  return (ns - n) * (ns + 1.0 + n) / (ns * (ns + 1.0) * level * level);
}

}  // namespace sqz
