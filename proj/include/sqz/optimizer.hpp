#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sqz/analytic.hpp"
#include "sqz/types.hpp"

namespace sqz {

struct SearchConfig {
  int grid_points = 201;
  /// Maximum golden-section iterations after the grid scan.
  int refine_rounds = 200;
  /// Target width of the final bracket.
  double tol = 1e-10;
  /// Squeeze-magnitude search box for numeric_optimum_search; NaN selects
  /// 1 + ln(2 ns + 2).
  double r_max = std::numeric_limits<double>::quiet_NaN();

  void validate() const {
    if (grid_points < 3) throw InvalidInput("grid_points must be >= 3");
    if (refine_rounds < 0) throw InvalidInput("refine_rounds must be >= 0");
    if (!(tol > 0.0)) throw InvalidInput("search tol must be positive");
    if (!std::isnan(r_max) && !(r_max > 0.0)) throw InvalidInput("r_max must be positive");
  }
};

struct SearchResult {
  OptimalSolution solution;
  int objective_evals = 0;
  bool converged = false;
  /// Location of the optimum in the searched coordinate (var_x for the
  /// reduced problem, r for the direct search).
  double argmax = 0.0;
  double bracket_width = 0.0;
};

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
  double width = 0.0;
  int evals = 0;
};

/// Golden-section maximization of a unimodal f on [lo, hi].
///
/// Ties move the bracket toward lo, so plateaus resolve to the smallest x.
template <typename F>
GoldenResult golden_section_maximize(F&& f, double lo, double hi, double tol, int max_rounds) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  for (int i = 0; i < max_rounds && hi - lo > tol; ++i) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
    ++evals;
  }
  GoldenResult out;
  out.width = hi - lo;
  out.evals = evals;
  if (fc >= fd) {
    out.x = c;
    out.value = fc;
  } else {
    out.x = d;
    out.value = fd;
  }
  return out;
}

/// rho as a function of (dX)^2 alone after fixing <N> = ns, <P> = 0 and
/// saturating (dX)^2 (dP)^2 = (n + 1/2)^2.
inline double reduced_objective(double var_x, const EnergyBudget& b) {
  if (!(var_x > 0.0)) {
    throw InvalidInput("reduced_objective requires var_x > 0");
  }
  const double half_level = b.n + 0.5;
  return (2.0 * b.ns + 1.0) / var_x - 1.0 - half_level * half_level / (var_x * var_x);
}

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  }
  xs.back() = hi;
  return xs;
}

// First index of the maximum; -inf entries never win over finite ones.
inline std::size_t argmax_first(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

// Phase-pi squeezed state with real alpha fixed by <N> = ns.
inline double alpha_squared_at(double r, const EnergyBudget& b) {
  const double c = std::cosh(r);
  const double s = std::sinh(r);
  return b.ns - c * c * b.n - s * s * (b.n + 1.0);
}

inline OptimalSolution solution_at_r(double r, double alpha_sq, const EnergyBudget& b) {
  OptimalSolution s;
  s.alpha_star = std::sqrt(std::max(0.0, alpha_sq));
  s.lambda_star = std::cosh(r);
  s.mu_star = -std::sinh(r);
  s.var_x_star = 0.5 * std::exp(-2.0 * r) * (2.0 * b.n + 1.0);
  return s;
}

}  // namespace detail

/// Maximizes reduced_objective over (dX)^2 by grid scan plus golden
/// section, then recovers (alpha, lambda, mu) at squeeze phase pi.
///
/// The scan covers [(n + 1/2)^2 / (2 ns + 1), 2 ns + 1], outside of which
/// the quadrature variances alone exceed the energy budget. A scan that is
/// not unimodal is rejected with ConvergenceError.
inline SearchResult maximize_reduced(const EnergyBudget& b, const SearchConfig& cfg = {}) {
  b.require_feasible();
  cfg.validate();
  const double half_level = b.n + 0.5;
  const double budget = 2.0 * b.ns + 1.0;
  const double lo = half_level * half_level / budget;
  const double hi = budget;

  const auto grid = detail::linspace(lo, hi, cfg.grid_points);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = reduced_objective(grid[i], b);
  int evals = static_cast<int>(grid.size());

  const std::size_t best = detail::argmax_first(values);
  const double slack = 1e-12 * std::max(1.0, std::abs(values[best]));
  for (std::size_t i = 1; i < values.size(); ++i) {
    const bool rising_side = i <= best;
    const double step = values[i] - values[i - 1];
    if ((rising_side && step < -slack) || (!rising_side && step > slack)) {
      throw ConvergenceError("maximize_reduced: objective is not unimodal on the scan grid",
                             std::abs(step));
    }
  }

  const double a = grid[best == 0 ? 0 : best - 1];
  const double c = grid[std::min(best + 1, grid.size() - 1)];
  const auto g = golden_section_maximize([&](double v) { return reduced_objective(v, b); }, a,
                                         c, cfg.tol, cfg.refine_rounds);
  evals += g.evals;

  const double var_x = g.x;
  // (dX)^2 = (2n+1) e^{-2r} / 2 at phase pi.
  const double squeeze = 2.0 * var_x / (2.0 * b.n + 1.0);
  const double r = squeeze < 1.0 ? -0.5 * std::log(squeeze) : 0.0;
  const double alpha_sq = detail::alpha_squared_at(r, b);
  if (alpha_sq < -std::max(cfg.tol, 1e-12) * budget) {
    throw ConvergenceError("maximize_reduced: optimum violates the energy budget", -alpha_sq);
  }

  SearchResult result;
  result.solution = detail::solution_at_r(r, alpha_sq, b);
  result.solution.var_x_star = var_x;
  result.solution.rho_max = g.value;
  result.objective_evals = evals;
  result.bracket_width = g.width;
  result.converged = g.width <= cfg.tol;
  result.argmax = var_x;
  return result;
}

/// Direct search over squeeze magnitude r at phase pi with real alpha
/// fixed by <N> = ns; the objective is snr_squeezed_number. Does not
/// assume the uncertainty relation is saturated.
inline SearchResult numeric_optimum_search(const EnergyBudget& b, const SearchConfig& cfg = {}) {
  b.require_feasible();
  cfg.validate();
  const double r_max = std::isnan(cfg.r_max) ? 1.0 + std::log(2.0 * b.ns + 2.0) : cfg.r_max;
  constexpr double minus_inf = -std::numeric_limits<double>::infinity();

  int evals = 0;
  auto objective = [&](double r) {
    ++evals;
    const double alpha_sq = detail::alpha_squared_at(r, b);
    if (alpha_sq < 0.0) return minus_inf;
    const Complex alpha{std::sqrt(alpha_sq), 0.0};
    return snr_squeezed_number(b.n, alpha, SqueezeParams::from_polar(r, std::numbers::pi));
  };

  const auto grid = detail::linspace(0.0, r_max, cfg.grid_points);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = objective(grid[i]);
  const std::size_t best = detail::argmax_first(values);
  if (values[best] == minus_inf) {
    throw InfeasibleBudget("numeric_optimum_search: energy constraint infeasible on the whole grid");
  }

  const double a = grid[best == 0 ? 0 : best - 1];
  const double c = grid[std::min(best + 1, grid.size() - 1)];
  GoldenResult g;
  if (best + 1 < grid.size() && values[best + 1] == minus_inf && best == 0) {
    // Only r = 0 is feasible: the budget is exhausted by the Fock excitation.
    g.x = 0.0;
    g.value = values[0];
    g.width = 0.0;
  } else {
    g = golden_section_maximize(objective, a, c, cfg.tol, cfg.refine_rounds);
    if (values[best] >= g.value) {
      g.x = grid[best];
      g.value = values[best];
    }
  }

  SearchResult result;
  result.solution = detail::solution_at_r(g.x, detail::alpha_squared_at(g.x, b), b);
  result.solution.rho_max = g.value;
  result.objective_evals = evals;
  result.bracket_width = g.width;
  result.converged = g.width <= cfg.tol;
  result.argmax = g.x;
  return result;
}

}  // namespace sqz
