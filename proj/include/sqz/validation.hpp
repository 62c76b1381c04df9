#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sqz/analytic.hpp"
#include "sqz/fock.hpp"
#include "sqz/optimizer.hpp"
#include "sqz/types.hpp"

namespace sqz {

/// Uniform doubles from the raw 64-bit mt19937_64 stream. The engine is
/// fully specified by the standard, so draws are identical everywhere,
/// unlike std::uniform_real_distribution.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

struct PropertyOutcome {
  std::string name;
  double threshold = 0.0;
  int samples = 0;
  double max_deviation = 0.0;
  bool passed = true;
  std::string counterexample;

  void record(double deviation, bool ok, const std::string& where) {
    ++samples;
    if (std::isnan(deviation)) ok = false;
    if (!(deviation <= max_deviation)) max_deviation = deviation;
    if (!ok && passed) {
      passed = false;
      counterexample = where;
    }
  }
  void check(double deviation, const std::string& where) {
    record(deviation, deviation <= threshold, where);
  }
};

struct ValidationReport {
  std::uint64_t seed = 0;
  int cases = 0;
  double tol = 0.0;
  std::vector<PropertyOutcome> properties;

  bool passed() const {
    for (const auto& p : properties) {
      if (!p.passed) return false;
    }
    return true;
  }
};

namespace detail {

inline std::string describe_state(int n, Complex alpha, const SqueezeParams& z) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "n=%d alpha_re=%.17g alpha_im=%.17g r=%.17g phi=%.17g", n,
                alpha.real(), alpha.imag(), z.r(), z.phi());
  return buf;
}

inline std::string describe_budget(double ns, int n) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "ns=%.17g n=%d", ns, n);
  return buf;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace detail

/// Runs every invariant over `cases` seeded random states and budgets.
///
/// State parameters are drawn from n in [0, 5], |alpha| <= 2, r <= 1.5,
/// phi in [0, 2pi); budgets from ns in [0.5, 20] with n <= ns. The
/// truncated-Fock oracle uses an automatic cutoff with eps = tol / 10.
inline ValidationReport run_validation(std::uint64_t seed, int cases, double tol) {
  if (cases < 1) throw InvalidInput("cases must be >= 1");
  if (!(tol > 0.0)) throw InvalidInput("tol must be positive");

  auto make = [](const char* name, double threshold) {
    PropertyOutcome p;
    p.name = name;
    p.threshold = threshold;
    return p;
  };
  PropertyOutcome hyperbolic = make("hyperbolic_identity", 1e-12);
  PropertyOutcome consistency = make("snr_formula_consistency", 1e-12);
  PropertyOutcome partition = make("energy_partition_analytic", 1e-12);
  PropertyOutcome product = make("uncertainty_product", 1e-10);
  PropertyOutcome floor = make("uncertainty_floor", 1e-8);
  PropertyOutcome oracle = make("oracle_agreement", tol);
  PropertyOutcome partition_numeric = make("energy_partition_numeric", tol);
  PropertyOutcome zero_signal = make("zero_signal", 1e-12);
  PropertyOutcome excitation_penalty = make("snr_excitation_penalty", 0.0);
  PropertyOutcome yuen = make("yuen_reduction", 1e-12);
  PropertyOutcome dominance = make("squeezing_dominance", 0.0);
  PropertyOutcome degradation = make("monotone_degradation", 0.0);
  PropertyOutcome ratio = make("ratio_bound", 1e-12);
  PropertyOutcome optimum = make("optimal_solution_invariants", 1e-10);
  SearchConfig search_cfg;
  PropertyOutcome agreement = make("optimizer_agreement", 10.0 * search_cfg.tol);
  PropertyOutcome saturation = make("optimizer_saturation", 10.0 * search_cfg.tol);

  SeededSampler rng(seed);
  const double eps = tol / 10.0;
  for (int i = 0; i < cases; ++i) {
    const int n = rng.integer(0, 5);
    const Complex alpha = std::polar(rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0 * std::numbers::pi));
    const SqueezeParams z = SqueezeParams::from_polar(rng.uniform(0.0, 1.5),
                                                      rng.uniform(0.0, 2.0 * std::numbers::pi));
    const std::string where = detail::describe_state(n, alpha, z);

    hyperbolic.check(std::abs(z.lambda() * z.lambda() - std::norm(z.mu()) - 1.0), where);

    const MomentSet coh = coherent_number_moments(n, alpha);
    const MomentSet sq = squeezed_number_moments(n, alpha, z);
    consistency.check(std::max(detail::rel(snr_coherent_number(n, alpha), snr(coh)),
                               detail::rel(snr_squeezed_number(n, alpha, z), snr(sq))),
                      where);
    const double scale = 2.0 * sq.mean_n + 1.0;
    partition.check(std::max(std::abs(energy_partition_residual(coh)) / (2.0 * coh.mean_n + 1.0),
                             std::abs(energy_partition_residual(sq)) / scale),
                    where);
    product.check(std::max(detail::rel(coh.var_x * coh.var_p, uncertainty_product(n)),
                           detail::rel(sq.var_x * sq.var_p, uncertainty_product(n, z))),
                  where);

    const double level = 2.0 * n + 1.0;
    try {
      const FockCutoff dim = choose_cutoff(n, alpha, z, eps);
      const MomentSet num = moments_numeric(build_state(n, alpha, z, dim, tol));
      oracle.check(max_deviation(num, sq), where);
      partition_numeric.check(std::abs(energy_partition_residual(num)), where);
      const double floor_gap = 0.25 * level * level - num.var_x * num.var_p;
      floor.check(std::max(0.0, floor_gap), where);

      const FockCutoff dim0 = choose_cutoff(n, Complex{}, z, eps);
      const MomentSet quiet = moments_numeric(build_state(n, Complex{}, z, dim0, tol));
      zero_signal.check(std::max(snr(quiet), snr_squeezed_number(n, Complex{}, z)), where);
    } catch (const CutoffTooSmall& e) {
      // The oracle cannot reach eps at any allowed cutoff.
      const std::string why = where + " (" + e.what() + ")";
      constexpr double inf = std::numeric_limits<double>::infinity();
      for (PropertyOutcome* p : {&oracle, &partition_numeric, &floor, &zero_signal}) {
        p->record(inf, false, why);
      }
    }

    if (alpha.real() != 0.0) {
      const int excited = std::max(1, n);
      const double gap_coh = snr_coherent_number(0, alpha) - snr_coherent_number(excited, alpha);
      const double gap_sq = snr_squeezed_number(0, alpha, z) - snr_squeezed_number(excited, alpha, z);
      const double worst = std::min(gap_coh, gap_sq);
      excitation_penalty.record(std::max(0.0, -worst), worst > 0.0, where);
    }

    const double ns = rng.uniform(0.5, 20.0);
    const int bn = rng.integer(0, static_cast<int>(std::floor(ns)));
    const EnergyBudget budget{ns, bn};
    const std::string bwhere = detail::describe_budget(ns, bn);

    yuen.check(detail::rel(optimal_squeezed_number({ns, 0}).rho_max, 4.0 * ns * (ns + 1.0)), bwhere);

    const OptimalSolution best = optimal_squeezed_number(budget);
    const OptimalSolution plain = optimal_coherent_number(budget);
    const double margin = best.rho_max - plain.rho_max;
    dominance.record(std::max(0.0, -margin), ns > bn ? margin > 0.0 : margin == 0.0, bwhere);

    if (bn + 1 <= ns) {
      const EnergyBudget next{ns, bn + 1};
      const double drop_sq = best.rho_max - optimal_squeezed_number(next).rho_max;
      const double drop_coh = plain.rho_max - optimal_coherent_number(next).rho_max;
      const double worst = std::min(drop_sq, drop_coh);
      degradation.record(std::max(0.0, -worst), worst > 0.0, bwhere);
    }

    const double scaled = ratio_to_yuen(budget) * (2.0 * bn + 1.0) * (2.0 * bn + 1.0);
    const double closed = 1.0 - bn * (bn + 1.0) / (ns * (ns + 1.0));
    const double grown = ratio_to_yuen({ns + 1.0, bn}) * (2.0 * bn + 1.0) * (2.0 * bn + 1.0);
    const bool in_range = scaled > 0.0 && scaled <= 1.0 + 1e-15 && (bn == 0 || grown > scaled);
    ratio.record(std::abs(scaled - closed), in_range && std::abs(scaled - closed) <= 1e-12, bwhere);

    const double bog = std::abs(best.lambda_star * best.lambda_star - best.mu_star * best.mu_star - 1.0);
    const double energy = std::abs(best.lambda_star * best.lambda_star * bn +
                                   best.mu_star * best.mu_star * (bn + 1.0) +
                                   best.alpha_star * best.alpha_star - ns);
    const double r_star = std::asinh(-best.mu_star);
    const double rho_back = snr_squeezed_number(
        bn, Complex{best.alpha_star, 0.0}, SqueezeParams::from_polar(r_star, std::numbers::pi));
    optimum.check(std::max({bog, energy / std::max(1.0, ns), detail::rel(rho_back, best.rho_max)}),
                  bwhere);

    const SearchResult reduced = maximize_reduced(budget, search_cfg);
    const SearchResult direct = numeric_optimum_search(budget, search_cfg);
    agreement.check(std::max({detail::rel(reduced.solution.rho_max, best.rho_max),
                              detail::rel(direct.solution.rho_max, best.rho_max),
                              detail::rel(reduced.solution.rho_max, direct.solution.rho_max)}),
                    bwhere);
    const double quarter = 0.25 * (2.0 * bn + 1.0) * (2.0 * bn + 1.0);
    const SearchResult* found[] = {&reduced, &direct};
    double sat = 0.0;
    for (const SearchResult* res : found) {
      const OptimalSolution& s = res->solution;
      const double lam = s.lambda_star;
      const double mu = s.mu_star;
      const double vx = 0.5 * (lam + mu) * (lam + mu) * (2.0 * bn + 1.0);
      const double vp = 0.5 * (lam - mu) * (lam - mu) * (2.0 * bn + 1.0);
      const double photons = lam * lam * bn + mu * mu * (bn + 1.0) + s.alpha_star * s.alpha_star;
      sat = std::max({sat, detail::rel(vx * vp, quarter), detail::rel(photons, ns)});
    }
    saturation.check(sat, bwhere);
  }

  ValidationReport report;
  report.seed = seed;
  report.cases = cases;
  report.tol = tol;
  report.properties = {hyperbolic, consistency, partition, product, floor, oracle,
                       partition_numeric, zero_signal, excitation_penalty, yuen, dominance,
                       degradation, ratio, optimum, agreement, saturation};
  return report;
}

}  // namespace sqz
