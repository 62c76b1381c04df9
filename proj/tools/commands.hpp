#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sqz/analytic.hpp"
#include "sqz/fock.hpp"
#include "sqz/optimizer.hpp"
#include "sqz/validation.hpp"

namespace sqz::cli {

using Record = nlohmann::ordered_json;

enum class Format { json, csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  bool numeric = false;
  double tol = 1e-8;
  /// Empty means "auto".
  std::optional<int> cutoff;
  Format format = Format::json;
};

struct CommandOutput {
  std::string text;
  int exit_code = kExitOk;
};

/// Rounds to 12 significant digits so serialized output is stable.
inline double sig12(double x) {
  if (x == 0.0) return 0.0;
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

inline std::string csv_value(const Record& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

/// Flat object -> header line plus one value line.
inline std::string to_csv(const Record& flat) {
  std::string header;
  std::string values;
  bool first = true;
  for (const auto& [key, value] : flat.items()) {
    if (!first) {
      header += ',';
      values += ',';
    }
    first = false;
    header += key;
    values += csv_value(value);
  }
  return header + "\n" + values + "\n";
}

inline std::string render(const Record& record, Format format) {
  if (format == Format::csv) return to_csv(record);
  return record.dump() + "\n";
}

inline CommandOutput error_output(const std::string& command, const std::string& message,
                                  Format format, int code = kExitUsage) {
  Record r;
  r["command"] = command;
  r["error"] = message;
  return {render(r, format), code};
}

inline void put(Record& r, const char* key, double value) { r[key] = sig12(value); }

inline void put_moments(Record& r, const std::string& prefix, const MomentSet& m) {
  put(r, (prefix + "mean_n").c_str(), m.mean_n);
  put(r, (prefix + "mean_x").c_str(), m.mean_x);
  put(r, (prefix + "mean_p").c_str(), m.mean_p);
  put(r, (prefix + "var_x").c_str(), m.var_x);
  put(r, (prefix + "var_p").c_str(), m.var_p);
}

inline void check_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidInput("--tol must be a positive number");
}

// State built at the configured cutoff; "auto" runs the doubling test
// with eps = tol / 10.
inline StateVector oracle_state(int n, Complex alpha, const SqueezeParams& z,
                                const RunConfig& cfg) {
  const FockCutoff dim =
      cfg.cutoff ? FockCutoff(*cfg.cutoff) : choose_cutoff(n, alpha, z, cfg.tol / 10.0);
  return build_state(n, alpha, z, dim, cfg.tol);
}

template <typename Body>
CommandOutput guarded(const std::string& command, Format format, Body&& body) {
  try {
    return body();
  } catch (const InfeasibleBudget& e) {
    return error_output(command, e.what(), format);
  } catch (const InvalidInput& e) {
    return error_output(command, e.what(), format);
  } catch (const CutoffTooSmall& e) {
    return error_output(command, e.what(), format);
  } catch (const ConvergenceError& e) {
    return error_output(command, e.what(), format, kExitFailure);
  }
}

inline CommandOutput cmd_moments(int n, double alpha_re, double alpha_im, double r, double phi,
                                 const RunConfig& cfg) {
  return guarded("moments", cfg.format, [&] {
    check_tol(cfg.tol);
    if (n < 0) throw InvalidInput("--n must be >= 0");
    const Complex alpha{alpha_re, alpha_im};
    const SqueezeParams z = squeeze_params(r, phi);
    const MomentSet m = squeezed_number_moments(n, alpha, z);

    Record out;
    out["command"] = "moments";
    out["n"] = n;
    put(out, "alpha_re", alpha_re);
    put(out, "alpha_im", alpha_im);
    put(out, "r", z.r());
    put(out, "phi", z.phi());
    put(out, "lambda", z.lambda());
    put(out, "mu_re", z.mu().real());
    put(out, "mu_im", z.mu().imag());
    put_moments(out, "", m);
    put(out, "uncertainty_product", uncertainty_product(n, z));
    put(out, "energy_partition_residual", energy_partition_residual(m));
    if (cfg.numeric) {
      const StateVector state = oracle_state(n, alpha, z, cfg);
      const MomentSet num = moments_numeric(state);
      out["cutoff"] = state.dim();
      put(out, "leakage", state.leakage);
      put_moments(out, "numeric_", num);
      put(out, "max_deviation", max_deviation(num, m));
    }
    return CommandOutput{render(out, cfg.format), kExitOk};
  });
}

inline CommandOutput cmd_snr(int n, double alpha_re, double alpha_im, double r, double phi,
                             const RunConfig& cfg) {
  return guarded("snr", cfg.format, [&] {
    check_tol(cfg.tol);
    if (n < 0) throw InvalidInput("--n must be >= 0");
    const Complex alpha{alpha_re, alpha_im};
    const SqueezeParams z = squeeze_params(r, phi);

    Record out;
    out["command"] = "snr";
    out["n"] = n;
    put(out, "alpha_re", alpha_re);
    put(out, "alpha_im", alpha_im);
    put(out, "r", z.r());
    put(out, "phi", z.phi());
    put(out, "rho", snr_squeezed_number(n, alpha, z));
    put(out, "rho_unsqueezed", snr_coherent_number(n, alpha));
    put(out, "rho_vacuum_reference", snr_squeezed_number(0, alpha, z));
    if (cfg.numeric) {
      const StateVector state = oracle_state(n, alpha, z, cfg);
      const double numeric_rho = snr(moments_numeric(state));
      out["cutoff"] = state.dim();
      put(out, "numeric_rho", numeric_rho);
      put(out, "deviation", std::abs(numeric_rho - snr_squeezed_number(n, alpha, z)));
    }
    return CommandOutput{render(out, cfg.format), kExitOk};
  });
}

inline CommandOutput cmd_optimize(double ns, int n, const RunConfig& cfg) {
  return guarded("optimize", cfg.format, [&] {
    check_tol(cfg.tol);
    const EnergyBudget budget{ns, n};
    budget.require_feasible();
    const OptimalSolution sq = optimal_squeezed_number(budget);
    const OptimalSolution coh = optimal_coherent_number(budget);
    const double r_star = std::asinh(-sq.mu_star);

    Record out;
    out["command"] = "optimize";
    put(out, "ns", ns);
    out["n"] = n;
    put(out, "rho_max_squeezed", sq.rho_max);
    put(out, "alpha_star_squeezed", sq.alpha_star);
    put(out, "lambda_star_squeezed", sq.lambda_star);
    put(out, "mu_star_squeezed", sq.mu_star);
    put(out, "r_star_squeezed", r_star);
    put(out, "var_x_star_squeezed", sq.var_x_star);
    put(out, "rho_max_coherent", coh.rho_max);
    put(out, "alpha_star_coherent", coh.alpha_star);
    put(out, "var_x_star_coherent", coh.var_x_star);
    put(out, "rho_yuen", 4.0 * ns * (ns + 1.0));
    if (ns > 0.0) put(out, "ratio_to_yuen", ratio_to_yuen(budget));

    if (cfg.numeric) {
      const SearchResult reduced = maximize_reduced(budget);
      const SearchResult direct = numeric_optimum_search(budget);
      put(out, "reduced_rho_max", reduced.solution.rho_max);
      put(out, "reduced_var_x", reduced.solution.var_x_star);
      put(out, "reduced_deviation", std::abs(reduced.solution.rho_max - sq.rho_max));
      out["reduced_converged"] = reduced.converged;
      out["reduced_objective_evals"] = reduced.objective_evals;
      put(out, "search_rho_max", direct.solution.rho_max);
      put(out, "search_r", direct.argmax);
      put(out, "search_deviation", std::abs(direct.solution.rho_max - sq.rho_max));
      out["search_converged"] = direct.converged;
      out["search_objective_evals"] = direct.objective_evals;

      const Complex alpha{sq.alpha_star, 0.0};
      const SqueezeParams z = SqueezeParams::from_polar(r_star, std::numbers::pi);
      const StateVector state = oracle_state(n, alpha, z, cfg);
      const MomentSet num = moments_numeric(state);
      out["cutoff"] = state.dim();
      put(out, "numeric_mean_n", num.mean_n);
      put(out, "numeric_rho", snr(num));
      put(out, "numeric_deviation", std::max(std::abs(snr(num) - sq.rho_max),
                                             std::abs(num.mean_n - ns)));
    }
    return CommandOutput{render(out, cfg.format), kExitOk};
  });
}

inline CommandOutput cmd_figure1(double ns, int n_max, const RunConfig& cfg) {
  return guarded("figure1", cfg.format, [&] {
    check_tol(cfg.tol);
    if (!(ns > 0.0) || !std::isfinite(ns)) throw InvalidInput("--ns must be > 0");
    if (n_max < 0 || n_max > ns) throw InvalidInput("--n-max must satisfy 0 <= n_max <= ns");

    if (cfg.format == Format::csv) {
      std::string text = "n,ratio,envelope\n";
      for (int n = 0; n <= n_max; ++n) {
        const double level = 2.0 * n + 1.0;
        text += std::to_string(n) + "," + format_number(ratio_to_yuen({ns, n})) + "," +
                format_number(1.0 / (level * level)) + "\n";
      }
      return CommandOutput{text, kExitOk};
    }
    Record out;
    out["command"] = "figure1";
    put(out, "ns", ns);
    out["n_max"] = n_max;
    Record rows = Record::array();
    for (int n = 0; n <= n_max; ++n) {
      const double level = 2.0 * n + 1.0;
      Record row;
      row["n"] = n;
      put(row, "ratio", ratio_to_yuen({ns, n}));
      put(row, "envelope", 1.0 / (level * level));
      rows.push_back(std::move(row));
    }
    out["rows"] = std::move(rows);
    return CommandOutput{out.dump() + "\n", kExitOk};
  });
}

inline CommandOutput cmd_validate(std::uint64_t seed, int cases, const RunConfig& cfg) {
  return guarded("validate", cfg.format, [&] {
    check_tol(cfg.tol);
    if (cases < 1) throw InvalidInput("--cases must be >= 1");
    const ValidationReport report = run_validation(seed, cases, cfg.tol);
    const int code = report.passed() ? kExitOk : kExitFailure;

    if (cfg.format == Format::csv) {
      std::string text = "property,samples,max_deviation,threshold,passed,counterexample\n";
      for (const auto& p : report.properties) {
        text += p.name + "," + std::to_string(p.samples) + "," + format_number(p.max_deviation) +
                "," + format_number(p.threshold) + "," + (p.passed ? "true" : "false") + "," +
                p.counterexample + "\n";
      }
      return CommandOutput{text, code};
    }
    Record out;
    out["command"] = "validate";
    out["seed"] = seed;
    out["cases"] = cases;
    put(out, "tol", cfg.tol);
    Record props = Record::array();
    for (const auto& p : report.properties) {
      Record row;
      row["name"] = p.name;
      row["samples"] = p.samples;
      put(row, "max_deviation", p.max_deviation);
      put(row, "threshold", p.threshold);
      row["passed"] = p.passed;
      if (!p.passed) row["counterexample"] = p.counterexample;
      props.push_back(std::move(row));
    }
    out["properties"] = std::move(props);
    out["passed"] = report.passed();
    return CommandOutput{out.dump() + "\n", code};
  });
}

}  // namespace sqz::cli
