// Command-line front end: moments, snr, optimize, figure1, validate.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

struct SharedOptions {
  bool numeric = false;
  double tol = 1e-8;
  std::string cutoff = "auto";
  std::string format = "json";
  std::string out;
};

void add_shared(CLI::App* sub, SharedOptions& opts) {
  sub->add_flag("--numeric", opts.numeric, "Also run the truncated Fock-space oracle");
  sub->add_option("--tol", opts.tol, "Comparison tolerance (> 0)");
  sub->add_option("--cutoff", opts.cutoff, "Fock cutoff: auto or a positive integer");
  sub->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", opts.out, "Write output to this path instead of stdout");
}

sqz::cli::RunConfig to_run_config(const SharedOptions& opts) {
  sqz::cli::RunConfig cfg;
  cfg.numeric = opts.numeric;
  cfg.tol = opts.tol;
  cfg.format = opts.format == "csv" ? sqz::cli::Format::csv : sqz::cli::Format::json;
  if (opts.cutoff != "auto") {
    std::size_t used = 0;
    int dim = 0;
    try {
      dim = std::stoi(opts.cutoff, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != opts.cutoff.size() || dim < 1) {
      throw CLI::ValidationError("--cutoff", "expected 'auto' or an integer >= 1");
    }
    cfg.cutoff = dim;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signal-to-quantum-noise ratios of squeezed number states"};
  app.require_subcommand(1);

  SharedOptions opts;
  int n = 0;
  double alpha_re = 0.0;
  double alpha_im = 0.0;
  double r = 0.0;
  double phi = 0.0;
  double ns = 0.0;
  int n_max = -1;
  std::uint64_t seed = 42;
  int cases = 100;

  auto add_state = [&](CLI::App* sub) {
    sub->add_option("--n", n, "Fock excitation n >= 0");
    sub->add_option("--alpha-re", alpha_re, "Re(alpha)");
    sub->add_option("--alpha-im", alpha_im, "Im(alpha)");
    sub->add_option("--r", r, "Squeeze magnitude r >= 0");
    sub->add_option("--phi", phi, "Squeeze phase in radians");
  };

  CLI::App* moments = app.add_subcommand("moments", "Quadrature moments of D(alpha)S(z)|n>");
  add_state(moments);
  add_shared(moments, opts);

  CLI::App* snr = app.add_subcommand("snr", "Signal-to-quantum-noise ratio of D(alpha)S(z)|n>");
  add_state(snr);
  add_shared(snr, opts);

  CLI::App* optimize = app.add_subcommand("optimize", "Energy-constrained SNR optimum");
  optimize->add_option("--ns", ns, "Mean photon number budget")->required();
  optimize->add_option("--n", n, "Fock excitation n >= 0");
  add_shared(optimize, opts);

  CLI::App* figure1 = app.add_subcommand("figure1", "Ratio-to-Yuen curve over n");
  figure1->add_option("--ns", ns, "Mean photon number budget (> 0)")->required();
  figure1->add_option("--n-max", n_max, "Largest n (default min(10, floor(ns)))");
  add_shared(figure1, opts);

  CLI::App* validate = app.add_subcommand("validate", "Seeded property suite");
  validate->add_option("--seed", seed, "RNG seed");
  validate->add_option("--cases", cases, "Number of random cases (>= 1)");
  add_shared(validate, opts);

  sqz::cli::RunConfig cfg;
  try {
    app.parse(argc, argv);
    cfg = to_run_config(opts);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sqz::cli::kExitUsage;
  }

  sqz::cli::CommandOutput result;
  if (*moments) {
    result = sqz::cli::cmd_moments(n, alpha_re, alpha_im, r, phi, cfg);
  } else if (*snr) {
    result = sqz::cli::cmd_snr(n, alpha_re, alpha_im, r, phi, cfg);
  } else if (*optimize) {
    result = sqz::cli::cmd_optimize(ns, n, cfg);
  } else if (*figure1) {
    if (n_max < 0) n_max = ns >= 10.0 ? 10 : static_cast<int>(ns);
    result = sqz::cli::cmd_figure1(ns, n_max, cfg);
  } else {
    result = sqz::cli::cmd_validate(seed, cases, cfg);
  }

  if (opts.out.empty()) {
    std::cout << result.text;
  } else {
    std::ofstream file(opts.out, std::ios::binary);
    if (!file) {
      std::cerr << "cannot open " << opts.out << " for writing\n";
      return sqz::cli::kExitUsage;
    }
    file << result.text;
  }
  return result.exit_code;
}
