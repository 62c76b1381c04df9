#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sqz {

using Complex = std::complex<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside an operation's domain (negative r, n >= dim, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Energy budget cannot host the requested Fock excitation (ns < n).
class InfeasibleBudget : public Error {
 public:
  using Error::Error;
};

/// The truncated Fock space is too small to represent a state to the
/// requested accuracy.
class CutoffTooSmall : public Error {
 public:
  CutoffTooSmall(const std::string& what, double leakage)
      : Error(what), leakage_(leakage) {}
  double leakage() const noexcept { return leakage_; }

 private:
  double leakage_;
};

/// An iterative routine stopped short of its accuracy target.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Squeeze parameter z = r e^{i phi} together with its Bogoliubov
/// coefficients lambda = cosh r and mu = e^{i phi} sinh r.
class SqueezeParams {
 public:
  SqueezeParams() = default;

  /// Throws InvalidInput for r < 0 or non-finite input. phi is reduced
  /// to [0, 2pi).
  static SqueezeParams from_polar(double r, double phi) {
    if (!std::isfinite(r) || !std::isfinite(phi)) {
      throw InvalidInput("squeeze parameters must be finite");
    }
    if (r < 0.0) {
      throw InvalidInput("squeeze magnitude r must be >= 0, got " +
                         std::to_string(r));
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double wrapped = std::fmod(phi, two_pi);
    if (wrapped < 0.0) wrapped += two_pi;
    if (wrapped >= two_pi) wrapped = 0.0;
    SqueezeParams s;
    s.r_ = r;
    s.phi_ = wrapped;
    s.lambda_ = std::cosh(r);
    // Evaluated from the unreduced phi so that phi = pi gives mu = -sinh r
    // with an imaginary part of exactly sin(pi) * sinh r.
    s.mu_ = std::polar(std::sinh(r), phi);
    return s;
  }

  static SqueezeParams none() { return from_polar(0.0, 0.0); }

  double r() const noexcept { return r_; }
  double phi() const noexcept { return phi_; }
  double lambda() const noexcept { return lambda_; }
  Complex mu() const noexcept { return mu_; }
  Complex z() const { return std::polar(r_, phi_); }

 private:
  double r_ = 0.0;
  double phi_ = 0.0;
  double lambda_ = 1.0;
  Complex mu_{0.0, 0.0};
};

/// First and second quadrature moments plus mean photon number of one
/// pure state.
struct MomentSet {
  double mean_n = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.5;
  double var_p = 0.5;
};

/// Largest componentwise absolute difference between two moment sets.
inline double max_deviation(const MomentSet& a, const MomentSet& b) {
  double d = std::abs(a.mean_n - b.mean_n);
  d = std::max(d, std::abs(a.mean_x - b.mean_x));
  d = std::max(d, std::abs(a.mean_p - b.mean_p));
  d = std::max(d, std::abs(a.var_x - b.var_x));
  d = std::max(d, std::abs(a.var_p - b.var_p));
  return d;
}

}  // namespace sqz
