#pragma once

// Fourier transform of the Bernoulli convolution as an infinite product
//   phi(w) = prod_{n>=0} (cos t_n + i(2p-1) sin t_n),  t_n = (1-beta) beta^n w,
// and the scan along w_k = 2 pi beta^-k / (1-beta).
//
// A factor f = 1 + e has |e| <= t^2/2 + |2p-1| |t|, so a tail starting at
// t_N perturbs a product of modulus <= 1 by at most exp(S) - 1 with
// S = t_N^2 / (2(1-beta^2)) + |2p-1| |t_N| / (1-beta).

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "pvdim/error.hpp"
#include "pvdim/pisot.hpp"

namespace pvdim {

struct PhiValue {
  std::complex<double> value{1.0, 0.0};
  double error = 0.0;  // truncation tail plus double rounding
  std::size_t factors = 0;
};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

inline double tail_bound(double theta, double beta, double c) {
  const double t = std::abs(theta);
  return std::expm1(t * t / (2.0 * (1.0 - beta * beta)) + std::abs(c) * t / (1.0 - beta));
}

// Multiplies factors t, t*beta, t*beta^2, ... into acc until the tail is
// below tol. Returns the tail bound plus accumulated rounding.
inline double multiply_geometric(std::complex<double>& acc, std::size_t& count, double theta, double beta, double c,
                                 double tol) {
  double rounding = 0.0;
  std::size_t steps = 0;
  while (true) {
    const double tail = tail_bound(theta, beta, c);
    if (tail < tol) return tail + rounding;
    acc *= std::complex<double>(std::cos(theta), c * std::sin(theta));
    ++count;
    ++steps;
    rounding += (std::abs(theta) * static_cast<double>(steps + 3) + 6.0) * kEps;
    theta *= beta;
  }
}

}  // namespace detail

/// Truncated product with a certified bound on the discarded tail.
inline PhiValue phi(double beta, double p, double omega, double tol = 1e-10) {
  if (!(tol > 0.0)) throw Error(Errc::invalid_argument, "tol must be positive");
  if (!(beta > 0.0 && beta < 1.0)) throw Error(Errc::domain_error, "beta must lie in (0, 1)");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::domain_error, "p must lie in [0, 1]");
  PhiValue out;
  if (omega == 0.0) return out;
  const double c = 2.0 * p - 1.0;
  out.error = detail::multiply_geometric(out.value, out.factors, (1.0 - beta) * omega, beta, c, tol);
  return out;
}

struct FourierScan {
  double beta = 0.0;
  double p = 0.0;
  std::vector<std::size_t> k_values;
  std::vector<double> omega;    // omega_k
  std::vector<std::complex<double>> values;
  std::vector<double> moduli;
  std::vector<double> errors;
  double floor = 0.0;        // min modulus
  double floor_lower = 0.0;  // min (modulus - error), clipped at 0
};

namespace detail {

inline void finish_scan(FourierScan& s) {
  s.floor = std::numeric_limits<double>::infinity();
  s.floor_lower = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.moduli.size(); ++i) {
    s.floor = std::min(s.floor, s.moduli[i]);
    s.floor_lower = std::min(s.floor_lower, std::max(0.0, s.moduli[i] - s.errors[i]));
  }
  if (s.moduli.empty()) s.floor = s.floor_lower = 0.0;
}

}  // namespace detail

/// Scan at w_k, k = 0..k_max, for a PV parameter. Factors with n < k have
/// angle 2 pi alpha^(k-n); they are evaluated as 2 pi (alpha^m - s_m), with s_m
/// the integer power sum, so no precision is lost to huge arguments.
inline FourierScan nondecay_scan(const PisotNumber& pv, double prob, std::size_t k_max, double tol = 1e-10) {
  if (!(prob >= 0.0 && prob <= 1.0)) throw Error(Errc::domain_error, "p must lie in [0, 1]");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  FourierScan s;
  s.beta = pv.beta_value();
  s.p = prob;
  const double c = 2.0 * prob - 1.0;
  std::vector<double> rem(k_max + 1, 0.0), rem_err(k_max + 1, 0.0);
  for (std::size_t m = 1; m <= k_max; ++m) {
    const PowerTrace pt = power_trace_distance(pv, m);
    rem[m] = pt.remainder.mid();
    rem_err[m] = 0.5 * pt.remainder.width() + std::abs(rem[m]) * detail::kEps;
  }
  for (std::size_t k = 0; k <= k_max; ++k) {
    std::complex<double> acc{1.0, 0.0};
    std::size_t count = 0;
    double err = 0.0;
    for (std::size_t n = 0; n < k; ++n) {
      const double theta = two_pi * rem[k - n];
      acc *= std::complex<double>(std::cos(theta), c * std::sin(theta));
      ++count;
      // |d factor / d theta| <= 1
      err += two_pi * rem_err[k - n] + (std::abs(theta) + 6.0) * detail::kEps;
    }
    ++count;  // n = k: angle 2 pi, factor exactly 1
    err += detail::multiply_geometric(acc, count, two_pi * s.beta, s.beta, c, tol);
    s.k_values.push_back(k);
    s.omega.push_back(two_pi * std::pow(pv.alpha_value(), static_cast<double>(k)) / (1.0 - s.beta));
    s.values.push_back(acc);
    s.moduli.push_back(std::abs(acc));
    s.errors.push_back(err);
  }
  detail::finish_scan(s);
  return s;
}

/// Same scan through the generic product, for any beta (no PV structure).
inline FourierScan generic_scan(double beta, double prob, std::size_t k_max, double tol = 1e-10) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  FourierScan s;
  s.beta = beta;
  s.p = prob;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const double w = two_pi * std::pow(beta, -static_cast<double>(k)) / (1.0 - beta);
    const PhiValue v = phi(beta, prob, w, tol);
    s.k_values.push_back(k);
    s.omega.push_back(w);
    s.values.push_back(v.value);
    s.moduli.push_back(std::abs(v.value));
    s.errors.push_back(v.error);
  }
  detail::finish_scan(s);
  return s;
}

}  // namespace pvdim
