#pragma once

// Closed-form dimension quantities and the explicit upper bounds built from
// Garsia partitions. Natural logarithms throughout.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pvdim/error.hpp"
#include "pvdim/measure.hpp"
#include "pvdim/partition.hpp"
#include "pvdim/pisot.hpp"

namespace pvdim {

namespace detail {

inline void check_beta_tau(double beta, double tau) {
  if (!(beta > 0.5 && beta < 1.0)) throw Error(Errc::domain_error, "beta must lie in (0.5, 1)");
  if (!(tau > 0.0 && tau < 0.5)) throw Error(Errc::domain_error, "tau must lie in (0, 0.5)");
}

// log sum_i exp(x_i), shifted by the maximum.
inline double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(xs.begin(), xs.end());
  CompensatedSum s;
  for (double x : xs) s.add(std::exp(x - m));
  return m + std::log(s.value());
}

}  // namespace detail

/// Box dimension of the repeller: log(2 beta / tau) / log(1 / tau).
inline double box_dim_repeller(double beta, double tau) {
  detail::check_beta_tau(beta, tau);
  return std::log(2.0 * beta / tau) / std::log(1.0 / tau);
}

/// u_n from a list of class sizes: log(sum (#P)^s) / (n log(1/beta)),
/// s = log beta / log tau.
template <class ForEachCount>
double hausdorff_upper_un(ForEachCount&& for_each_count, std::size_t n, double beta, double tau) {
  detail::check_beta_tau(beta, tau);
  if (n == 0) throw Error(Errc::domain_error, "u_n needs n >= 1");
  const double s = std::log(beta) / std::log(tau);
  std::vector<double> terms;
  for_each_count([&](Count c) { terms.push_back(s * log_count(c)); });
  if (terms.empty()) throw Error(Errc::domain_error, "empty partition");
  return detail::log_sum_exp(terms) / (static_cast<double>(n) * -std::log(beta));
}

inline double hausdorff_upper_un(const PartitionTable& t, double tau) {
  return hausdorff_upper_un(
      [&](auto&& f) {
        for (std::size_t i = 0; i < t.size(); ++i) f(t.count(i));
      },
      t.n(), t.pisot().beta_value(), tau);
}

struct GapSearch {
  double tau = 0.0;
  double box_dim = 0.0;
  std::vector<double> u;            // u_1 .. u_{n_max}
  std::vector<double> running_min;  // min_{k <= n} u_k
  std::optional<std::size_t> n_star;

  /// Verdict as a pure function of the sequence.
  static std::optional<std::size_t> first_below(const std::vector<double>& u, double box_dim) {
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] < box_dim) return i + 1;
    return std::nullopt;
  }
};

/// Searches n <= n_max for u_n strictly below the box dimension. Does not
/// stop at the first hit so the whole sequence is reported.
inline GapSearch gap_search(const PisotNumber& p, double tau, std::size_t n_max, PartitionOptions opts = {}) {
  GapSearch g;
  g.tau = tau;
  g.box_dim = box_dim_repeller(p.beta_value(), tau);
  if (n_max == 0) return g;
  opts.compute_values = false;
  PartitionBuilder builder(p, {}, opts);
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n > 1 && static_cast<double>(builder.size()) * std::min(2.0, 1.0 / p.beta_value()) >
                     static_cast<double>(opts.state_budget))
      throw Error(Errc::state_budget_exceeded, "level " + std::to_string(n) + " would exceed the cap of " +
                                                   std::to_string(opts.state_budget) + " states");
    builder.advance();
    const double u = hausdorff_upper_un([&](auto&& f) { builder.for_each_count(f); }, n, p.beta_value(), tau);
    g.u.push_back(u);
    g.running_min.push_back(g.running_min.empty() ? u : std::min(u, g.running_min.back()));
  }
  g.n_star = GapSearch::first_below(g.u, g.box_dim);
  return g;
}

/// min(1, G / -log beta). The clip reflects that the measure lives on a line.
inline double erdos_dim_upper(double garsia_bound, double beta) {
  if (!(garsia_bound >= 0.0)) throw Error(Errc::domain_error, "Garsia bound must be nonnegative");
  if (!(beta > 0.0 && beta < 1.0)) throw Error(Errc::domain_error, "beta must lie in (0, 1)");
  return std::min(1.0, garsia_bound / -std::log(beta));
}

/// 1 + min(min(1, G / -log beta), h / log 2) for a shift-invariant measure
/// on the two-sided shift with the given one-sided Garsia bound.
inline double fat_baker_bound(const MeasureSpec& m, const PisotNumber& p, double garsia_bound) {
  const double garsia_term = erdos_dim_upper(garsia_bound, p.beta_value());
  const double entropy_term = m.entropy_rate() / std::log(2.0);
  return 1.0 + std::min(garsia_term, entropy_term);
}

struct LambdaBound {
  double value = 0.0;      // upper bound for the dimension of the Bernoulli measure on the repeller
  double prefactor = 0.0;  // 1 - log beta / log tau, in (0, 1)
  double lower_bound_dim_lambda = 1.0;  // dim_H of the repeller is at least 1 (onto x-projection)
};

inline LambdaBound bernoulli_lambda_dim_upper(double p, double beta, double tau, double erdos_bound) {
  detail::check_beta_tau(beta, tau);
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::domain_error, "p must lie in [0, 1]");
  if (!(erdos_bound >= 0.0 && erdos_bound <= 1.0)) throw Error(Errc::domain_error, "Erdos bound must lie in [0, 1]");
  auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  LambdaBound b;
  b.prefactor = 1.0 - std::log(beta) / std::log(tau);
  if (!(b.prefactor > 0.0 && b.prefactor < 1.0)) throw Error(Errc::domain_error, "prefactor outside (0, 1)");
  b.value = (xlogx(p) + xlogx(1.0 - p)) / std::log(tau) + b.prefactor * erdos_bound;
  return b;
}

// ---------------------------------------------------------------------------

struct DimensionRow {
  std::size_t n = 0;
  std::size_t classes = 0;   // #(n)
  double omega = 0.0;        // omega(n), midpoint of the certified enclosure
  double entropy_rate = 0.0; // H_n / n
  double u = 0.0;
  double running_min = 0.0;
};

struct DimensionReport {
  std::string poly;
  double beta = 0.0;
  double tau = 0.0;
  MeasureSpec measure;
  std::vector<DimensionRow> rows;
  double garsia_best = 0.0;
  std::size_t garsia_best_n = 0;
  double garsia_threshold = 0.0;  // -log beta
  bool garsia_below_threshold = false;
  double box_dim = 0.0;
  std::optional<std::size_t> gap_n;
  double erdos_bound = 0.0;
  double fat_baker = 0.0;
  LambdaBound lambda;
};

struct ReportOptions {
  PartitionOptions partition;
  bool with_gaps = true;  // omega(n) needs class values at every level
};

inline DimensionReport dimension_report(const PisotNumber& p, double tau, std::size_t n_max, const MeasureSpec& m,
                                        const ReportOptions& opts = {}) {
  DimensionReport r;
  r.poly = p.minpoly().pretty();
  r.beta = p.beta_value();
  r.tau = tau;
  r.measure = m;
  r.box_dim = box_dim_repeller(r.beta, tau);
  r.garsia_threshold = -std::log(r.beta);
  PartitionOptions popts = opts.partition;
  popts.compute_values = opts.with_gaps;
  PartitionBuilder builder(p, {m}, popts);
  std::vector<double> u;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n > 1 && static_cast<double>(builder.size()) * std::min(2.0, 1.0 / r.beta) >
                     static_cast<double>(popts.state_budget))
      throw Error(Errc::state_budget_exceeded, "level " + std::to_string(n) + " would exceed the cap of " +
                                                   std::to_string(popts.state_budget) + " states");
    builder.advance();
    DimensionRow row;
    row.n = n;
    row.classes = builder.size();
    row.entropy_rate = builder.entropy(0) / static_cast<double>(n);
    row.u = hausdorff_upper_un([&](auto&& f) { builder.for_each_count(f); }, n, r.beta, tau);
    row.running_min = r.rows.empty() ? row.u : std::min(row.u, r.rows.back().running_min);
    if (opts.with_gaps) row.omega = min_gap(builder.table()).value();
    if (n == 1 || row.entropy_rate < r.garsia_best) {
      r.garsia_best = row.entropy_rate;
      r.garsia_best_n = n;
    }
    u.push_back(row.u);
    r.rows.push_back(row);
  }
  r.gap_n = GapSearch::first_below(u, r.box_dim);
  r.garsia_below_threshold = n_max > 0 && r.garsia_best < r.garsia_threshold;
  const double g = n_max > 0 ? r.garsia_best : m.entropy_rate();
  r.erdos_bound = erdos_dim_upper(g, r.beta);
  r.fat_baker = fat_baker_bound(m, p, g);
  if (m.kind == MeasureSpec::Kind::bernoulli) r.lambda = bernoulli_lambda_dim_upper(m.p, r.beta, tau, r.erdos_bound);
  return r;
}

}  // namespace pvdim
