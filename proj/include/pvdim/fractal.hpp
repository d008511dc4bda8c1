#pragma once

// Fat Baker dynamics, coding maps, attractor sampling and empirical
// dimension estimators.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pvdim/error.hpp"
#include "pvdim/partition.hpp"

namespace pvdim {

using Point2 = std::array<double, 2>;
using Point3 = std::array<double, 3>;

/// One step of the Fat Baker map; y = 0 takes the y >= 0 branch.
inline Point2 fat_baker_step(double beta, double x, double y) {
  if (y >= 0.0) return {beta * x + (1.0 - beta), 2.0 * y - 1.0};
  return {beta * x - (1.0 - beta), 2.0 * y + 1.0};
}

/// Invertible lift on [-1,1]^3: z contracts by tau on the branch of y.
inline Point3 fat_baker_lift_step(double beta, double tau, double x, double y, double z) {
  const Point2 xy = fat_baker_step(beta, x, y);
  const double zz = y >= 0.0 ? tau * z + (1.0 - tau) : tau * z - (1.0 - tau);
  return {xy[0], xy[1], zz};
}

struct PointSet2D {
  std::vector<Point2> points;
  std::string provenance;
};

inline PointSet2D fat_baker_orbit(double beta, Point2 start, std::size_t steps) {
  PointSet2D out;
  out.points.reserve(steps + 1);
  out.points.push_back(start);
  for (std::size_t i = 0; i < steps; ++i) out.points.push_back(fat_baker_step(beta, out.points.back()[0], out.points.back()[1]));
  out.provenance = "orbit beta=" + std::to_string(beta) + " steps=" + std::to_string(steps);
  return out;
}

// ---------------------------------------------------------------------------

/// Finite window i_lo .. i_hi of a two-sided sign sequence, lo <= -1 <= 0 <= hi.
struct SignWindow {
  int lo = -1;
  std::vector<int> signs;  // signs[k - lo] = i_k

  int hi() const noexcept { return lo + static_cast<int>(signs.size()) - 1; }
  int at(int k) const { return signs.at(static_cast<std::size_t>(k - lo)); }

  /// Window of the shifted sequence j_k = i_{k-1}: same data, indices moved up.
  SignWindow backward_shift() const { return {lo + 1, signs}; }

  static SignWindow random(int m, int n, std::mt19937_64& rng) {
    SignWindow w;
    w.lo = -m;
    std::bernoulli_distribution coin(0.5);
    for (int k = -m; k <= n; ++k) w.signs.push_back(coin(rng) ? 1 : -1);
    return w;
  }
};

struct CodedPoint {
  double x = 0.0, y = 0.0;
  double x_tail = 0.0;  // |x - x_true| <= beta^(hi+1)
  double y_tail = 0.0;  // |y - y_true| <= 2^-m
};

/// ((1-beta) sum_{k=0..hi} i_k beta^k, sum_{k=1..m} i_{-k} 2^-k).
inline CodedPoint coding_map_pi_hat(double beta, const SignWindow& w) {
  if (w.lo > -1 || w.hi() < 0) throw Error(Errc::invalid_argument, "window must cover indices -1 and 0");
  CodedPoint c;
  double sx = 0.0, bk = 1.0;
  for (int k = 0; k <= w.hi(); ++k) {
    sx += w.at(k) * bk;
    bk *= beta;
  }
  c.x = (1.0 - beta) * sx;
  c.x_tail = bk;
  double sy = 0.0, half = 0.5;
  for (int k = 1; k <= -w.lo; ++k) {
    sy += w.at(-k) * half;
    half *= 0.5;
  }
  c.y = sy;
  c.y_tail = 2.0 * half;
  return c;
}

// ---------------------------------------------------------------------------

namespace detail {

inline Point2 affine_t(double beta, double tau, int i, const Point2& p) {
  return {beta * p[0] + i * (1.0 - beta), tau * p[1] + i * (1.0 - tau)};
}

}  // namespace detail

/// S_{n+1} = T_1(S_n) u T_{-1}(S_n) with S_0 = {(0,0)}: all 2^depth truncated
/// codings of the repeller, T_1 images first.
inline PointSet2D apply_branches(double beta, double tau, const PointSet2D& s) {
  PointSet2D out;
  out.points.reserve(2 * s.points.size());
  for (int i : {1, -1})
    for (const auto& p : s.points) out.points.push_back(detail::affine_t(beta, tau, i, p));
  return out;
}

inline PointSet2D sample_attractor(double beta, double tau, std::size_t depth, std::size_t max_depth = 24) {
  if (depth > max_depth)
    throw Error(Errc::budget_exceeded, "full enumeration at depth " + std::to_string(depth) + " exceeds the limit " +
                                           std::to_string(max_depth) + "; use random sampling");
  PointSet2D s;
  s.points.push_back({0.0, 0.0});
  for (std::size_t n = 0; n < depth; ++n) s = apply_branches(beta, tau, s);
  s.provenance = "attractor beta=" + std::to_string(beta) + " tau=" + std::to_string(tau) + " depth=" + std::to_string(depth);
  return s;
}

/// count random codings of length depth (i.i.d. fair signs), seeded.
inline PointSet2D sample_attractor_random(double beta, double tau, std::size_t depth, std::size_t count,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  PointSet2D s;
  s.points.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    Point2 p{0.0, 0.0};
    for (std::size_t n = 0; n < depth; ++n) p = detail::affine_t(beta, tau, coin(rng) ? 1 : -1, p);
    s.points.push_back(p);
  }
  s.provenance = "attractor-sample beta=" + std::to_string(beta) + " tau=" + std::to_string(tau) +
                 " depth=" + std::to_string(depth) + " count=" + std::to_string(count) + " seed=" + std::to_string(seed);
  return s;
}

// ---------------------------------------------------------------------------

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LinearFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw Error(Errc::degenerate_input, "regression needs two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw Error(Errc::degenerate_input, "regression abscissae coincide");
  return {sxy / sxx, my - sxy / sxx * mx};
}

/// 2^-from, ..., 2^-to.
inline std::vector<double> dyadic_ladder(int from, int to) {
  std::vector<double> eps;
  for (int k = from; k <= to; ++k) eps.push_back(std::ldexp(1.0, -k));
  return eps;
}

struct BoxCount {
  std::vector<double> epsilons;
  std::vector<std::size_t> counts;
  double slope = 0.0;  // fit of log N against log(1/eps) over the used scales
  std::size_t skipped = 0;
};

/// Occupied cells of the eps-grid anchored at (-1,-1). The skip_coarse
/// largest scales are left out of the fit.
inline BoxCount box_count(const PointSet2D& set, std::vector<double> epsilons, std::size_t skip_coarse = 2) {
  if (set.points.empty()) throw Error(Errc::degenerate_input, "empty point set");
  if (epsilons.size() < 2) throw Error(Errc::invalid_argument, "need at least two scales");
  std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
  if (epsilons.size() < skip_coarse + 2) skip_coarse = 0;
  BoxCount out;
  out.epsilons = epsilons;
  out.skipped = skip_coarse;
  std::vector<std::pair<std::int64_t, std::int64_t>> cells(set.points.size());
  for (double eps : epsilons) {
    for (std::size_t i = 0; i < set.points.size(); ++i)
      cells[i] = {static_cast<std::int64_t>(std::floor((set.points[i][0] + 1.0) / eps)),
                  static_cast<std::int64_t>(std::floor((set.points[i][1] + 1.0) / eps))};
    std::sort(cells.begin(), cells.end());
    out.counts.push_back(static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin()));
  }
  std::vector<double> xs, ys;
  for (std::size_t i = skip_coarse; i < epsilons.size(); ++i) {
    xs.push_back(std::log(1.0 / epsilons[i]));
    ys.push_back(std::log(static_cast<double>(out.counts[i])));
  }
  out.slope = ols(xs, ys).slope;
  return out;
}

// ---------------------------------------------------------------------------

/// Atoms sorted by position with their masses.
struct EmpiricalMeasure1D {
  std::vector<double> x;
  std::vector<double> mass;

  double total() const {
    CompensatedSum s;
    for (double m : mass) s.add(m);
    return s.value();
  }

  static EmpiricalMeasure1D from_atoms(std::vector<std::pair<double, double>> atoms) {
    std::sort(atoms.begin(), atoms.end());
    EmpiricalMeasure1D m;
    for (const auto& [x, w] : atoms) {
      m.x.push_back(x);
      m.mass.push_back(w);
    }
    return m;
  }
};

/// The level-n approximation of the Bernoulli convolution: each class mass
/// placed at (1-beta) times the class value.
inline EmpiricalMeasure1D convolution_histogram(const PartitionTable& t, std::size_t measure = 0) {
  if (!t.has_values()) throw Error(Errc::invalid_argument, "partition table was built without class values");
  if (measure >= t.measures().size()) throw Error(Errc::invalid_argument, "measure index out of range");
  const double scale = 1.0 - t.pisot().beta_value();
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    atoms.emplace_back(scale * 0.5 * (t.value_lo(i) + t.value_hi(i)), t.mass(i, measure));
  return EmpiricalMeasure1D::from_atoms(std::move(atoms));
}

/// Mass of [x - eps, x + eps].
inline double ball_mass(const EmpiricalMeasure1D& m, double x, double eps) {
  auto first = std::lower_bound(m.x.begin(), m.x.end(), x - eps);
  auto last = std::upper_bound(m.x.begin(), m.x.end(), x + eps);
  CompensatedSum s;
  for (auto it = first; it != last; ++it) s.add(m.mass[static_cast<std::size_t>(it - m.x.begin())]);
  return s.value();
}

/// Slope of log mu(B_eps(x)) against log eps over scales with positive mass.
inline double local_dim_estimate(const EmpiricalMeasure1D& m, double x, std::vector<double> epsilons) {
  if (epsilons.size() < 2) throw Error(Errc::invalid_argument, "need at least two scales");
  std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
  if (!(ball_mass(m, x, epsilons.front()) > 0.0))
    throw Error(Errc::empty_ball, "no mass within the largest radius of x");
  std::vector<double> xs, ys;
  for (double eps : epsilons) {
    const double mass = ball_mass(m, x, eps);
    if (mass <= 0.0) continue;
    xs.push_back(std::log(eps));
    ys.push_back(std::log(mass));
  }
  if (xs.size() < 2) return 0.0;
  return ols(xs, ys).slope;
}

/// Entropy of the measure on the eps-grid anchored at -1.
inline double grid_entropy(const EmpiricalMeasure1D& m, double eps) {
  CompensatedSum h;
  std::size_t i = 0;
  while (i < m.x.size()) {
    const auto cell = static_cast<std::int64_t>(std::floor((m.x[i] + 1.0) / eps));
    CompensatedSum w;
    while (i < m.x.size() && static_cast<std::int64_t>(std::floor((m.x[i] + 1.0) / eps)) == cell) w.add(m.mass[i++]);
    const double mass = w.value();
    if (mass > 0.0) h.add(-mass * std::log(mass));
  }
  return h.value();
}

/// Slope of the grid entropy against log(1/eps).
inline double renyi_dim_estimate(const EmpiricalMeasure1D& m, std::vector<double> epsilons) {
  if (m.x.empty()) throw Error(Errc::degenerate_input, "empty measure");
  if (epsilons.size() < 2) throw Error(Errc::invalid_argument, "need at least two scales");
  std::vector<double> xs, ys;
  for (double eps : epsilons) {
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(grid_entropy(m, eps));
  }
  return ols(xs, ys).slope;
}

}  // namespace pvdim
