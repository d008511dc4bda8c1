#pragma once

// PV-number verification, power-trace diagnostics and the catalog of
// reciprocals of PV numbers used throughout the toolkit.
//
// Roots are located with companion-matrix eigenvalues, polished by
// Durand-Kerner iteration in MPFR, then certified with Weierstrass inclusion
// discs: for monic p with distinct approximations z_i and corrections
// W_i = p(z_i) / prod_{j != i} (z_i - z_j), every root lies in some disc
// |z - z_i| <= d |W_i|, and a disc disjoint from the others holds exactly one
// root. The W_i are evaluated in outward-rounded interval arithmetic.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pvdim/error.hpp"
#include "pvdim/numeric.hpp"
#include "pvdim/polynomial.hpp"

namespace pvdim {

enum class Side { alpha, beta };

struct VerifyOptions {
  double margin = 1e-9;
  mpfr_prec_t bits = kDefaultBits;
  mpfr_prec_t max_bits = 4096;
};

class PisotNumber;
PisotNumber verify_pisot(const IntPolynomial& poly, const VerifyOptions& opts = {});
namespace detail {
inline PisotNumber certify_at(const IntPolynomial& poly, const VerifyOptions& opts, mpfr_prec_t bits);
}

/// A certified PV number alpha > 1 with its reciprocal beta = 1/alpha.
/// Immutable; every accessor is const and thread-safe.
class PisotNumber {
 public:
  const IntPolynomial& minpoly() const noexcept { return minpoly_; }
  std::size_t degree() const noexcept { return minpoly_.degree(); }

  /// Enclosure of alpha of width about 2^-bits * alpha.
  Interval alpha(mpfr_prec_t bits) const {
    if (bits <= alpha_.bits()) return alpha_;
    return refine_alpha(bits);
  }
  Interval beta(mpfr_prec_t bits) const { return Interval(1L, bits) / alpha(bits); }
  const Interval& alpha() const noexcept { return alpha_; }
  const Interval& beta() const noexcept { return beta_; }
  double alpha_value() const { return alpha_.mid(); }
  double beta_value() const { return beta_.mid(); }

  /// Certified upper bounds on the moduli of the other roots.
  const std::vector<double>& conjugate_moduli() const noexcept { return conjugate_moduli_; }
  /// Largest conjugate modulus (0 when the degree is 1).
  double theta() const noexcept { return theta_; }
  /// A constant b < 1 with ||alpha^n||_Z <= b^n for every n >= 0.
  double b1_theta() const noexcept { return b1_theta_; }
  double margin() const noexcept { return margin_; }

 private:
  friend PisotNumber verify_pisot(const IntPolynomial&, const VerifyOptions&);
  friend PisotNumber detail::certify_at(const IntPolynomial&, const VerifyOptions&, mpfr_prec_t);
  PisotNumber() = default;

  Interval refine_alpha(mpfr_prec_t bits) const;

  IntPolynomial minpoly_;
  Interval alpha_;
  Interval beta_;
  std::vector<double> conjugate_moduli_;
  double theta_ = 0.0;
  double b1_theta_ = 0.0;
  double margin_ = 0.0;
};

namespace detail {

struct ComplexReal {
  Real re;
  Real im;
};

inline ComplexReal cmul(const ComplexReal& a, const ComplexReal& b, mpfr_prec_t bits) {
  Real t1(bits), t2(bits);
  ComplexReal r{Real(bits), Real(bits)};
  mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(r.re.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_mul(t1.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), t1.get(), t2.get(), MPFR_RNDN);
  return r;
}

inline ComplexReal cdiv(const ComplexReal& a, const ComplexReal& b, mpfr_prec_t bits) {
  Real den(bits), t(bits);
  mpfr_sqr(den.get(), b.re.get(), MPFR_RNDN);
  mpfr_sqr(t.get(), b.im.get(), MPFR_RNDN);
  mpfr_add(den.get(), den.get(), t.get(), MPFR_RNDN);
  ComplexReal conj{b.re, Real(bits)};
  mpfr_neg(conj.im.get(), b.im.get(), MPFR_RNDN);
  ComplexReal r = cmul(a, conj, bits);
  mpfr_div(r.re.get(), r.re.get(), den.get(), MPFR_RNDN);
  mpfr_div(r.im.get(), r.im.get(), den.get(), MPFR_RNDN);
  return r;
}

inline ComplexReal cpoly(const IntPolynomial& p, const ComplexReal& z, mpfr_prec_t bits) {
  const auto& c = p.coeffs();
  ComplexReal acc{Real(bits), Real(bits)};
  mpfr_set_z(acc.re.get(), c.back().backend().data(), MPFR_RNDN);
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    acc = cmul(acc, z, bits);
    Real k(bits);
    mpfr_set_z(k.get(), c[i].backend().data(), MPFR_RNDN);
    mpfr_add(acc.re.get(), acc.re.get(), k.get(), MPFR_RNDN);
  }
  return acc;
}

inline std::vector<std::complex<double>> companion_roots(const IntPolynomial& p) {
  const std::size_t d = p.degree();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 1; i < d; ++i) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < d; ++i)
    c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -p[i].convert_to<double>();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(c, false);
  std::vector<std::complex<double>> roots;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) roots.push_back(solver.eigenvalues()[i]);
  return roots;
}

// Durand-Kerner polish of all roots at the given precision.
inline std::vector<ComplexReal> polish_roots(const IntPolynomial& p, const std::vector<std::complex<double>>& start,
                                             mpfr_prec_t bits) {
  const std::size_t d = start.size();
  std::vector<ComplexReal> z;
  for (std::size_t i = 0; i < d; ++i) {
    // Nudge exact duplicates apart; Durand-Kerner needs distinct iterates.
    double jitter = 1e-7 * static_cast<double>(i);
    z.push_back({Real(start[i].real() + jitter, bits), Real(start[i].imag() + jitter * 0.5, bits)});
  }
  Real tol(bits), step(bits), t(bits);
  mpfr_set_ui_2exp(tol.get(), 1, -static_cast<long>(bits) + 8, MPFR_RNDN);
  for (int iter = 0; iter < 500; ++iter) {
    mpfr_set_zero(step.get(), 1);
    for (std::size_t i = 0; i < d; ++i) {
      ComplexReal den{Real(1.0, bits), Real(bits)};
      for (std::size_t j = 0; j < d; ++j) {
        if (j == i) continue;
        ComplexReal diff{Real(bits), Real(bits)};
        mpfr_sub(diff.re.get(), z[i].re.get(), z[j].re.get(), MPFR_RNDN);
        mpfr_sub(diff.im.get(), z[i].im.get(), z[j].im.get(), MPFR_RNDN);
        den = cmul(den, diff, bits);
      }
      if (mpfr_zero_p(den.re.get()) && mpfr_zero_p(den.im.get())) continue;
      ComplexReal w = cdiv(cpoly(p, z[i], bits), den, bits);
      mpfr_sub(z[i].re.get(), z[i].re.get(), w.re.get(), MPFR_RNDN);
      mpfr_sub(z[i].im.get(), z[i].im.get(), w.im.get(), MPFR_RNDN);
      mpfr_hypot(t.get(), w.re.get(), w.im.get(), MPFR_RNDN);
      mpfr_max(step.get(), step.get(), t.get(), MPFR_RNDN);
    }
    if (mpfr_lessequal_p(step.get(), tol.get())) break;
  }
  // Snap numerically real roots onto the axis so their discs are symmetric.
  Real snap(bits);
  mpfr_set_ui_2exp(snap.get(), 1, -static_cast<long>(bits) / 2, MPFR_RNDN);
  for (auto& r : z) {
    mpfr_abs(t.get(), r.im.get(), MPFR_RNDN);
    if (mpfr_lessequal_p(t.get(), snap.get())) mpfr_set_zero(r.im.get(), 1);
  }
  return z;
}

struct RootDisc {
  ComplexInterval center;  // point enclosure of the approximation
  Real radius;
  Real modulus_lower;
  Real modulus_upper;
  bool real_axis;
};

// Throws Indeterminate when the discs are not pairwise disjoint.
inline std::vector<RootDisc> certify_roots(const IntPolynomial& p, const std::vector<ComplexReal>& z, mpfr_prec_t bits) {
  const std::size_t d = z.size();
  std::vector<ComplexInterval> c;
  for (const auto& r : z)
    c.push_back({Interval::from_bounds(r.re, r.re), Interval::from_bounds(r.im, r.im)});
  std::vector<RootDisc> discs;
  for (std::size_t i = 0; i < d; ++i) {
    ComplexInterval den{Interval(1L, bits), Interval(0L, bits)};
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) den = den * (c[i] - c[j]);
    Real num = p.eval(c[i]).abs_upper();
    Real dl = den.abs_lower();
    if (mpfr_zero_p(dl.get())) throw Error(Errc::indeterminate, "coincident root approximations");
    RootDisc disc{c[i], Real(bits), Real(bits), Real(bits), mpfr_zero_p(z[i].im.get()) != 0};
    mpfr_div(disc.radius.get(), num.get(), dl.get(), MPFR_RNDU);
    mpfr_mul_ui(disc.radius.get(), disc.radius.get(), static_cast<unsigned long>(d), MPFR_RNDU);
    Real m_lo = c[i].abs_lower(), m_hi = c[i].abs_upper();
    mpfr_sub(disc.modulus_lower.get(), m_lo.get(), disc.radius.get(), MPFR_RNDD);
    mpfr_add(disc.modulus_upper.get(), m_hi.get(), disc.radius.get(), MPFR_RNDU);
    discs.push_back(std::move(disc));
  }
  Real sum(bits);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      Real sep = (c[i] - c[j]).abs_lower();
      mpfr_add(sum.get(), discs[i].radius.get(), discs[j].radius.get(), MPFR_RNDU);
      if (!mpfr_greater_p(sep.get(), sum.get()))
        throw Error(Errc::indeterminate, "root inclusion discs overlap at " + std::to_string(bits) + " bits");
    }
  }
  return discs;
}

// Integer roots of a monic integer polynomial divide the constant term.
inline std::optional<BigInt> integer_root(const IntPolynomial& p) {
  const BigInt& a0 = p[0];
  if (a0 == 0) return BigInt(0);
  BigInt mag = a0 < 0 ? BigInt(-a0) : a0;
  if (mag > 1000000) return std::nullopt;
  const long m = mag.convert_to<long>();
  auto is_root = [&](long r) {
    BigInt acc = p.leading();
    for (std::size_t i = p.degree(); i-- > 0;) acc = acc * r + p[i];
    return acc == 0;
  };
  for (long r = 1; r <= m; ++r) {
    if (m % r != 0) continue;
    if (is_root(r)) return BigInt(r);
    if (is_root(-r)) return BigInt(-r);
  }
  return std::nullopt;
}

// Smallest b >= theta with min(1/2, (d-1) theta^n) <= b^n for all n >= 1.
inline double b1_constant(double theta, std::size_t degree) {
  if (degree <= 1 || theta <= 0.0) return 0.0;
  const double k = static_cast<double>(degree - 1);
  double best = theta;
  for (int n = 1; n < 100000; ++n) {
    const double trace = k * std::pow(theta, n);
    const double term = std::pow(std::min(0.5, trace), 1.0 / n);
    best = std::max(best, term);
    if (trace <= 0.5) break;
  }
  return std::nextafter(best * (1.0 + 1e-12), 2.0);
}

}  // namespace detail

inline Interval PisotNumber::refine_alpha(mpfr_prec_t bits) const {
  // Newton from the stored midpoint, then certify a sign change inside the
  // isolating interval.
  Real x = alpha_.mid_real();
  mpfr_prec_round(x.get(), bits, MPFR_RNDN);
  for (int iter = 0; iter < 64; ++iter) {
    Interval xi = Interval::from_bounds(x, x);
    Interval fx = minpoly_.eval(xi);
    // Derivative via the coefficient list.
    const auto& c = minpoly_.coeffs();
    Interval df(0L, bits);
    for (std::size_t i = c.size() - 1; i >= 1; --i) {
      df = df * xi + Interval(BigInt(c[i] * static_cast<long>(i)), bits);
      if (i == 1) break;
    }
    Real step(bits);
    mpfr_div(step.get(), fx.mid_real().get(), df.mid_real().get(), MPFR_RNDN);
    mpfr_sub(x.get(), x.get(), step.get(), MPFR_RNDN);
    if (mpfr_zero_p(step.get()) || mpfr_get_exp(step.get()) < mpfr_get_exp(x.get()) - static_cast<long>(bits) + 2)
      break;
  }
  Real delta(bits);
  mpfr_mul_2si(delta.get(), x.get(), -static_cast<long>(bits) + 4, MPFR_RNDU);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Real lo(bits), hi(bits);
    mpfr_sub(lo.get(), x.get(), delta.get(), MPFR_RNDD);
    mpfr_add(hi.get(), x.get(), delta.get(), MPFR_RNDU);
    Interval flo = minpoly_.eval(Interval::from_bounds(lo, lo));
    Interval fhi = minpoly_.eval(Interval::from_bounds(hi, hi));
    const bool sign_change = (flo.negative() && fhi.positive()) || (flo.positive() && fhi.negative());
    // Every other root has modulus < 1, so a sign change above 1 isolates alpha.
    const bool inside = mpfr_cmp_ui(lo.get(), 1) > 0;
    if (sign_change && inside) return Interval::from_bounds(lo, hi);
    mpfr_mul_2ui(delta.get(), delta.get(), 1, MPFR_RNDU);
  }
  throw Error(Errc::precision_exhausted, "could not refine alpha to " + std::to_string(bits) + " bits");
}

inline PisotNumber verify_pisot(const IntPolynomial& poly, const VerifyOptions& opts) {
  if (!poly.monic()) throw Error(Errc::not_monic, poly.pretty() + " is not monic");
  if (poly.degree() < 1) throw Error(Errc::invalid_argument, "constant polynomial");
  if (!(opts.margin > 0.0 && opts.margin < 1.0)) throw Error(Errc::invalid_argument, "margin must lie in (0,1)");

  if (poly.degree() == 1) {
    BigInt root = -poly[0];
    if (root <= 1) throw Error(Errc::not_pisot, poly.pretty() + " has root " + root.str() + " <= 1");
    PisotNumber p;
    p.minpoly_ = poly;
    p.alpha_ = Interval(root, opts.bits);
    p.beta_ = Interval(1L, opts.bits) / p.alpha_;
    p.margin_ = opts.margin;
    return p;
  }

  if (auto r = detail::integer_root(poly))
    throw Error(Errc::reducible, poly.pretty() + " has the integer root " + r->str());

  Error last(Errc::indeterminate, "no attempt made");
  for (mpfr_prec_t bits = std::max<mpfr_prec_t>(opts.bits, 64); bits <= opts.max_bits; bits *= 2) {
    try {
      return detail::certify_at(poly, opts, bits);
    } catch (const Error& e) {
      if (e.code() != Errc::indeterminate) throw;
      last = e;
    }
  }
  throw last;
}

namespace detail {

inline PisotNumber certify_at(const IntPolynomial& poly, const VerifyOptions& opts, mpfr_prec_t bits) {
  auto z = polish_roots(poly, companion_roots(poly), bits);
  auto discs = certify_roots(poly, z, bits);

  // Dominant candidate: largest approximate modulus.
  std::size_t dom = 0;
  for (std::size_t i = 1; i < discs.size(); ++i)
    if (mpfr_greater_p(discs[i].modulus_upper.get(), discs[dom].modulus_upper.get())) dom = i;

  const RootDisc& a = discs[dom];
  Real one(1.0, bits);
  if (!mpfr_greater_p(a.modulus_lower.get(), one.get())) {
    if (mpfr_lessequal_p(a.modulus_upper.get(), one.get()))
      throw Error(Errc::not_pisot, poly.pretty() + " has no root of modulus > 1");
    throw Error(Errc::indeterminate, "dominant root modulus straddles 1");
  }
  if (!a.real_axis) throw Error(Errc::not_pisot, poly.pretty() + ": dominant root is not real");
  if (mpfr_sgn(a.center.re.lo().get()) < 0) throw Error(Errc::not_pisot, poly.pretty() + ": dominant root is negative");

  Real limit(bits);
  mpfr_set_d(limit.get(), 1.0 - opts.margin, MPFR_RNDD);
  std::vector<double> moduli;
  for (std::size_t i = 0; i < discs.size(); ++i) {
    if (i == dom) continue;
    if (mpfr_greaterequal_p(discs[i].modulus_lower.get(), one.get()))
      throw Error(Errc::not_pisot, poly.pretty() + ": a conjugate has modulus >= 1");
    if (!mpfr_lessequal_p(discs[i].modulus_upper.get(), limit.get()))
      throw Error(Errc::indeterminate, "conjugate modulus not certified below 1 - margin");
    moduli.push_back(discs[i].modulus_upper.to_double(MPFR_RNDU));
  }

  PisotNumber p;
  p.minpoly_ = poly;
  Real lo(bits), hi(bits);
  mpfr_sub(lo.get(), a.center.re.lo().get(), a.radius.get(), MPFR_RNDD);
  mpfr_add(hi.get(), a.center.re.hi().get(), a.radius.get(), MPFR_RNDU);
  p.alpha_ = Interval::from_bounds(lo, hi);
  p.alpha_ = p.refine_alpha(bits);
  p.beta_ = Interval(1L, bits) / p.alpha_;
  p.conjugate_moduli_ = std::move(moduli);
  p.theta_ = p.conjugate_moduli_.empty() ? 0.0 : *std::max_element(p.conjugate_moduli_.begin(), p.conjugate_moduli_.end());
  p.b1_theta_ = b1_constant(p.theta_, poly.degree());
  p.margin_ = opts.margin;
  return p;
}

}  // namespace detail

/// Monic alpha-side polynomial for an input given on either side.
inline IntPolynomial to_alpha_side(const IntPolynomial& poly, Side side) {
  return side == Side::alpha ? poly : poly.reciprocal();
}

/// Tries the alpha side first, then the reciprocal. Returns the certified
/// number and the side that worked.
inline std::pair<PisotNumber, Side> verify_pisot_auto(const IntPolynomial& poly, const VerifyOptions& opts = {}) {
  std::optional<Error> first;
  try {
    return {verify_pisot(poly, opts), Side::alpha};
  } catch (const Error& e) {
    if (e.code() == Errc::indeterminate) throw;
    first = e;
  }
  try {
    return {verify_pisot(poly.reciprocal(), opts), Side::beta};
  } catch (const Error&) {
    throw *first;
  }
}

// ---------------------------------------------------------------------------
// Integer power sums and near-integer powers.

/// s_k = sum of k-th powers of all roots, k = 0..n, via Newton's identities.
inline std::vector<BigInt> power_sums(const IntPolynomial& monic, std::size_t n) {
  const std::size_t d = monic.degree();
  // e-coefficients: p(x) = x^d + a_{d-1} x^{d-1} + ... + a_0
  auto a = [&](std::size_t k) -> const BigInt& { return monic[d - k]; };  // coefficient of x^{d-k}
  std::vector<BigInt> s(n + 1);
  s[0] = static_cast<long>(d);
  for (std::size_t k = 1; k <= n; ++k) {
    BigInt acc = 0;
    const std::size_t lim = std::min(k - 1, d);
    for (std::size_t j = 1; j <= lim; ++j) acc += a(j) * s[k - j];
    if (k <= d) acc += a(k) * static_cast<long>(k);
    s[k] = -acc;
  }
  return s;
}

struct PowerTrace {
  std::size_t n = 0;
  BigInt trace;              // s_n, an integer within (d-1) theta^n of alpha^n
  Interval remainder;        // alpha^n - s_n
  Interval distance;         // ||alpha^n||_Z
  double bound = 0.0;        // b1_theta^n
  double trace_bound = 0.0;  // (d-1) theta^n, bound on |remainder|
  bool within_bound = false;
};

inline PowerTrace power_trace_distance(const PisotNumber& p, std::size_t n, mpfr_prec_t base_bits = kDefaultBits,
                                       mpfr_prec_t max_bits = 1 << 16) {
  PowerTrace out;
  out.n = n;
  out.trace = power_sums(p.minpoly(), n)[n];
  const double theta = std::max(p.theta(), 1e-300);
  const double need = 64.0 + static_cast<double>(n) * (std::log2(p.alpha_value()) + std::max(1.0, -std::log2(theta)));
  const auto bits = std::max<mpfr_prec_t>(base_bits, static_cast<mpfr_prec_t>(std::ceil(need)));
  if (bits > max_bits)
    throw Error(Errc::precision_exhausted, "alpha^" + std::to_string(n) + " needs " + std::to_string(bits) + " bits");
  Interval power = pow(p.alpha(bits), static_cast<unsigned long>(n));
  out.remainder = power - Interval(out.trace, bits);
  // Nearest integer from the enclosure midpoint.
  BigInt nearest;
  {
    Real m = power.mid_real();
    mpfr_get_z(nearest.backend().data(), m.get(), MPFR_RNDN);
  }
  out.distance = abs(power - Interval(nearest, bits));
  if (out.distance.upper() > 0.5) throw Error(Errc::precision_exhausted, "nearest integer of alpha^n not resolved");
  out.bound = std::pow(p.b1_theta(), static_cast<double>(n));
  out.trace_bound = static_cast<double>(p.degree() - 1) * std::pow(p.theta(), static_cast<double>(n));
  out.within_bound = out.distance.lower() <= out.bound * (1.0 + 1e-12) + 1e-300;
  return out;
}

// ---------------------------------------------------------------------------

struct Table1Row {
  int row = 0;                       // 1-based row of the printed table
  int family_n = 0;                  // n for x^n + ... + x - 1 rows, else 0
  IntPolynomial poly;                // as printed
  Side side = Side::beta;            // which root the printed value refers to
  std::optional<double> printed_beta;
  std::string printed_text;
};

/// Reciprocals of PV numbers: six explicit rows plus the family
/// x^n + x^{n-1} + ... + x - 1 for n = 2..8.
inline std::vector<Table1Row> table1_catalog() {
  std::vector<Table1Row> rows;
  rows.push_back({1, 0, IntPolynomial{-1, 1, 1}, Side::beta, 0.6180339887498949, "(sqrt(5)-1)/2"});
  rows.push_back({2, 0, IntPolynomial{-1, 1, 1, 1}, Side::beta, 0.5436898, "0.5436898"});
  rows.push_back({3, 0, IntPolynomial{-1, 0, 1, 1}, Side::beta, 0.754877, "0.754877"});
  rows.push_back({4, 0, IntPolynomial{-1, 1, 0, 1}, Side::beta, 0.6823278, "0.6823278"});
  rows.push_back({5, 0, IntPolynomial{-1, 2, -1, 1}, Side::beta, 0.5698403, "0.5698403"});
  // Printed with the PV root itself; its reciprocal is the listed decimal.
  rows.push_back({6, 0, IntPolynomial{-1, 0, 0, -1, 1}, Side::alpha, 0.7244918, "0.7244918"});
  for (int n = 2; n <= 8; ++n) {
    std::vector<BigInt> c(static_cast<std::size_t>(n) + 1, BigInt(1));
    c[0] = -1;
    rows.push_back({7, n, IntPolynomial(std::move(c)), Side::beta, std::nullopt, "r_" + std::to_string(n)});
  }
  return rows;
}

inline PisotNumber golden_ratio() { return verify_pisot(IntPolynomial{-1, -1, 1}); }

}  // namespace pvdim
