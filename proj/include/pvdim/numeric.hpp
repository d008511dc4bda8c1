#pragma once

// Multiprecision building blocks: GMP integers and MPFR reals, plus an
// outward-rounded interval type used for every certified comparison in the
// library. Each Interval owns two MPFR values and every operation rounds the
// lower end down and the upper end up, so the true value is always enclosed.

#include <mpfr.h>

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "pvdim/error.hpp"

namespace pvdim {

using BigInt = boost::multiprecision::mpz_int;

inline constexpr mpfr_prec_t kDefaultBits = 128;

class Real {
 public:
  explicit Real(mpfr_prec_t bits = kDefaultBits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  Real(double x, mpfr_prec_t bits) : Real(bits) { mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(const Real& o) : Real(mpfr_get_prec(o.v_)) { mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept : Real(MPFR_PREC_MIN) { mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_prec_t bits() const noexcept { return mpfr_get_prec(v_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }

  std::string to_string(int digits = 20) const {
    std::string buf(static_cast<std::size_t>(digits) + 32, '\0');
    int len = mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    buf.resize(static_cast<std::size_t>(std::max(len, 0)));
    return buf;
  }

 private:
  mpfr_t v_;
};

class Interval {
 public:
  explicit Interval(mpfr_prec_t bits = kDefaultBits) : lo_(bits), hi_(bits) {}

  Interval(long x, mpfr_prec_t bits) : lo_(bits), hi_(bits) {
    mpfr_set_si(lo_.get(), x, MPFR_RNDD);
    mpfr_set_si(hi_.get(), x, MPFR_RNDU);
  }

  Interval(const BigInt& x, mpfr_prec_t bits) : lo_(bits), hi_(bits) {
    mpfr_set_z(lo_.get(), x.backend().data(), MPFR_RNDD);
    mpfr_set_z(hi_.get(), x.backend().data(), MPFR_RNDU);
  }

  static Interval from_double(double x, mpfr_prec_t bits) {
    Interval r(bits);
    mpfr_set_d(r.lo_.get(), x, MPFR_RNDD);
    mpfr_set_d(r.hi_.get(), x, MPFR_RNDU);
    return r;
  }

  static Interval from_bounds(const Real& lo, const Real& hi) {
    Interval r(std::max(lo.bits(), hi.bits()));
    mpfr_set(r.lo_.get(), lo.get(), MPFR_RNDD);
    mpfr_set(r.hi_.get(), hi.get(), MPFR_RNDU);
    return r;
  }

  // Decimal literal, e.g. "0.1"; both ends rounded outward.
  static Interval from_string(const std::string& s, mpfr_prec_t bits) {
    Interval r(bits);
    mpfr_set_str(r.lo_.get(), s.c_str(), 10, MPFR_RNDD);
    mpfr_set_str(r.hi_.get(), s.c_str(), 10, MPFR_RNDU);
    return r;
  }

  static Interval pi(mpfr_prec_t bits) {
    Interval r(bits);
    mpfr_const_pi(r.lo_.get(), MPFR_RNDD);
    mpfr_const_pi(r.hi_.get(), MPFR_RNDU);
    return r;
  }

  const Real& lo() const noexcept { return lo_; }
  const Real& hi() const noexcept { return hi_; }
  mpfr_prec_t bits() const noexcept { return std::max(lo_.bits(), hi_.bits()); }

  double lower() const { return lo_.to_double(MPFR_RNDD); }
  double upper() const { return hi_.to_double(MPFR_RNDU); }
  double mid() const {
    Real m(bits() + 1);
    mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m.to_double();
  }
  Real mid_real() const {
    Real m(bits() + 1);
    mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m;
  }
  // Upper bound on hi - lo.
  double width() const {
    Real w(bits());
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return w.to_double(MPFR_RNDU);
  }
  Real width_real() const {
    Real w(bits());
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return w;
  }

  bool positive() const noexcept { return mpfr_sgn(lo_.get()) > 0; }
  bool negative() const noexcept { return mpfr_sgn(hi_.get()) < 0; }
  bool contains_zero() const noexcept { return !positive() && !negative(); }
  bool certainly_less(const Interval& o) const noexcept { return mpfr_less_p(hi_.get(), o.lo_.get()); }
  bool certainly_greater(const Interval& o) const noexcept { return o.certainly_less(*this); }
  bool contains(double x) const noexcept {
    return mpfr_cmp_d(lo_.get(), x) <= 0 && mpfr_cmp_d(hi_.get(), x) >= 0;
  }

  friend Interval operator-(const Interval& a) {
    Interval r(a.bits());
    mpfr_neg(r.lo_.get(), a.hi_.get(), MPFR_RNDD);
    mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDU);
    return r;
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval r(std::max(a.bits(), b.bits()));
    mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
  }

  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval r(std::max(a.bits(), b.bits()));
    mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return r;
  }

  friend Interval operator*(const Interval& a, const Interval& b) {
    const mpfr_prec_t bits = std::max(a.bits(), b.bits());
    Interval r(bits);
    Real t(bits);
    bool first = true;
    for (const Real* x : {&a.lo_, &a.hi_}) {
      for (const Real* y : {&b.lo_, &b.hi_}) {
        mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
        if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
        mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
        if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
        first = false;
      }
    }
    return r;
  }

  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw Error(Errc::domain_error, "interval division by an enclosure of zero");
    const mpfr_prec_t bits = std::max(a.bits(), b.bits());
    Interval r(bits);
    Real t(bits);
    bool first = true;
    for (const Real* x : {&a.lo_, &a.hi_}) {
      for (const Real* y : {&b.lo_, &b.hi_}) {
        mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDD);
        if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
        mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDU);
        if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
        first = false;
      }
    }
    return r;
  }

  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator-=(const Interval& o) { return *this = *this - o; }
  Interval& operator*=(const Interval& o) { return *this = *this * o; }

  // Smallest interval containing both.
  friend Interval hull(const Interval& a, const Interval& b) {
    Interval r(std::max(a.bits(), b.bits()));
    mpfr_min(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_max(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
  }

  friend Interval abs(const Interval& a) {
    if (!a.negative() && !a.positive()) {
      Interval r(a.bits());
      mpfr_set_zero(r.lo_.get(), 1);
      Real t(a.bits());
      mpfr_neg(t.get(), a.lo_.get(), MPFR_RNDU);
      mpfr_max(r.hi_.get(), t.get(), a.hi_.get(), MPFR_RNDU);
      return r;
    }
    return a.negative() ? -a : a;
  }

  friend Interval sqrt(const Interval& a) {
    Interval r(a.bits());
    if (mpfr_sgn(a.lo_.get()) < 0) {
      mpfr_set_zero(r.lo_.get(), 1);
    } else {
      mpfr_sqrt(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    }
    mpfr_sqrt(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
  }

  friend Interval log(const Interval& a) {
    if (!a.positive()) throw Error(Errc::domain_error, "log of a non-positive enclosure");
    Interval r(a.bits());
    mpfr_log(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_log(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
  }

  friend Interval exp(const Interval& a) {
    Interval r(a.bits());
    mpfr_exp(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_exp(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
  }

  friend Interval pow(const Interval& a, unsigned long n) {
    Interval result(1L, a.bits());
    Interval base = a;
    // Square-and-multiply loses the even-power sign information, so handle
    // straddling-zero bases through |a|.
    if (a.contains_zero() && n % 2 == 0) base = abs(a);
    while (n > 0) {
      if (n & 1UL) result *= base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return result;
  }

 private:
  Real lo_;
  Real hi_;
};

struct ComplexInterval {
  Interval re;
  Interval im;

  friend ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }

  // Upper bound of |z| over the rectangle.
  Real abs_upper() const {
    const mpfr_prec_t bits = std::max(re.bits(), im.bits());
    Real a = magnitude(re, bits), b = magnitude(im, bits), r(bits);
    mpfr_sqr(a.get(), a.get(), MPFR_RNDU);
    mpfr_sqr(b.get(), b.get(), MPFR_RNDU);
    mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDU);
    mpfr_sqrt(r.get(), r.get(), MPFR_RNDU);
    return r;
  }

  // Lower bound of |z| over the rectangle.
  Real abs_lower() const {
    const mpfr_prec_t bits = std::max(re.bits(), im.bits());
    Real a = mignitude(re, bits), b = mignitude(im, bits), r(bits);
    mpfr_sqr(a.get(), a.get(), MPFR_RNDD);
    mpfr_sqr(b.get(), b.get(), MPFR_RNDD);
    mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDD);
    mpfr_sqrt(r.get(), r.get(), MPFR_RNDD);
    return r;
  }

 private:
  static Real magnitude(const Interval& x, mpfr_prec_t bits) {
    Real a(bits), b(bits);
    mpfr_abs(a.get(), x.lo().get(), MPFR_RNDU);
    mpfr_abs(b.get(), x.hi().get(), MPFR_RNDU);
    mpfr_max(a.get(), a.get(), b.get(), MPFR_RNDU);
    return a;
  }
  static Real mignitude(const Interval& x, mpfr_prec_t bits) {
    Real a(bits);
    if (x.contains_zero()) return a;
    Real b(bits);
    mpfr_abs(a.get(), x.lo().get(), MPFR_RNDD);
    mpfr_abs(b.get(), x.hi().get(), MPFR_RNDD);
    mpfr_min(a.get(), a.get(), b.get(), MPFR_RNDD);
    return a;
  }
};

}  // namespace pvdim
