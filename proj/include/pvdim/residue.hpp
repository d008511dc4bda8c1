#pragma once

// Exact arithmetic in Z[alpha]. An element c_0 + c_1 alpha + ... +
// c_{d-1} alpha^{d-1} is stored by its coefficient vector; since the minimal
// polynomial has degree d, two elements are equal iff their vectors are.
//
// A sign string (i_0, ..., i_{n-1}) maps to the alpha-scaled sum
// sum_k i_k alpha^{n-1-k} = alpha^{n-1} * sum_k i_k beta^k, built by the Horner
// step  state <- state * alpha + i_k  followed by reduction modulo the
// minimal polynomial.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "pvdim/numeric.hpp"
#include "pvdim/pisot.hpp"

namespace pvdim {

struct AlgebraicResidue {
  std::vector<BigInt> coeffs;

  friend bool operator==(const AlgebraicResidue&, const AlgebraicResidue&) = default;
  friend auto operator<=>(const AlgebraicResidue& a, const AlgebraicResidue& b) {
    return std::lexicographical_compare_three_way(a.coeffs.begin(), a.coeffs.end(), b.coeffs.begin(), b.coeffs.end(),
                                                  [](const BigInt& x, const BigInt& y) {
                                                    return x < y   ? std::strong_ordering::less
                                                           : y < x ? std::strong_ordering::greater
                                                                   : std::strong_ordering::equal;
                                                  });
  }

  bool is_zero() const {
    for (const auto& c : coeffs)
      if (c != 0) return false;
    return true;
  }

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i ? "," : "") << coeffs[i];
    os << ']';
    return os.str();
  }
};

namespace detail {

/// Low coefficients a_0..a_{d-1} of the monic minimal polynomial as int64,
/// or empty when they do not fit.
inline std::vector<std::int64_t> small_minpoly(const IntPolynomial& p) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < p.degree(); ++i) {
    if (p[i] > std::numeric_limits<std::int64_t>::max() || p[i] < std::numeric_limits<std::int64_t>::min()) return {};
    out.push_back(p[i].convert_to<std::int64_t>());
  }
  return out;
}

/// out <- in * alpha + sign, reduced. Returns false on int64 overflow.
inline bool horner_step(std::span<const std::int64_t> in, std::span<std::int64_t> out,
                        std::span<const std::int64_t> low, int sign) noexcept {
  const std::size_t d = low.size();
  const std::int64_t top = in[d - 1];
  for (std::size_t j = d; j-- > 0;) {
    std::int64_t prod;
    if (__builtin_mul_overflow(low[j], top, &prod)) return false;
    const std::int64_t prev = j == 0 ? static_cast<std::int64_t>(sign) : in[j - 1];
    if (__builtin_sub_overflow(prev, prod, &out[j])) return false;
  }
  return true;
}

inline void horner_step(std::span<const BigInt> in, std::span<BigInt> out, std::span<const BigInt> low, int sign) {
  const std::size_t d = low.size();
  const BigInt top = in[d - 1];
  for (std::size_t j = d; j-- > 0;) {
    const BigInt prev = j == 0 ? BigInt(sign) : in[j - 1];
    out[j] = prev - low[j] * top;
  }
}

}  // namespace detail

/// Residue of sum_k signs[k] alpha^{n-1-k}.
inline AlgebraicResidue residue_from_signs(const PisotNumber& p, std::span<const int> signs) {
  if (signs.empty()) throw Error(Errc::invalid_argument, "empty sign string");
  const std::size_t d = p.degree();
  std::vector<BigInt> low(p.minpoly().coeffs().begin(), p.minpoly().coeffs().end() - 1);
  std::vector<BigInt> state(d), next(d);
  for (int s : signs) {
    if (s != 1 && s != -1) throw Error(Errc::invalid_argument, "signs must be +1 or -1");
    detail::horner_step(state, next, low, s);
    state.swap(next);
  }
  return {std::move(state)};
}

inline AlgebraicResidue residue_from_signs(const PisotNumber& p, std::initializer_list<int> signs) {
  std::vector<int> v(signs);
  return residue_from_signs(p, std::span<const int>(v));
}

/// Certified enclosure of c_0 + c_1 alpha + ... at the given precision.
inline Interval residue_eval(const PisotNumber& p, const AlgebraicResidue& r, mpfr_prec_t bits) {
  if (bits < 32) throw Error(Errc::invalid_argument, "residue_eval needs at least 32 bits");
  const Interval a = p.alpha(bits);
  Interval acc(r.coeffs.back(), bits);
  for (std::size_t j = r.coeffs.size() - 1; j-- > 0;) acc = acc * a + Interval(r.coeffs[j], bits);
  return acc;
}

/// Enclosure of the unscaled sum sum_k i_k beta^k for a residue built from a
/// length-n string: residue value times beta^{n-1}.
inline Interval unscaled_value(const PisotNumber& p, const AlgebraicResidue& r, std::size_t n, mpfr_prec_t bits) {
  return residue_eval(p, r, bits) * pow(p.beta(bits), static_cast<unsigned long>(n - 1));
}

}  // namespace pvdim
