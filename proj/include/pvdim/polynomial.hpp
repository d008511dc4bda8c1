#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "pvdim/error.hpp"
#include "pvdim/numeric.hpp"

namespace pvdim {

/// Integer polynomial with coefficients in ascending degree order.
/// Trailing zero coefficients are stripped on construction, so the leading
/// coefficient is nonzero (except for the zero polynomial, which is rejected).
class IntPolynomial {
 public:
  IntPolynomial() = default;

  explicit IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    if (coeffs_.empty()) throw Error(Errc::invalid_argument, "zero polynomial");
  }

  IntPolynomial(std::initializer_list<long> coeffs)
      : IntPolynomial(std::vector<BigInt>(coeffs.begin(), coeffs.end())) {}

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }
  const BigInt& operator[](std::size_t i) const { return coeffs_.at(i); }
  const BigInt& leading() const { return coeffs_.back(); }
  bool monic() const { return leading() == 1; }

  /// x^d p(1/x), negated if that makes it monic. Maps a polynomial with root r
  /// to one with root 1/r.
  IntPolynomial reciprocal() const {
    std::vector<BigInt> rev(coeffs_.rbegin(), coeffs_.rend());
    std::size_t lead = rev.size();
    while (lead > 0 && rev[lead - 1] == 0) --lead;
    rev.resize(lead);
    if (!rev.empty() && rev.back() == -1) {
      for (auto& c : rev) c = -c;
    }
    return IntPolynomial(std::move(rev));
  }

  Interval eval(const Interval& x) const {
    Interval acc(coeffs_.back(), x.bits());
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * x + Interval(coeffs_[i], x.bits());
    return acc;
  }

  ComplexInterval eval(const ComplexInterval& z) const {
    const mpfr_prec_t bits = z.re.bits();
    ComplexInterval acc{Interval(coeffs_.back(), bits), Interval(0L, bits)};
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
      acc = acc * z;
      acc.re += Interval(coeffs_[i], bits);
    }
    return acc;
  }

  double eval(double x) const {
    double acc = coeffs_.back().convert_to<double>();
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * x + coeffs_[i].convert_to<double>();
    return acc;
  }

  /// Human-readable form, highest degree first: "x^3 - x - 1".
  std::string pretty() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      const BigInt& c = coeffs_[i];
      if (c == 0) continue;
      BigInt mag = c < 0 ? BigInt(-c) : c;
      if (first) {
        if (c < 0) os << '-';
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      if (mag != 1 || i == 0) os << mag;
      if (i >= 1) os << 'x';
      if (i >= 2) os << '^' << i;
      first = false;
    }
    return os.str();
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  std::vector<BigInt> coeffs_;
};

}  // namespace pvdim
