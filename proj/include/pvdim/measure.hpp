#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pvdim/error.hpp"

namespace pvdim {

/// Shift-invariant measure on sign sequences. Symbol index 0 is +1 and
/// index 1 is -1 throughout.
struct MeasureSpec {
  enum class Kind { bernoulli, markov2 };

  Kind kind = Kind::bernoulli;
  double p = 0.5;  // Bernoulli: probability of +1
  std::array<double, 2> initial{0.5, 0.5};
  std::array<std::array<double, 2>, 2> transitions{{{0.5, 0.5}, {0.5, 0.5}}};

  static MeasureSpec bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_argument, "Bernoulli probability outside [0,1]");
    MeasureSpec m;
    m.kind = Kind::bernoulli;
    m.p = p;
    m.initial = {p, 1.0 - p};
    m.transitions = {{{p, 1.0 - p}, {p, 1.0 - p}}};
    return m;
  }

  static MeasureSpec markov2(std::array<double, 2> initial, std::array<std::array<double, 2>, 2> transitions) {
    auto check = [](double a, double b, const char* what) {
      if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0) || std::abs(a + b - 1.0) > 1e-12)
        throw Error(Errc::invalid_argument, std::string(what) + " is not a probability vector");
    };
    check(initial[0], initial[1], "initial distribution");
    check(transitions[0][0], transitions[0][1], "transition row +1");
    check(transitions[1][0], transitions[1][1], "transition row -1");
    MeasureSpec m;
    m.kind = Kind::markov2;
    m.initial = initial;
    m.transitions = transitions;
    return m;
  }

  /// Stationary Markov chain with the given transition matrix.
  static MeasureSpec stationary_markov(std::array<std::array<double, 2>, 2> t) {
    const double out_plus = t[0][1], out_minus = t[1][0];
    const double denom = out_plus + out_minus;
    const double pi_plus = denom > 0.0 ? out_minus / denom : 0.5;
    return markov2({pi_plus, 1.0 - pi_plus}, t);
  }

  /// Mass slots the partition DP carries per class: Markov chains need the
  /// last symbol.
  std::size_t slots() const noexcept { return kind == Kind::bernoulli ? 1 : 2; }

  double symbol_probability(int symbol_index) const noexcept {
    return symbol_index == 0 ? p : 1.0 - p;
  }

  /// Entropy rate h(sigma) in nats. For Markov2 the initial law is taken
  /// as given; for a stationary chain this is the usual rate.
  double entropy_rate() const {
    auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
    if (kind == Kind::bernoulli) return -(xlogx(p) + xlogx(1.0 - p));
    const double out_plus = transitions[0][1], out_minus = transitions[1][0];
    const double denom = out_plus + out_minus;
    const double pi_plus = denom > 0.0 ? out_minus / denom : initial[0];
    const double pi[2] = {pi_plus, 1.0 - pi_plus};
    double h = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) h -= pi[a] * xlogx(transitions[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
    return h;
  }

  /// Probability of a whole sign string.
  double string_probability(const std::vector<int>& signs) const {
    auto idx = [](int s) { return s == 1 ? 0u : 1u; };
    double prob = 1.0;
    for (std::size_t k = 0; k < signs.size(); ++k) {
      if (kind == Kind::bernoulli) {
        prob *= symbol_probability(static_cast<int>(idx(signs[k])));
      } else if (k == 0) {
        prob *= initial[idx(signs[0])];
      } else {
        prob *= transitions[idx(signs[k - 1])][idx(signs[k])];
      }
    }
    return prob;
  }

  /// "bernoulli:P" or "markov:a,b,c,d" (rows of the transition matrix,
  /// stationary start).
  std::string label() const {
    auto fmt = [](double x) {
      char buf[32];
      return std::string(buf, std::to_chars(buf, buf + sizeof buf, x).ptr);
    };
    if (kind == Kind::bernoulli) return "bernoulli:" + fmt(p);
    return "markov:" + fmt(transitions[0][0]) + ',' + fmt(transitions[0][1]) + ',' + fmt(transitions[1][0]) + ',' +
           fmt(transitions[1][1]);
  }

  static MeasureSpec parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw Error(Errc::invalid_argument, "measure must look like kind:params");
    const std::string_view kind = text.substr(0, colon);
    std::vector<double> values;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      std::string item(rest.substr(0, comma));
      try {
        std::size_t used = 0;
        values.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw Error(Errc::invalid_argument, "bad number '" + item + "' in measure");
      }
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (kind == "bernoulli" && values.size() == 1) return bernoulli(values[0]);
    if (kind == "markov" && values.size() == 4)
      return stationary_markov({{{values[0], values[1]}, {values[2], values[3]}}});
    throw Error(Errc::invalid_argument, "unrecognised measure '" + std::string(text) + "'");
  }

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
};

}  // namespace pvdim
