#pragma once

// Partitions of length-n sign strings by exact equality of sum_k i_k beta^k.
//
// The dynamic program walks the Horner recursion level by level. A level is
// the set of distinct reduced residues of all prefixes of that length, each
// with its multiplicity, one mass slot per Bernoulli measure (two for Markov
// chains: mass of prefixes ending in +1 and in -1) and the smallest prefix
// reaching it. Children of a level are merged in hash shards; every shard
// replays the parents in key order, so accumulation order, and therefore
// every floating-point sum, is independent of the shard count. Each level is
// then sorted by key.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "pvdim/error.hpp"
#include "pvdim/measure.hpp"
#include "pvdim/numeric.hpp"
#include "pvdim/pisot.hpp"
#include "pvdim/residue.hpp"

namespace pvdim {

using Count = unsigned __int128;

inline BigInt to_big(Count c) {
  BigInt hi = static_cast<std::uint64_t>(c >> 64);
  BigInt lo = static_cast<std::uint64_t>(c);
  return (hi << 64) | lo;
}

inline double log_count(Count c) { return static_cast<double>(std::log(static_cast<long double>(c))); }

struct PartitionOptions {
  std::size_t state_budget = 20'000'000;
  unsigned threads = 1;
  mpfr_prec_t bits = kDefaultBits;
  bool compute_values = true;
};

/// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) noexcept {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const noexcept { return sum + comp; }
};

struct ClassRecord {
  AlgebraicResidue key;
  BigInt count;
  std::vector<double> masses;  // one per measure of the table
  double value_lo = 0.0;       // enclosure of sum_k i_k beta^k
  double value_hi = 0.0;
  std::vector<int> representative;

  double value_mid() const { return 0.5 * (value_lo + value_hi); }
  double value_radius() const { return 0.5 * (value_hi - value_lo); }
};

class PartitionTable;

namespace detail {
template <class Coeff>
class LevelStepper;
PartitionTable brute_force_table(const PisotNumber&, std::size_t, const std::vector<MeasureSpec>&, mpfr_prec_t);
}  // namespace detail

/// The partition of {+1,-1}^n into classes of equal value. Classes are
/// stored column-wise and ordered by residue key. Immutable once built.
class PartitionTable {
 public:
  const PisotNumber& pisot() const noexcept { return *pisot_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t degree() const noexcept { return degree_; }
  const std::vector<MeasureSpec>& measures() const noexcept { return measures_; }
  std::size_t size() const noexcept { return counts_.size(); }

  AlgebraicResidue key(std::size_t i) const {
    AlgebraicResidue r;
    r.coeffs.reserve(degree_);
    for (std::size_t j = 0; j < degree_; ++j)
      r.coeffs.push_back(big_ ? big_keys_[i * degree_ + j] : BigInt(small_keys_[i * degree_ + j]));
    return r;
  }
  bool big_keys() const noexcept { return big_; }
  std::span<const std::int64_t> small_key(std::size_t i) const {
    return {small_keys_.data() + i * degree_, degree_};
  }

  Count count(std::size_t i) const { return counts_[i]; }
  double mass(std::size_t i, std::size_t measure) const { return masses_[i * measures_.size() + measure]; }

  std::vector<int> representative(std::size_t i) const {
    std::vector<int> s(n_);
    for (std::size_t k = 0; k < n_; ++k) s[k] = ((reps_[i] >> (n_ - 1 - k)) & 1) ? 1 : -1;
    return s;
  }

  bool has_values() const noexcept { return !value_lo_.empty(); }
  double value_lo(std::size_t i) const { return value_lo_.at(i); }
  double value_hi(std::size_t i) const { return value_hi_.at(i); }

  ClassRecord record(std::size_t i) const {
    ClassRecord r;
    r.key = key(i);
    r.count = to_big(counts_[i]);
    for (std::size_t m = 0; m < measures_.size(); ++m) r.masses.push_back(mass(i, m));
    if (has_values()) {
      r.value_lo = value_lo_[i];
      r.value_hi = value_hi_[i];
    }
    r.representative = representative(i);
    return r;
  }

  std::optional<std::size_t> find(const AlgebraicResidue& k) const {
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      auto c = key(mid) <=> k;
      if (c == 0) return mid;
      if (c < 0) lo = mid + 1;
      else hi = mid;
    }
    return std::nullopt;
  }

  std::size_t measure_index(const MeasureSpec& m) const {
    for (std::size_t i = 0; i < measures_.size(); ++i)
      if (measures_[i] == m) return i;
    throw Error(Errc::invalid_argument, "measure " + m.label() + " not present in the table");
  }

  /// Computes the enclosures of every class value. Called by the builders.
  void compute_values(mpfr_prec_t bits, unsigned threads);

 private:
  template <class Coeff>
  friend class detail::LevelStepper;
  friend PartitionTable detail::brute_force_table(const PisotNumber&, std::size_t, const std::vector<MeasureSpec>&,
                                                  mpfr_prec_t);

  std::shared_ptr<const PisotNumber> pisot_;
  std::size_t n_ = 0;
  std::size_t degree_ = 0;
  std::vector<MeasureSpec> measures_;
  bool big_ = false;
  std::vector<std::int64_t> small_keys_;
  std::vector<BigInt> big_keys_;
  std::vector<Count> counts_;
  std::vector<double> masses_;
  std::vector<Count> reps_;
  std::vector<double> value_lo_;
  std::vector<double> value_hi_;
};

namespace detail {

struct CoefficientOverflow {};

inline std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_coeff(std::int64_t c) noexcept { return static_cast<std::uint64_t>(c); }
inline std::uint64_t hash_coeff(const BigInt& c) noexcept {
  mpz_srcptr z = c.backend().data();
  std::uint64_t h = static_cast<std::uint64_t>(mpz_size(z)) * 31 + static_cast<std::uint64_t>(mpz_sgn(z) + 1);
  if (mpz_size(z) > 0) h ^= mix64(mpz_getlimbn(z, 0));
  return h;
}

template <class Coeff>
std::uint64_t hash_key(const Coeff* key, std::size_t d) noexcept {
  std::uint64_t h = 0x12345678ULL;
  for (std::size_t j = 0; j < d; ++j) h = mix64(h ^ hash_coeff(key[j]));
  return h;
}

template <class Coeff>
bool key_less(const Coeff* a, const Coeff* b, std::size_t d) noexcept {
  for (std::size_t j = 0; j < d; ++j) {
    if (a[j] < b[j]) return true;
    if (b[j] < a[j]) return false;
  }
  return false;
}

template <class Coeff>
bool key_equal(const Coeff* a, const Coeff* b, std::size_t d) noexcept {
  for (std::size_t j = 0; j < d; ++j)
    if (a[j] != b[j]) return false;
  return true;
}

template <class Coeff>
struct Level {
  std::vector<Coeff> keys;
  std::vector<Count> counts;
  std::vector<double> slots;
  std::vector<Count> reps;
  std::size_t size() const noexcept { return counts.size(); }
};

// Open-addressing accumulator for one shard of a level.
template <class Coeff>
class Shard {
 public:
  Shard(std::size_t d, std::size_t slots, std::size_t expected) : d_(d), s_(slots) {
    std::size_t cap = 16;
    while (cap < 2 * expected) cap *= 2;
    table_.assign(cap, 0);
    level_.keys.reserve(expected * d);
    level_.counts.reserve(expected);
    level_.slots.reserve(expected * slots);
    level_.reps.reserve(expected);
  }

  void insert(const Coeff* key, std::uint64_t h, Count count, const double* slots, Count rep) {
    std::size_t mask = table_.size() - 1;
    std::size_t pos = h & mask;
    while (table_[pos] != 0) {
      const std::size_t idx = table_[pos] - 1;
      if (key_equal(&level_.keys[idx * d_], key, d_)) {
        level_.counts[idx] += count;
        for (std::size_t k = 0; k < s_; ++k) {
          double& sum = level_.slots[idx * s_ + k];
          double& c = comp_[idx * s_ + k];
          const double x = slots[k];
          const double t = sum + x;
          c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
          sum = t;
        }
        level_.reps[idx] = std::min(level_.reps[idx], rep);
        return;
      }
      pos = (pos + 1) & mask;
    }
    const std::size_t idx = level_.size();
    if (idx >= std::numeric_limits<std::uint32_t>::max() - 1)
      throw Error(Errc::state_budget_exceeded, "shard exceeds 2^32 states");
    table_[pos] = static_cast<std::uint32_t>(idx + 1);
    level_.keys.insert(level_.keys.end(), key, key + d_);
    level_.counts.push_back(count);
    level_.slots.insert(level_.slots.end(), slots, slots + s_);
    comp_.insert(comp_.end(), s_, 0.0);
    level_.reps.push_back(rep);
    if (2 * level_.size() > table_.size()) grow();
  }

  // Folds compensation terms into the sums and releases the hash index.
  Level<Coeff>& finish() {
    if (finished_) return level_;
    finished_ = true;
    for (std::size_t i = 0; i < level_.slots.size(); ++i) level_.slots[i] += comp_[i];
    std::vector<double>().swap(comp_);
    std::vector<std::uint32_t>().swap(table_);
    return level_;
  }

 private:
  void grow() {
    std::vector<std::uint32_t> next(table_.size() * 2, 0);
    const std::size_t mask = next.size() - 1;
    for (std::size_t idx = 0; idx < level_.size(); ++idx) {
      std::size_t pos = hash_key(&level_.keys[idx * d_], d_) & mask;
      while (next[pos] != 0) pos = (pos + 1) & mask;
      next[pos] = static_cast<std::uint32_t>(idx + 1);
    }
    table_.swap(next);
  }

  std::size_t d_, s_;
  Level<Coeff> level_;
  std::vector<double> comp_;
  std::vector<std::uint32_t> table_;
  bool finished_ = false;
};

inline bool step_key(const std::int64_t* in, std::int64_t* out, std::span<const std::int64_t> low, int sign) {
  return horner_step(std::span<const std::int64_t>(in, low.size()), std::span<std::int64_t>(out, low.size()), low,
                     sign);
}

inline bool step_key(const BigInt* in, BigInt* out, std::span<const BigInt> low, int sign) {
  horner_step(std::span<const BigInt>(in, low.size()), std::span<BigInt>(out, low.size()), low, sign);
  return true;
}

template <class Coeff>
class LevelStepper {
 public:
  LevelStepper(std::shared_ptr<const PisotNumber> p, std::vector<MeasureSpec> measures, const PartitionOptions& opts)
      : pisot_(std::move(p)), measures_(std::move(measures)), opts_(opts), d_(pisot_->degree()) {
    if constexpr (std::is_same_v<Coeff, std::int64_t>) {
      low_ = small_minpoly(pisot_->minpoly());
      if (low_.empty()) throw CoefficientOverflow{};
    } else {
      low_.assign(pisot_->minpoly().coeffs().begin(), pisot_->minpoly().coeffs().end() - 1);
    }
    for (const auto& m : measures_) {
      offsets_.push_back(slots_);
      slots_ += m.slots();
    }
    level_.keys.assign(d_, Coeff(0));
    level_.counts.push_back(1);
    level_.slots.assign(slots_, 0.0);
    for (std::size_t m = 0; m < measures_.size(); ++m)
      if (measures_[m].kind == MeasureSpec::Kind::bernoulli) level_.slots[offsets_[m]] = 1.0;
    level_.reps.push_back(0);
  }

  std::size_t depth() const noexcept { return depth_; }
  const Level<Coeff>& level() const noexcept { return level_; }
  std::size_t slot_offset(std::size_t m) const { return offsets_[m]; }
  std::size_t slot_count() const noexcept { return slots_; }

  void advance() {
    if (depth_ >= 127) throw Error(Errc::cap_exceeded, "sign strings longer than 127 are not supported");
    const unsigned shards = std::max(1u, opts_.threads);
    const std::size_t expected = level_.size() * 2 / shards + 16;
    std::vector<Shard<Coeff>> parts;
    parts.reserve(shards);
    for (unsigned s = 0; s < shards; ++s) parts.emplace_back(d_, slots_, expected);

    bool overflow = false;
    auto work = [&](unsigned shard) {
      std::vector<Coeff> child(d_);
      std::vector<double> cslots(slots_);
      for (std::size_t i = 0; i < level_.size() && !overflow; ++i) {
        const Coeff* key = &level_.keys[i * d_];
        const double* ps = &level_.slots[i * slots_];
        for (int sym = 0; sym < 2; ++sym) {
          const int sign = sym == 0 ? 1 : -1;
          if (!step_key(key, child.data(), low_, sign)) {
            overflow = true;
            return;
          }
          const std::uint64_t h = hash_key(child.data(), d_);
          if (shards > 1 && (h >> 40) % shards != shard) continue;
          child_slots(ps, sym, cslots.data());
          parts[shard].insert(child.data(), h, level_.counts[i], cslots.data(),
                              (level_.reps[i] << 1) | static_cast<Count>(sym == 0 ? 1 : 0));
        }
      }
    };
    if (shards == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned s = 0; s < shards; ++s) pool.emplace_back(work, s);
      for (auto& t : pool) t.join();
    }
    if (overflow) throw CoefficientOverflow{};

    std::size_t total = 0;
    for (auto& part : parts) total += part.finish().size();
    if (total > opts_.state_budget)
      throw Error(Errc::state_budget_exceeded, "level " + std::to_string(depth_ + 1) + " has " +
                                                   std::to_string(total) + " states, cap " +
                                                   std::to_string(opts_.state_budget));
    level_ = Level<Coeff>();
    level_ = merge_sorted(parts, total);
    ++depth_;
  }

  // Entropy -sum mass log mass of measure m at the current depth.
  double entropy(std::size_t m) const {
    CompensatedSum h;
    const std::size_t o = offsets_[m], k = measures_[m].slots();
    for (std::size_t i = 0; i < level_.size(); ++i) {
      double mass = 0.0;
      for (std::size_t s = 0; s < k; ++s) mass += level_.slots[i * slots_ + o + s];
      if (mass > 0.0) h.add(-mass * std::log(mass));
    }
    return h.value();
  }

  PartitionTable table() const {
    PartitionTable t;
    t.pisot_ = pisot_;
    t.n_ = depth_;
    t.degree_ = d_;
    t.measures_ = measures_;
    if constexpr (std::is_same_v<Coeff, std::int64_t>) {
      t.big_ = false;
      t.small_keys_ = level_.keys;
    } else {
      t.big_ = true;
      t.big_keys_ = level_.keys;
    }
    t.counts_ = level_.counts;
    t.reps_ = level_.reps;
    t.masses_.resize(level_.size() * measures_.size());
    for (std::size_t i = 0; i < level_.size(); ++i)
      for (std::size_t m = 0; m < measures_.size(); ++m) {
        double mass = 0.0;
        for (std::size_t s = 0; s < measures_[m].slots(); ++s) mass += level_.slots[i * slots_ + offsets_[m] + s];
        t.masses_[i * measures_.size() + m] = mass;
      }
    return t;
  }

 private:
  void child_slots(const double* ps, int sym, double* out) const {
    const bool first = depth_ == 0;
    for (std::size_t m = 0; m < measures_.size(); ++m) {
      const auto& spec = measures_[m];
      const std::size_t o = offsets_[m];
      if (spec.kind == MeasureSpec::Kind::bernoulli) {
        out[o] = ps[o] * spec.symbol_probability(sym);
      } else {
        const auto s = static_cast<std::size_t>(sym);
        out[o + s] = first ? spec.initial[s] : ps[o] * spec.transitions[0][s] + ps[o + 1] * spec.transitions[1][s];
        out[o + 1 - s] = 0.0;
      }
    }
  }

  Level<Coeff> merge_sorted(std::vector<Shard<Coeff>>& parts, std::size_t total) {
    // References (shard, index) sorted by key; keys are unique across shards.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> refs;
    refs.reserve(total);
    std::vector<const Level<Coeff>*> levels;
    for (std::uint32_t s = 0; s < parts.size(); ++s) {
      const Level<Coeff>& l = parts[s].finish();
      levels.push_back(&l);
      for (std::uint32_t i = 0; i < l.size(); ++i) refs.emplace_back(s, i);
    }
    const std::size_t d = d_;
    auto less = [&](const auto& a, const auto& b) {
      return key_less(&levels[a.first]->keys[a.second * d], &levels[b.first]->keys[b.second * d], d);
    };
    const unsigned chunks = std::max(1u, opts_.threads);
    if (chunks == 1 || refs.size() < 4096) {
      std::sort(refs.begin(), refs.end(), less);
    } else {
      std::vector<std::size_t> bounds;
      for (unsigned c = 0; c <= chunks; ++c) bounds.push_back(refs.size() * c / chunks);
      std::vector<std::thread> pool;
      for (unsigned c = 0; c < chunks; ++c)
        pool.emplace_back([&, c] { std::sort(refs.begin() + bounds[c], refs.begin() + bounds[c + 1], less); });
      for (auto& t : pool) t.join();
      for (unsigned c = 1; c < chunks; ++c)
        std::inplace_merge(refs.begin(), refs.begin() + bounds[c], refs.begin() + bounds[c + 1], less);
    }
    Level<Coeff> out;
    out.keys.reserve(total * d);
    out.counts.reserve(total);
    out.slots.reserve(total * slots_);
    out.reps.reserve(total);
    for (const auto& [s, i] : refs) {
      const Level<Coeff>& l = *levels[s];
      out.keys.insert(out.keys.end(), l.keys.begin() + i * d, l.keys.begin() + (i + 1) * d);
      out.counts.push_back(l.counts[i]);
      out.slots.insert(out.slots.end(), l.slots.begin() + i * slots_, l.slots.begin() + (i + 1) * slots_);
      out.reps.push_back(l.reps[i]);
    }
    return out;
  }

  std::shared_ptr<const PisotNumber> pisot_;
  std::vector<MeasureSpec> measures_;
  PartitionOptions opts_;
  std::size_t d_;
  std::vector<Coeff> low_;
  std::vector<std::size_t> offsets_;
  std::size_t slots_ = 0;
  std::size_t depth_ = 0;
  Level<Coeff> level_;
};

}  // namespace detail

/// Incremental partition builder: one call to advance() extends every
/// sign string by one symbol. Runs on int64 coefficients and transparently
/// restarts on GMP integers if a coefficient would overflow.
class PartitionBuilder {
 public:
  PartitionBuilder(const PisotNumber& p, std::vector<MeasureSpec> measures, PartitionOptions opts = {})
      : pisot_(std::make_shared<const PisotNumber>(p)),
        measures_(std::move(measures)),
        opts_(opts),
        stepper_(make_stepper(pisot_, measures_, opts_)) {}

  std::size_t depth() const {
    return std::visit([](const auto& s) { return s.depth(); }, stepper_);
  }
  std::size_t size() const {
    return std::visit([](const auto& s) { return s.level().size(); }, stepper_);
  }
  const std::vector<MeasureSpec>& measures() const noexcept { return measures_; }
  const PisotNumber& pisot() const noexcept { return *pisot_; }

  void advance() {
    if (auto* small = std::get_if<Small>(&stepper_)) {
      try {
        small->advance();
        return;
      } catch (const detail::CoefficientOverflow&) {
        const std::size_t target = small->depth() + 1;
        stepper_.emplace<Big>(pisot_, measures_, opts_);
        while (depth() < target) std::get<Big>(stepper_).advance();
        return;
      }
    }
    std::get<Big>(stepper_).advance();
  }

  /// Advances to depth n, failing early if the state count extrapolated
  /// with growth min(beta^-1, 2) per level would exceed the budget.
  void advance_to(std::size_t n) {
    const double growth = std::min(2.0, 1.0 / pisot_->beta_value());
    while (depth() < n) {
      const double estimate =
          static_cast<double>(std::max<std::size_t>(size(), 1)) * std::pow(growth, static_cast<double>(n - depth()));
      if (depth() > 0 && estimate > static_cast<double>(opts_.state_budget))
        throw Error(Errc::state_budget_exceeded,
                    "estimated " + std::to_string(estimate) + " states at n = " +
                        std::to_string(n) + " (c * beta^-n), cap " + std::to_string(opts_.state_budget));
      advance();
    }
  }

  double entropy(std::size_t measure) const {
    return std::visit([&](const auto& s) { return s.entropy(measure); }, stepper_);
  }

  /// Calls f(count) for every class at the current depth, in key order.
  template <class F>
  void for_each_count(F&& f) const {
    std::visit(
        [&](const auto& s) {
          for (Count c : s.level().counts) f(c);
        },
        stepper_);
  }

  PartitionTable table() const {
    PartitionTable t = std::visit([](const auto& s) { return s.table(); }, stepper_);
    if (opts_.compute_values) t.compute_values(opts_.bits, opts_.threads);
    return t;
  }

 private:
  using Small = detail::LevelStepper<std::int64_t>;
  using Big = detail::LevelStepper<BigInt>;
  using Stepper = std::variant<Small, Big>;

  static Stepper make_stepper(const std::shared_ptr<const PisotNumber>& p, const std::vector<MeasureSpec>& m,
                              const PartitionOptions& o) {
    try {
      return Stepper(std::in_place_type<Small>, p, m, o);
    } catch (const detail::CoefficientOverflow&) {
      return Stepper(std::in_place_type<Big>, p, m, o);
    }
  }

  std::shared_ptr<const PisotNumber> pisot_;
  std::vector<MeasureSpec> measures_;
  PartitionOptions opts_;
  Stepper stepper_;
};

inline void PartitionTable::compute_values(mpfr_prec_t bits, unsigned threads) {
  if (n_ == 0) return;
  // basis_j = alpha^j * beta^(n-1); value = sum_j c_j basis_j.
  std::vector<Interval> basis;
  {
    Interval a = pisot_->alpha(bits);
    Interval w = pow(pisot_->beta(bits), static_cast<unsigned long>(n_ - 1));
    for (std::size_t j = 0; j < degree_; ++j) {
      basis.push_back(w);
      w = w * a;
    }
  }
  value_lo_.assign(size(), 0.0);
  value_hi_.assign(size(), 0.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    Real lo(bits), hi(bits), t(bits);
    for (std::size_t i = begin; i < end; ++i) {
      mpfr_set_zero(lo.get(), 1);
      mpfr_set_zero(hi.get(), 1);
      for (std::size_t j = 0; j < degree_; ++j) {
        const bool neg = big_ ? big_keys_[i * degree_ + j] < 0 : small_keys_[i * degree_ + j] < 0;
        const Real& wl = neg ? basis[j].hi() : basis[j].lo();
        const Real& wh = neg ? basis[j].lo() : basis[j].hi();
        if (big_) {
          mpz_srcptr c = big_keys_[i * degree_ + j].backend().data();
          mpfr_mul_z(t.get(), wl.get(), c, MPFR_RNDD);
          mpfr_add(lo.get(), lo.get(), t.get(), MPFR_RNDD);
          mpfr_mul_z(t.get(), wh.get(), c, MPFR_RNDU);
          mpfr_add(hi.get(), hi.get(), t.get(), MPFR_RNDU);
        } else {
          const long c = small_keys_[i * degree_ + j];
          mpfr_mul_si(t.get(), wl.get(), c, MPFR_RNDD);
          mpfr_add(lo.get(), lo.get(), t.get(), MPFR_RNDD);
          mpfr_mul_si(t.get(), wh.get(), c, MPFR_RNDU);
          mpfr_add(hi.get(), hi.get(), t.get(), MPFR_RNDU);
        }
      }
      value_lo_[i] = lo.to_double(MPFR_RNDD);
      value_hi_[i] = hi.to_double(MPFR_RNDU);
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1 || size() < 1024) {
    work(0, size());
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back(work, size() * t / threads, size() * (t + 1) / threads);
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------

inline PartitionTable build_partition(const PisotNumber& p, std::size_t n, std::vector<MeasureSpec> measures,
                                      const PartitionOptions& opts = {}) {
  if (n < 1) throw Error(Errc::invalid_argument, "partition length must be at least 1");
  PartitionBuilder builder(p, std::move(measures), opts);
  builder.advance_to(n);
  return builder.table();
}

namespace detail {

// Reduces sum_k c_k x^k modulo the monic minimal polynomial by long division.
inline std::vector<BigInt> reduce_mod(std::vector<BigInt> c, const IntPolynomial& minpoly) {
  const std::size_t d = minpoly.degree();
  for (std::size_t deg = c.size(); deg-- > d;) {
    const BigInt t = c[deg];
    if (t == 0) continue;
    c[deg] = 0;
    for (std::size_t j = 0; j < d; ++j) c[deg - d + j] -= t * minpoly[j];
  }
  c.resize(d, BigInt(0));
  return c;
}

inline PartitionTable brute_force_table(const PisotNumber& p, std::size_t n, const std::vector<MeasureSpec>& measures,
                                        mpfr_prec_t bits) {
  struct Acc {
    Count count = 0;
    std::vector<CompensatedSum> masses;
    Count rep = std::numeric_limits<Count>::max();
  };
  std::map<AlgebraicResidue, Acc> groups;
  std::vector<int> signs(n);
  for (std::uint64_t bitsmask = 0; bitsmask < (std::uint64_t{1} << n); ++bitsmask) {
    for (std::size_t k = 0; k < n; ++k) signs[k] = ((bitsmask >> (n - 1 - k)) & 1) ? 1 : -1;
    // sum_k i_k x^(n-1-k), ascending coefficients.
    std::vector<BigInt> poly(n);
    for (std::size_t k = 0; k < n; ++k) poly[n - 1 - k] = signs[k];
    AlgebraicResidue key{reduce_mod(std::move(poly), p.minpoly())};
    Acc& acc = groups[key];
    acc.masses.resize(measures.size());
    acc.count += 1;
    for (std::size_t m = 0; m < measures.size(); ++m) acc.masses[m].add(measures[m].string_probability(signs));
    acc.rep = std::min<Count>(acc.rep, bitsmask);
  }
  PartitionTable t;
  t.pisot_ = std::make_shared<const PisotNumber>(p);
  t.n_ = n;
  t.degree_ = p.degree();
  t.measures_ = measures;
  t.big_ = true;
  for (const auto& [key, acc] : groups) {
    t.big_keys_.insert(t.big_keys_.end(), key.coeffs.begin(), key.coeffs.end());
    t.counts_.push_back(acc.count);
    for (const auto& m : acc.masses) t.masses_.push_back(m.value());
    t.reps_.push_back(acc.rep);
  }
  t.compute_values(bits, 1);
  return t;
}

}  // namespace detail

/// Reference partition by enumerating all 2^n strings; each residue is
/// obtained by polynomial long division, independently of the DP.
inline PartitionTable brute_force_partition(const PisotNumber& p, std::size_t n, const std::vector<MeasureSpec>& measures,
                                            mpfr_prec_t bits = kDefaultBits) {
  if (n < 1) throw Error(Errc::invalid_argument, "partition length must be at least 1");
  if (n > 20) throw Error(Errc::cap_exceeded, "brute force is limited to n <= 20");
  return detail::brute_force_table(p, n, measures, bits);
}

inline std::size_t class_count(const PartitionTable& t) { return t.size(); }

inline double partition_entropy(const PartitionTable& t, std::size_t measure) {
  CompensatedSum h;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double m = t.mass(i, measure);
    if (m > 0.0) h.add(-m * std::log(m));
  }
  return h.value();
}

inline double partition_entropy(const PartitionTable& t, const MeasureSpec& m) {
  return partition_entropy(t, t.measure_index(m));
}

/// Tables agree on keys, counts and representatives, with masses within tol.
inline bool same_partition(const PartitionTable& a, const PartitionTable& b, double mass_tol = 1e-12) {
  if (a.size() != b.size() || a.n() != b.n() || a.measures() != b.measures()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.key(i) != b.key(i) || a.count(i) != b.count(i) || a.representative(i) != b.representative(i)) return false;
    for (std::size_t m = 0; m < a.measures().size(); ++m)
      if (std::abs(a.mass(i, m) - b.mass(i, m)) > mass_tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

struct MinGap {
  double lower = 0.0;  // certified enclosure of omega(n)
  double upper = 0.0;
  std::size_t left = 0;   // class indices realising the gap, left < right in value
  std::size_t right = 0;
  mpfr_prec_t bits = 0;

  double value() const noexcept { return 0.5 * (lower + upper); }
};

struct GapOptions {
  mpfr_prec_t start_bits = kDefaultBits;
  mpfr_prec_t max_bits = 8192;
};

/// Minimal distance between distinct class values. Classes are ordered by
/// approximate value, then every adjacent difference is evaluated exactly
/// as a residue difference and certified positive, doubling the precision
/// until all are resolved.
inline MinGap min_gap(const PartitionTable& t, const GapOptions& opts = {}) {
  const std::size_t N = t.size();
  if (N < 2) throw Error(Errc::domain_error, "min_gap needs at least two classes");
  const std::size_t d = t.degree();
  const PisotNumber& p = t.pisot();

  std::vector<double> approx(N);
  {
    const long double a = p.alpha_value();
    const long double scale = std::pow(static_cast<long double>(p.beta_value()), static_cast<long double>(t.n() - 1));
    for (std::size_t i = 0; i < N; ++i) {
      if (t.has_values()) {
        approx[i] = 0.5 * (t.value_lo(i) + t.value_hi(i));
        continue;
      }
      auto k = t.key(i);
      long double v = 0;
      for (std::size_t j = d; j-- > 0;) v = v * a + k.coeffs[j].convert_to<long double>();
      approx[i] = static_cast<double>(v * scale);
    }
  }
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return approx[x] < approx[y] || (approx[x] == approx[y] && x < y);
  });

  std::vector<double> gap_lo(N - 1), gap_hi(N - 1);
  std::vector<char> done(N - 1, 0);
  mpfr_prec_t bits = opts.start_bits;
  while (true) {
    std::vector<Interval> basis;
    {
      Interval a = p.alpha(bits);
      Interval w = pow(p.beta(bits), static_cast<unsigned long>(t.n() - 1));
      for (std::size_t j = 0; j < d; ++j) {
        basis.push_back(w);
        w = w * a;
      }
    }
    bool swapped = true, pending = false;
    while (swapped) {
      swapped = false;
      pending = false;
      for (std::size_t k = 0; k + 1 < N; ++k) {
        if (done[k]) continue;
        auto lo_key = t.key(order[k]), hi_key = t.key(order[k + 1]);
        Interval diff(0L, bits);
        for (std::size_t j = 0; j < d; ++j) diff += Interval(BigInt(hi_key.coeffs[j] - lo_key.coeffs[j]), bits) * basis[j];
        if (diff.positive()) {
          done[k] = 1;
          gap_lo[k] = diff.lower();
          gap_hi[k] = diff.upper();
        } else if (diff.negative()) {
          std::swap(order[k], order[k + 1]);
          for (std::size_t r = (k > 0 ? k - 1 : 0); r <= std::min(k + 1, N - 2); ++r) done[r] = 0;
          swapped = true;
        } else {
          pending = true;
        }
      }
    }
    if (!pending) break;
    bits *= 2;
    if (bits > opts.max_bits)
      throw Error(Errc::precision_cap_exceeded, "class values not separated at " + std::to_string(opts.max_bits) +
                                                    " bits (is the minimal polynomial irreducible?)");
  }
  MinGap g;
  g.bits = bits;
  std::size_t best = 0;
  g.lower = gap_lo[0];
  g.upper = gap_hi[0];
  for (std::size_t k = 1; k + 1 < N; ++k) {
    g.lower = std::min(g.lower, gap_lo[k]);
    if (gap_hi[k] < g.upper) {
      g.upper = gap_hi[k];
      best = k;
    }
  }
  g.left = order[best];
  g.right = order[best + 1];
  return g;
}

// ---------------------------------------------------------------------------

struct GarsiaBound {
  std::vector<double> entropies;  // H_n for n = 1..n_max
  std::vector<double> ratios;     // H_n / n
  double best = 0.0;              // min ratio: an upper bound for the Garsia entropy
  std::size_t best_n = 0;
  double threshold = 0.0;         // -log beta
  bool below_threshold = false;   // best < -log beta
};

inline GarsiaBound garsia_upper_bound(const PisotNumber& p, const MeasureSpec& m, std::size_t n_max,
                                      PartitionOptions opts = {}) {
  if (n_max < 1) throw Error(Errc::invalid_argument, "n_max must be at least 1");
  opts.compute_values = false;
  PartitionBuilder builder(p, {m}, opts);
  GarsiaBound out;
  out.threshold = -std::log(p.beta_value());
  const double growth = std::min(2.0, 1.0 / p.beta_value());
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n > 1 && static_cast<double>(builder.size()) * growth > static_cast<double>(opts.state_budget))
      throw Error(Errc::state_budget_exceeded, "level " + std::to_string(n) + " would exceed the cap of " +
                                                   std::to_string(opts.state_budget) + " states");
    builder.advance();
    const double h = builder.entropy(0);
    out.entropies.push_back(h);
    out.ratios.push_back(h / static_cast<double>(n));
    if (n == 1 || out.ratios.back() < out.best) {
      out.best = out.ratios.back();
      out.best_n = n;
    }
  }
  out.below_threshold = out.best < out.threshold;
  return out;
}

}  // namespace pvdim
