#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpvote {

// Candidate sets are packed into 32-bit masks; index n-1 must fit.
inline constexpr int kMaxCandidates = 31;

class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A set of candidate indices. Ballots stored in profiles and elections are
/// nonempty; the empty set is representable because the winners function is
/// defined on it.
class ballot {
 public:
  constexpr ballot() = default;

  static constexpr ballot from_mask(std::uint32_t mask) { return ballot(mask); }

  static ballot single(int index) {
    check_index(index);
    return ballot(std::uint32_t{1} << index);
  }

  static ballot of(std::initializer_list<int> indices) {
    std::uint32_t m = 0;
    for (int i : indices) {
      check_index(i);
      m |= std::uint32_t{1} << i;
    }
    return ballot(m);
  }

  /// The full candidate set {0, ..., n-1}.
  static ballot universe(int n) {
    if (n < 0 || n > kMaxCandidates) throw domain_error("candidate count out of range");
    if (n == 0) return ballot();
    return ballot((std::uint32_t{1} << n) - 1);
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  int size() const { return std::popcount(mask_); }
  constexpr bool contains(int index) const {
    return index >= 0 && index <= kMaxCandidates && (mask_ >> index & 1u) != 0;
  }
  constexpr bool subset_of(ballot other) const { return (mask_ & ~other.mask_) == 0; }
  constexpr bool disjoint_with(ballot other) const { return (mask_ & other.mask_) == 0; }

  friend constexpr ballot operator|(ballot a, ballot b) { return ballot(a.mask_ | b.mask_); }
  friend constexpr ballot operator&(ballot a, ballot b) { return ballot(a.mask_ & b.mask_); }
  friend constexpr ballot operator^(ballot a, ballot b) { return ballot(a.mask_ ^ b.mask_); }
  /// Set difference this \ other.
  constexpr ballot minus(ballot other) const { return ballot(mask_ & ~other.mask_); }
  /// Complement within {0, ..., n-1}.
  ballot complement(int n) const { return universe(n).minus(*this); }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint32_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  auto operator<=>(const ballot&) const = default;

 private:
  constexpr explicit ballot(std::uint32_t mask) : mask_(mask) {}
  static void check_index(int index) {
    if (index < 0 || index >= kMaxCandidates + 1)
      throw domain_error("candidate index out of range");
  }

  std::uint32_t mask_ = 0;
};

/// A committee: a nonempty fixed-size candidate set (the size is the k of the
/// rule that produced it).
class committee {
 public:
  explicit committee(ballot members) : members_(members) {
    if (members.empty()) throw domain_error("committee must be nonempty");
  }
  static committee from_mask(std::uint32_t mask) { return committee(ballot::from_mask(mask)); }
  static committee of(std::initializer_list<int> indices) { return committee(ballot::of(indices)); }

  ballot members() const { return members_; }
  std::uint32_t mask() const { return members_.mask(); }
  int size() const { return members_.size(); }
  bool contains(int index) const { return members_.contains(index); }
  std::vector<int> indices() const { return members_.indices(); }

  bool operator==(const committee&) const = default;

 private:
  ballot members_;
};

/// Orders committees by their ascending index sequences (so {c1,c4} precedes
/// {c2,c3}), which is the serialization order as well.
inline bool lex_less(const committee& a, const committee& b) {
  std::uint32_t am = a.mask(), bm = b.mask();
  while (am != 0 && bm != 0) {
    int ai = std::countr_zero(am), bi = std::countr_zero(bm);
    if (ai != bi) return ai < bi;
    am &= am - 1;
    bm &= bm - 1;
  }
  return am == 0 && bm != 0;
}

/// The set of tied winning committees a rule returns. Rules always produce a
/// nonempty outcome; the default-constructed empty value exists only as a
/// placeholder.
class outcome {
 public:
  outcome() = default;
  explicit outcome(std::vector<committee> committees) : committees_(std::move(committees)) {
    std::sort(committees_.begin(), committees_.end(),
              [](const committee& a, const committee& b) { return lex_less(a, b); });
    committees_.erase(std::unique(committees_.begin(), committees_.end()), committees_.end());
  }

  const std::vector<committee>& committees() const { return committees_; }
  std::size_t size() const { return committees_.size(); }
  bool empty() const { return committees_.empty(); }
  bool contains(const committee& c) const {
    return std::find(committees_.begin(), committees_.end(), c) != committees_.end();
  }
  auto begin() const { return committees_.begin(); }
  auto end() const { return committees_.end(); }

  /// Set intersection; used by the consistency axiom.
  outcome intersect(const outcome& other) const {
    std::vector<committee> both;
    for (const committee& c : committees_)
      if (other.contains(c)) both.push_back(c);
    return outcome(std::move(both));
  }

  bool operator==(const outcome&) const = default;

 private:
  std::vector<committee> committees_;
};

/// The norm exponent p: a finite real >= 1 or infinity.
class norm_exponent {
 public:
  static norm_exponent finite(double value) {
    if (!std::isfinite(value)) throw domain_error("norm exponent must be finite or 'inf'");
    if (value < 1.0) throw domain_error("norm exponent must be >= 1");
    return norm_exponent(value);
  }
  static norm_exponent infinity() { return norm_exponent(std::numeric_limits<double>::infinity()); }

  /// Accepts a decimal >= 1 or the token "inf" (case-insensitive).
  static norm_exponent parse(const std::string& text);

  bool is_infinite() const { return std::isinf(value_); }
  double value() const { return value_; }
  bool is_one() const { return value_ == 1.0; }

  std::string to_string() const;

  bool operator==(const norm_exponent&) const = default;

 private:
  explicit norm_exponent(double v) : value_(v) {}
  double value_ = std::numeric_limits<double>::infinity();
};

/// A profile: ballots with nonnegative real multiplicities. Absent ballots
/// have multiplicity zero; only positive entries are stored.
class profile {
 public:
  explicit profile(int candidate_count) : n_(candidate_count) {
    if (candidate_count < 1 || candidate_count > kMaxCandidates)
      throw domain_error("candidate count out of range");
  }

  int candidate_count() const { return n_; }

  void add(ballot b, double multiplicity) {
    if (b.empty()) throw domain_error("ballots must be nonempty");
    if (!b.subset_of(ballot::universe(n_))) throw domain_error("ballot outside candidate universe");
    if (!(multiplicity >= 0) || !std::isfinite(multiplicity))
      throw domain_error("multiplicity must be a nonnegative finite real");
    if (multiplicity == 0) return;
    double& slot = multiplicities_[b];
    slot += multiplicity;
    if (slot == 0) multiplicities_.erase(b);
  }

  double multiplicity(ballot b) const {
    auto it = multiplicities_.find(b);
    return it == multiplicities_.end() ? 0.0 : it->second;
  }

  const std::map<ballot, double>& entries() const { return multiplicities_; }

  double total() const {
    double t = 0;
    for (const auto& [b, m] : multiplicities_) t += m;
    return t;
  }

  bool empty() const { return multiplicities_.empty(); }

  /// True when every stored multiplicity is an exact integer small enough for
  /// exact double arithmetic; enables the exact comparison paths.
  bool integral() const {
    for (const auto& [b, m] : multiplicities_) {
      if (std::floor(m) != m || m > 0x1p53) return false;
    }
    return true;
  }

  bool operator==(const profile&) const = default;

 private:
  int n_;
  std::map<ballot, double> multiplicities_;
};

}  // namespace kpvote
