#pragma once

// Exact arithmetic on the n-ary Cantor set K_n.
//
// A vertex of the infinite n-ary tree is an Address (a finite digit word);
// it names the elementary interval K_a of all infinite words extending it.
// Points that the library ever needs to name exactly are eventually
// periodic, u.v^inf, and are held in a canonical form so that equality is
// component-wise.  Clopen sets are finite unions of elementary intervals,
// kept as the antichain of their maximal intervals.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "thompson/error.hpp"

namespace thompson {

constexpr int kMaxArity = 10;

class Address {
 public:
  Address() = default;
  explicit Address(int arity, std::string digits = {});

  // Digit string such as "011"; "ε" or "e" denotes the root.
  static Address parse(std::string_view text, int arity);

  int arity() const { return arity_; }
  std::size_t depth() const { return digits_.size(); }
  bool is_root() const { return digits_.empty(); }

  // Raw digit values 0..n-1, one per byte.
  const std::string& digits() const { return digits_; }
  int operator[](std::size_t i) const {
    return static_cast<unsigned char>(digits_[i]);
  }

  bool is_prefix_of(const Address& other) const;
  bool is_strict_prefix_of(const Address& other) const {
    return depth() < other.depth() && is_prefix_of(other);
  }
  bool comparable(const Address& other) const {
    return is_prefix_of(other) || other.is_prefix_of(*this);
  }

  Address child(int digit) const;
  Address parent() const;
  Address prefix(std::size_t length) const;
  Address suffix_from(std::size_t position) const;
  Address operator+(const Address& tail) const;

  std::string to_string() const;

  // Lexicographic, a prefix sorting before its extensions.
  friend bool operator==(const Address&, const Address&) = default;
  friend std::strong_ordering operator<=>(const Address& a, const Address& b) {
    if (auto c = a.arity_ <=> b.arity_; c != 0) return c;
    return a.digits_.compare(b.digits_) <=> 0;
  }

 private:
  int arity_ = 2;
  std::string digits_;
};

std::ostream& operator<<(std::ostream& os, const Address& a);

// Digit-wise complement d -> n-1-d (the reflection x -> 1-x for n = 2).
Address complement(const Address& a);

// The eventually periodic point preperiod . period^inf.
//
// Canonical form: the period is primitive and the preperiod cannot be
// shortened by rotating the period (its last digit differs from the last
// digit of the period).
class CantorPoint {
 public:
  CantorPoint(Address preperiod, Address period);

  // "u(v)": "(0)" is 0^inf, "1(10)" is 1 (10)^inf.
  static CantorPoint parse(std::string_view text, int arity);

  int arity() const { return period_.arity(); }
  const Address& preperiod() const { return preperiod_; }
  const Address& period() const { return period_; }

  int digit(std::size_t i) const;
  Address prefix(std::size_t length) const;
  // Drop the first k digits.
  CantorPoint shifted(std::size_t k) const;
  CantorPoint prepended(const Address& head) const;
  bool in_interval(const Address& a) const;

  std::string to_string() const;

  friend bool operator==(const CantorPoint&, const CantorPoint&) = default;
  friend std::strong_ordering operator<=>(const CantorPoint& a,
                                          const CantorPoint& b) {
    if (auto c = a.preperiod_ <=> b.preperiod_; c != 0) return c;
    return a.period_ <=> b.period_;
  }

 private:
  Address preperiod_;
  Address period_;
};

std::ostream& operator<<(std::ostream& os, const CantorPoint& p);

CantorPoint complement(const CantorPoint& p);

// Positive rational, used only for neighbourhood radii.
struct Rational {
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  static Rational parse(std::string_view text);
  std::string to_string() const;
};

// Rational n^-k.
Rational inverse_power(int arity, int k);

class ClopenSet {
 public:
  ClopenSet() = default;
  explicit ClopenSet(int arity) : arity_(arity) {}

  // Canonicalizes: drops members below other members and merges complete
  // sibling families.  Throws ArityMismatch on mixed arities.
  static ClopenSet normalize(int arity, std::vector<Address> intervals);
  static ClopenSet whole(int arity);
  static ClopenSet interval(const Address& a);

  // "{0,11}" / "{}" / "{ε}".
  static ClopenSet parse(std::string_view text, int arity);

  int arity() const { return arity_; }
  const std::vector<Address>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  bool is_whole() const {
    return intervals_.size() == 1 && intervals_.front().is_root();
  }
  std::size_t max_depth() const;

  bool contains(const CantorPoint& p) const;
  bool contains(const Address& a) const;

  std::string to_string() const;

  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;

 private:
  int arity_ = 2;
  std::vector<Address> intervals_;
};

std::ostream& operator<<(std::ostream& os, const ClopenSet& s);

ClopenSet unite(const ClopenSet& a, const ClopenSet& b);
ClopenSet intersect(const ClopenSet& a, const ClopenSet& b);
ClopenSet difference(const ClopenSet& a, const ClopenSet& b);
ClopenSet complement(const ClopenSet& a);
bool subset(const ClopenSet& a, const ClopenSet& b);
bool disjoint(const ClopenSet& a, const ClopenSet& b);

enum class ClopenOp { Union, Intersect, Difference };
ClopenSet clopen_algebra(const ClopenSet& a, const ClopenSet& b, ClopenOp op);

inline bool point_in(const CantorPoint& p, const ClopenSet& s) {
  return s.contains(p);
}

// Smallest depth d with n^-d < epsilon.  Throws InvalidArgument if epsilon
// is not positive.
std::size_t neighborhood_depth(int arity, const Rational& epsilon);

// N_eps(p): the elementary interval of depth neighborhood_depth(eps)
// containing p.
Address neighborhood_interval(const CantorPoint& p, const Rational& epsilon);
ClopenSet neighborhood(const CantorPoint& p, const Rational& epsilon);
ClopenSet neighborhood(const std::vector<CantorPoint>& points, int arity,
                       const Rational& epsilon);
// Same, with the depth given directly.
ClopenSet neighborhood_at_depth(const std::vector<CantorPoint>& points,
                                int arity, std::size_t depth);

std::vector<Address> all_addresses(int arity, std::size_t depth);

}  // namespace thompson
