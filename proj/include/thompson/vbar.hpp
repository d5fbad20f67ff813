#pragma once

// Binary tree pairs whose pieces may reverse orientation, and the doubling
// embedding phi into V_2.
//
// A negative leaf d -> r maps d.x to r.complement(x).  phi models the
// doubled Cantor set K0 u K1 by one extra leading digit, copy 1 being the
// mirror image of copy 0: a point x of K is 0.x in copy 0 and
// 1.complement(x) in copy 1.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "thompson/element.hpp"

namespace thompson {

class SignedTreePair {
 public:
  SignedTreePair() : SignedTreePair(TreePair::identity(2)) {}
  // All pieces orientation preserving.
  explicit SignedTreePair(TreePair base);
  // One sign per leaf of `base`, in domain order; true means reversing.
  SignedTreePair(TreePair base, std::vector<bool> reversed);

  static SignedTreePair identity();
  // x -> 1 - x: the root mapped to itself with reversal.
  static SignedTreePair reflection();
  // Element format followed by ` signs [+ - ...]` (optional).
  static SignedTreePair parse(std::string_view text, std::size_t line = 1);

  const TreePair& base() const { return base_; }
  const std::vector<bool>& reversed() const { return reversed_; }
  std::size_t size() const { return base_.size(); }
  bool all_positive() const;

  std::string to_string() const;

  friend bool operator==(const SignedTreePair&, const SignedTreePair&) = default;

 private:
  TreePair base_;
  std::vector<bool> reversed_;
};

CantorPoint signed_apply(const SignedTreePair& f, const CantorPoint& p);
// g after f.
SignedTreePair signed_compose(const SignedTreePair& f, const SignedTreePair& g);
SignedTreePair signed_inverse(const SignedTreePair& f);
SignedTreePair signed_reduce(const SignedTreePair& f);
bool signed_equal(const SignedTreePair& f, const SignedTreePair& g);
SignedTreePair signed_refine_leaf(const SignedTreePair& f, std::size_t i);

TreePair phi(const SignedTreePair& f);

SignedTreePair random_signed(std::uint64_t seed, std::size_t leaf_budget);
// Every signed diagram with at most `max_leaves` leaves.
std::vector<SignedTreePair> all_signed(std::size_t max_leaves);

}  // namespace thompson
