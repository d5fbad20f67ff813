#pragma once

// Elements of the Higman-Thompson group V_n as tree-pair diagrams.
//
// A TreePair holds two complete antichains D, R of the n-ary tree and a
// bijection D -> R; it acts on K_n by the prefix substitution d.x -> s(d).x.
// Composition never reduces; reduce() gives the unique minimal diagram.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "thompson/cantor.hpp"

namespace thompson {

struct Leaf {
  Address domain;
  Address range;
  friend bool operator==(const Leaf&, const Leaf&) = default;
};

class TreePair {
 public:
  TreePair() : TreePair(identity(2)) {}

  static TreePair identity(int arity);
  // Validates that both sides are complete antichains.
  static TreePair from_leaves(int arity, std::vector<Leaf> leaves);
  // perm[k] is the position in sorted `range` of the image of sorted
  // domain[k].
  static TreePair from_perm(int arity, std::vector<Address> domain,
                            std::vector<Address> range,
                            const std::vector<std::size_t>& perm);

  // `V n : {D} -> {R} perm [i0 i1 ...]`
  static TreePair parse(std::string_view text, std::size_t line = 1);

  int arity() const { return arity_; }
  std::size_t size() const { return leaves_.size(); }
  // Sorted by domain address.
  const std::vector<Leaf>& leaves() const { return leaves_; }
  const Leaf& leaf(std::size_t i) const { return leaves_[i]; }
  std::vector<Address> domain() const;
  std::vector<Address> range() const;  // sorted
  std::vector<std::size_t> perm() const;
  std::size_t max_depth() const;

  // Leaf whose domain (range) address is a prefix of `a`, if any.
  std::optional<std::size_t> domain_leaf_above(const Address& a) const;
  std::optional<std::size_t> range_leaf_above(const Address& a) const;
  // Leaves whose domain (range) address extends `a`.
  std::vector<std::size_t> domain_leaves_below(const Address& a) const;
  std::vector<std::size_t> range_leaves_below(const Address& a) const;

  bool is_identity() const;
  bool is_reduced() const;

  std::string to_string() const;

  friend bool operator==(const TreePair& a, const TreePair& b) {
    return a.arity_ == b.arity_ && a.leaves_ == b.leaves_;
  }

 private:
  TreePair(int arity, std::vector<Leaf> leaves);
  void index();

  int arity_ = 2;
  std::vector<Leaf> leaves_;
  std::vector<std::size_t> by_range_;
  std::size_t domain_depth_ = 0;
  std::size_t range_depth_ = 0;
};

std::ostream& operator<<(std::ostream& os, const TreePair& f);

CantorPoint apply(const TreePair& f, const CantorPoint& p);
CantorPoint apply_inverse(const TreePair& f, const CantorPoint& p);
// Image of the interval K_a when it lies inside one domain leaf.
std::optional<Address> map_address(const TreePair& f, const Address& a);
ClopenSet map_clopen(const TreePair& f, const ClopenSet& s);

// g after f.
TreePair compose(const TreePair& f, const TreePair& g);
TreePair inverse(const TreePair& f);
TreePair reduce(const TreePair& f);
bool equal(const TreePair& f, const TreePair& g);
// f^k for any integer k, reduced.
TreePair power(const TreePair& f, long long k);
// x -> h(f(h^-1(x))).
TreePair conjugate(const TreePair& f, const TreePair& h);

// Splits domain leaf i with one caret on both sides.
TreePair refine_leaf(const TreePair& f, std::size_t i);
// Splits domain leaf i (and its image) along the finite shape `suffixes`,
// which must be a complete antichain below the root.
TreePair expand_leaf(const TreePair& f, std::size_t i,
                     const std::vector<Address>& suffixes);

TreePair random_element(std::uint64_t seed, int arity, std::size_t leaf_budget);
// Random complete antichain with `carets` splits.
std::vector<Address> random_tree(std::mt19937_64& rng, int arity,
                                 std::size_t carets);

}  // namespace thompson
