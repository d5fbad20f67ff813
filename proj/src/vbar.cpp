#include "thompson/vbar.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "text.hpp"

namespace thompson {

namespace {

struct SignedLeaf {
  Address domain;
  Address range;
  bool reversed;
};

SignedTreePair assemble(std::vector<SignedLeaf> leaves) {
  std::sort(leaves.begin(), leaves.end(),
            [](const SignedLeaf& a, const SignedLeaf& b) { return a.domain < b.domain; });
  std::vector<Leaf> plain;
  std::vector<bool> signs;
  for (auto& l : leaves) {
    plain.push_back({l.domain, l.range});
    signs.push_back(l.reversed);
  }
  return SignedTreePair(TreePair::from_leaves(2, std::move(plain)), std::move(signs));
}

std::vector<SignedLeaf> unpack(const SignedTreePair& f) {
  std::vector<SignedLeaf> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Leaf& l = f.base().leaf(i);
    out.push_back({l.domain, l.range, f.reversed()[i]});
  }
  return out;
}

}  // namespace

SignedTreePair::SignedTreePair(TreePair base)
    : base_(std::move(base)), reversed_(base_.size(), false) {
  if (base_.arity() != 2) throw ArityMismatch("signed elements are binary");
}

SignedTreePair::SignedTreePair(TreePair base, std::vector<bool> reversed)
    : base_(std::move(base)), reversed_(std::move(reversed)) {
  if (base_.arity() != 2) throw ArityMismatch("signed elements are binary");
  if (reversed_.size() != base_.size()) {
    throw InvalidArgument("one sign per leaf required");
  }
}

SignedTreePair SignedTreePair::identity() { return SignedTreePair(TreePair::identity(2)); }

SignedTreePair SignedTreePair::reflection() {
  return SignedTreePair(TreePair::identity(2), {true});
}

SignedTreePair SignedTreePair::parse(std::string_view text, std::size_t line) {
  detail::Scanner in(text, line);
  TreePair base = detail::parse_tree_pair(in);
  std::vector<bool> signs(base.size(), false);
  if (in.accept("signs")) {
    in.expect("[");
    signs.clear();
    while (!in.accept("]")) {
      if (in.accept("+")) {
        signs.push_back(false);
      } else if (in.accept("-")) {
        signs.push_back(true);
      } else {
        in.fail("expected '+', '-' or ']'");
      }
    }
    if (signs.size() != base.size()) in.fail("one sign per leaf required");
  }
  if (!in.done()) in.fail("trailing input");
  return SignedTreePair(std::move(base), std::move(signs));
}

bool SignedTreePair::all_positive() const {
  return std::none_of(reversed_.begin(), reversed_.end(), [](bool b) { return b; });
}

std::string SignedTreePair::to_string() const {
  std::string s = base_.to_string() + " signs [";
  for (std::size_t i = 0; i < reversed_.size(); ++i) {
    if (i) s += " ";
    s += reversed_[i] ? "-" : "+";
  }
  return s + "]";
}

CantorPoint signed_apply(const SignedTreePair& f, const CantorPoint& p) {
  const auto i = *f.base().domain_leaf_above(p.prefix(f.base().max_depth()));
  const Leaf& l = f.base().leaf(i);
  const CantorPoint tail = p.shifted(l.domain.depth());
  return (f.reversed()[i] ? complement(tail) : tail).prepended(l.range);
}

SignedTreePair signed_compose(const SignedTreePair& f, const SignedTreePair& g) {
  std::vector<SignedLeaf> out;
  for (const auto& l : unpack(f)) {
    if (auto j = g.base().domain_leaf_above(l.range)) {
      const Leaf& m = g.base().leaf(*j);
      const bool rev = g.reversed()[*j];
      const Address t = l.range.suffix_from(m.domain.depth());
      out.push_back({l.domain, m.range + (rev ? complement(t) : t), l.reversed != rev});
    } else {
      for (std::size_t k : g.base().domain_leaves_below(l.range)) {
        const Leaf& m = g.base().leaf(k);
        const Address t = m.domain.suffix_from(l.range.depth());
        out.push_back({l.domain + (l.reversed ? complement(t) : t), m.range,
                       l.reversed != g.reversed()[k]});
      }
    }
  }
  return assemble(std::move(out));
}

SignedTreePair signed_inverse(const SignedTreePair& f) {
  std::vector<SignedLeaf> out;
  for (const auto& l : unpack(f)) out.push_back({l.range, l.domain, l.reversed});
  return assemble(std::move(out));
}

SignedTreePair signed_reduce(const SignedTreePair& f) {
  std::vector<SignedLeaf> stack;
  for (const auto& l : unpack(f)) {
    stack.push_back(l);
    while (stack.size() >= 2) {
      const SignedLeaf& b = stack[stack.size() - 1];
      const SignedLeaf& a = stack[stack.size() - 2];
      if (b.domain.is_root() || b.range.is_root() || a.range.is_root()) break;
      if (a.reversed != b.reversed || a.domain.depth() != b.domain.depth()) break;
      if (a.domain.parent() != b.domain.parent() || a.range.depth() != b.range.depth() ||
          a.range.parent() != b.range.parent()) {
        break;
      }
      const std::size_t last = a.domain.depth() - 1;
      const std::size_t rlast = a.range.depth() - 1;
      if (a.domain[last] != 0 || b.domain[last] != 1) break;
      // Preserving pieces keep the child order, reversing ones swap it.
      const int expect_a = a.reversed ? 1 : 0;
      if (a.range[rlast] != expect_a || b.range[rlast] != 1 - expect_a) break;
      SignedLeaf merged{a.domain.parent(), a.range.parent(), a.reversed};
      stack.pop_back();
      stack.pop_back();
      stack.push_back(std::move(merged));
    }
  }
  return assemble(std::move(stack));
}

bool signed_equal(const SignedTreePair& f, const SignedTreePair& g) {
  return signed_reduce(f) == signed_reduce(g);
}

SignedTreePair signed_refine_leaf(const SignedTreePair& f, std::size_t i) {
  auto leaves = unpack(f);
  const SignedLeaf l = leaves[i];
  leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(i));
  for (int d = 0; d < 2; ++d) {
    const int image = l.reversed ? 1 - d : d;
    leaves.push_back({l.domain.child(d), l.range.child(image), l.reversed});
  }
  return assemble(std::move(leaves));
}

TreePair phi(const SignedTreePair& f) {
  const Address zero = Address(2).child(0);
  const Address one = Address(2).child(1);
  std::vector<Leaf> out;
  for (const auto& l : unpack(f)) {
    const Address copy0 = zero + l.domain;
    const Address mirror1 = one + complement(l.domain);
    if (!l.reversed) {
      out.push_back({copy0, zero + l.range});
      out.push_back({mirror1, one + complement(l.range)});
    } else {
      out.push_back({copy0, one + complement(l.range)});
      out.push_back({mirror1, zero + l.range});
    }
  }
  return TreePair::from_leaves(2, std::move(out));
}

SignedTreePair random_signed(std::uint64_t seed, std::size_t leaf_budget) {
  TreePair base = random_element(seed, 2, leaf_budget);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::bernoulli_distribution coin(0.5);
  std::vector<bool> signs;
  for (std::size_t i = 0; i < base.size(); ++i) signs.push_back(coin(rng));
  return SignedTreePair(std::move(base), std::move(signs));
}

namespace {

// Complete binary antichains with exactly `leaves` members.
std::vector<std::vector<Address>> trees_with(std::size_t leaves) {
  std::set<std::vector<Address>> level{{Address(2)}};
  for (std::size_t k = 1; k < leaves; ++k) {
    std::set<std::vector<Address>> next;
    for (const auto& t : level) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        auto u = t;
        u.erase(u.begin() + static_cast<std::ptrdiff_t>(i));
        u.push_back(t[i].child(0));
        u.push_back(t[i].child(1));
        std::sort(u.begin(), u.end());
        next.insert(u);
      }
    }
    level = std::move(next);
  }
  return {level.begin(), level.end()};
}

}  // namespace

std::vector<SignedTreePair> all_signed(std::size_t max_leaves) {
  std::vector<SignedTreePair> out;
  for (std::size_t k = 1; k <= max_leaves; ++k) {
    const auto trees = trees_with(k);
    for (const auto& d : trees) {
      for (const auto& r : trees) {
        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        do {
          const TreePair base = TreePair::from_perm(2, d, r, perm);
          for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
            std::vector<bool> signs(k);
            for (std::size_t i = 0; i < k; ++i) signs[i] = (mask >> i) & 1;
            out.emplace_back(base, signs);
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
    }
  }
  return out;
}

}  // namespace thompson
