#include "thompson/element.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "text.hpp"

namespace thompson {

namespace {

bool domain_less(const Leaf& a, const Leaf& b) { return a.domain < b.domain; }

bool is_complete_antichain(int arity, std::vector<Address> list) {
  if (list.empty()) return false;
  std::sort(list.begin(), list.end());
  for (std::size_t i = 0; i + 1 < list.size(); ++i) {
    if (list[i].is_prefix_of(list[i + 1])) return false;
  }
  return ClopenSet::normalize(arity, std::move(list)).is_whole();
}

}  // namespace

TreePair::TreePair(int arity, std::vector<Leaf> leaves)
    : arity_(arity), leaves_(std::move(leaves)) {
  index();
}

void TreePair::index() {
  std::sort(leaves_.begin(), leaves_.end(), domain_less);
  by_range_.resize(leaves_.size());
  std::iota(by_range_.begin(), by_range_.end(), std::size_t{0});
  std::sort(by_range_.begin(), by_range_.end(), [&](std::size_t a, std::size_t b) {
    return leaves_[a].range < leaves_[b].range;
  });
  domain_depth_ = range_depth_ = 0;
  for (const auto& l : leaves_) {
    domain_depth_ = std::max(domain_depth_, l.domain.depth());
    range_depth_ = std::max(range_depth_, l.range.depth());
  }
}

TreePair TreePair::identity(int arity) {
  return TreePair(arity, {Leaf{Address(arity), Address(arity)}});
}

TreePair TreePair::from_leaves(int arity, std::vector<Leaf> leaves) {
  std::vector<Address> d, r;
  for (const auto& l : leaves) {
    if (l.domain.arity() != arity || l.range.arity() != arity) {
      throw ArityMismatch("leaf arity differs from element arity");
    }
    d.push_back(l.domain);
    r.push_back(l.range);
  }
  if (!is_complete_antichain(arity, d)) {
    throw InvalidArgument("domain leaves are not a complete antichain");
  }
  if (!is_complete_antichain(arity, r)) {
    throw InvalidArgument("range leaves are not a complete antichain");
  }
  return TreePair(arity, std::move(leaves));
}

TreePair TreePair::from_perm(int arity, std::vector<Address> domain,
                             std::vector<Address> range,
                             const std::vector<std::size_t>& perm) {
  if (domain.size() != range.size() || perm.size() != domain.size()) {
    throw InvalidArgument("domain, range and perm sizes differ");
  }
  std::sort(domain.begin(), domain.end());
  std::sort(range.begin(), range.end());
  std::vector<bool> used(perm.size(), false);
  std::vector<Leaf> leaves;
  leaves.reserve(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (perm[k] >= perm.size() || used[perm[k]]) {
      throw InvalidArgument("perm is not a permutation");
    }
    used[perm[k]] = true;
    leaves.push_back({domain[k], range[perm[k]]});
  }
  return from_leaves(arity, std::move(leaves));
}

std::vector<Address> TreePair::domain() const {
  std::vector<Address> out;
  out.reserve(leaves_.size());
  for (const auto& l : leaves_) out.push_back(l.domain);
  return out;
}

std::vector<Address> TreePair::range() const {
  std::vector<Address> out;
  out.reserve(leaves_.size());
  for (std::size_t i : by_range_) out.push_back(leaves_[i].range);
  return out;
}

std::vector<std::size_t> TreePair::perm() const {
  std::vector<std::size_t> position(leaves_.size());
  for (std::size_t k = 0; k < by_range_.size(); ++k) position[by_range_[k]] = k;
  return position;
}

std::size_t TreePair::max_depth() const {
  return std::max(domain_depth_, range_depth_);
}

std::optional<std::size_t> TreePair::domain_leaf_above(const Address& a) const {
  auto it = std::upper_bound(
      leaves_.begin(), leaves_.end(), a,
      [](const Address& x, const Leaf& l) { return x < l.domain; });
  if (it == leaves_.begin()) return std::nullopt;
  --it;
  if (!it->domain.is_prefix_of(a)) return std::nullopt;
  return static_cast<std::size_t>(it - leaves_.begin());
}

std::optional<std::size_t> TreePair::range_leaf_above(const Address& a) const {
  auto it = std::upper_bound(
      by_range_.begin(), by_range_.end(), a,
      [&](const Address& x, std::size_t i) { return x < leaves_[i].range; });
  if (it == by_range_.begin()) return std::nullopt;
  --it;
  if (!leaves_[*it].range.is_prefix_of(a)) return std::nullopt;
  return *it;
}

std::vector<std::size_t> TreePair::domain_leaves_below(const Address& a) const {
  std::vector<std::size_t> out;
  auto it = std::lower_bound(
      leaves_.begin(), leaves_.end(), a,
      [](const Leaf& l, const Address& x) { return l.domain < x; });
  for (; it != leaves_.end() && a.is_prefix_of(it->domain); ++it) {
    out.push_back(static_cast<std::size_t>(it - leaves_.begin()));
  }
  return out;
}

std::vector<std::size_t> TreePair::range_leaves_below(const Address& a) const {
  std::vector<std::size_t> out;
  auto it = std::lower_bound(
      by_range_.begin(), by_range_.end(), a,
      [&](std::size_t i, const Address& x) { return leaves_[i].range < x; });
  for (; it != by_range_.end() && a.is_prefix_of(leaves_[*it].range); ++it) {
    out.push_back(*it);
  }
  return out;
}

bool TreePair::is_identity() const {
  return std::all_of(leaves_.begin(), leaves_.end(),
                     [](const Leaf& l) { return l.domain == l.range; });
}

bool TreePair::is_reduced() const { return reduce(*this).size() == size(); }

std::string TreePair::to_string() const {
  std::string s = "V " + std::to_string(arity_) + " : " +
                  detail::address_list(domain()) + " -> " +
                  detail::address_list(range()) + " perm [";
  const auto p = perm();
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) s += " ";
    s += std::to_string(p[k]);
  }
  return s + "]";
}

std::ostream& operator<<(std::ostream& os, const TreePair& f) {
  return os << f.to_string();
}

// ------------------------------------------------------------------ text

namespace detail {

std::vector<Address> parse_address_list(Scanner& in, int arity) {
  in.expect("{");
  const std::size_t start = in.pos();
  const auto body = in.until('}');
  std::vector<Address> out;
  std::size_t from = 0;
  while (from <= body.size()) {
    const auto comma = body.find(',', from);
    const auto item = body.substr(
        from, comma == std::string_view::npos ? std::string_view::npos
                                              : comma - from);
    bool blank = item.find_first_not_of(" \t") == std::string_view::npos;
    if (blank) {
      if (body.find_first_not_of(" \t") == std::string_view::npos) break;
      in.fail_at("empty address in list", start + from);
    }
    try {
      out.push_back(Address::parse(item, arity));
    } catch (const ParseError&) {
      in.fail_at("bad address '" + std::string(item) + "'", start + from);
    }
    if (comma == std::string_view::npos) break;
    from = comma + 1;
  }
  return out;
}

std::string address_list(const std::vector<Address>& list) {
  std::string s = "{";
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) s += ",";
    s += list[i].to_string();
  }
  return s + "}";
}

TreePair parse_tree_pair(Scanner& in) {
  const std::size_t start = in.pos();
  in.expect("V");
  const long long n = in.integer();
  if (n < 2 || n > kMaxArity) in.fail("arity out of range");
  const int arity = static_cast<int>(n);
  in.expect(":");
  auto domain = parse_address_list(in, arity);
  in.expect("->");
  auto range = parse_address_list(in, arity);
  in.expect("perm");
  in.expect("[");
  std::vector<std::size_t> perm;
  while (!in.accept("]")) {
    if (in.done()) in.fail("unterminated perm");
    const long long v = in.integer();
    if (v < 0) in.fail("negative perm entry");
    perm.push_back(static_cast<std::size_t>(v));
  }
  try {
    return TreePair::from_perm(arity, std::move(domain), std::move(range), perm);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    in.fail_at(e.what(), start);
  }
}

}  // namespace detail

TreePair TreePair::parse(std::string_view text, std::size_t line) {
  detail::Scanner in(text, line);
  TreePair f = detail::parse_tree_pair(in);
  if (!in.done()) in.fail("trailing input");
  return f;
}

// ---------------------------------------------------------------- action

CantorPoint apply(const TreePair& f, const CantorPoint& p) {
  const auto i = f.domain_leaf_above(p.prefix(f.max_depth()));
  const Leaf& l = f.leaf(*i);
  return p.shifted(l.domain.depth()).prepended(l.range);
}

CantorPoint apply_inverse(const TreePair& f, const CantorPoint& p) {
  const auto i = f.range_leaf_above(p.prefix(f.max_depth()));
  const Leaf& l = f.leaf(*i);
  return p.shifted(l.range.depth()).prepended(l.domain);
}

std::optional<Address> map_address(const TreePair& f, const Address& a) {
  const auto i = f.domain_leaf_above(a);
  if (!i) return std::nullopt;
  const Leaf& l = f.leaf(*i);
  return l.range + a.suffix_from(l.domain.depth());
}

ClopenSet map_clopen(const TreePair& f, const ClopenSet& s) {
  if (s.arity() != f.arity()) throw ArityMismatch("clopen set arity");
  std::vector<Address> out;
  for (const auto& a : s.intervals()) {
    if (auto image = map_address(f, a)) {
      out.push_back(*image);
    } else {
      for (std::size_t j : f.domain_leaves_below(a)) {
        out.push_back(f.leaf(j).range);
      }
    }
  }
  return ClopenSet::normalize(f.arity(), std::move(out));
}

// ----------------------------------------------------------------- group

TreePair compose(const TreePair& f, const TreePair& g) {
  if (f.arity() != g.arity()) throw ArityMismatch("compose: arity mismatch");
  std::vector<Leaf> out;
  out.reserve(f.size() + g.size());
  for (const auto& l : f.leaves()) {
    if (auto j = g.domain_leaf_above(l.range)) {
      const Leaf& m = g.leaf(*j);
      out.push_back({l.domain, m.range + l.range.suffix_from(m.domain.depth())});
    } else {
      for (std::size_t k : g.domain_leaves_below(l.range)) {
        const Leaf& m = g.leaf(k);
        out.push_back({l.domain + m.domain.suffix_from(l.range.depth()), m.range});
      }
    }
  }
  return TreePair::from_leaves(f.arity(), std::move(out));
}

TreePair inverse(const TreePair& f) {
  std::vector<Leaf> out;
  out.reserve(f.size());
  for (const auto& l : f.leaves()) out.push_back({l.range, l.domain});
  return TreePair::from_leaves(f.arity(), std::move(out));
}

TreePair reduce(const TreePair& f) {
  const int n = f.arity();
  const std::size_t un = static_cast<std::size_t>(n);
  // Leaves arrive in domain order, so a sibling family of domain addresses
  // is contiguous and collapses as soon as its last child is pushed.
  std::vector<Leaf> stack;
  stack.reserve(f.size());
  for (const auto& l : f.leaves()) {
    stack.push_back(l);
    while (stack.size() >= un) {
      const Leaf& top = stack.back();
      if (top.domain.is_root() || top.range.is_root()) break;
      if (top.domain[top.domain.depth() - 1] != n - 1) break;
      const std::size_t base = stack.size() - un;
      const Address dp = top.domain.parent();
      const Address rp = top.range.parent();
      bool family = true;
      for (std::size_t k = 0; k < un && family; ++k) {
        const Leaf& m = stack[base + k];
        family = m.domain.depth() == dp.depth() + 1 &&
                 m.range.depth() == rp.depth() + 1 &&
                 m.domain[dp.depth()] == static_cast<int>(k) &&
                 m.range[rp.depth()] == static_cast<int>(k) &&
                 dp.is_prefix_of(m.domain) && rp.is_prefix_of(m.range);
      }
      if (!family) break;
      stack.resize(base);
      stack.push_back({dp, rp});
    }
  }
  return TreePair::from_leaves(n, std::move(stack));
}

bool equal(const TreePair& f, const TreePair& g) {
  return f.arity() == g.arity() && reduce(f) == reduce(g);
}

TreePair power(const TreePair& f, long long k) {
  TreePair base = reduce(k < 0 ? inverse(f) : f);
  unsigned long long e = k < 0 ? 0ULL - static_cast<unsigned long long>(k)
                               : static_cast<unsigned long long>(k);
  TreePair result = TreePair::identity(f.arity());
  while (e) {
    if (e & 1) result = reduce(compose(result, base));
    e >>= 1;
    if (e) base = reduce(compose(base, base));
  }
  return result;
}

TreePair conjugate(const TreePair& f, const TreePair& h) {
  return reduce(compose(compose(inverse(h), f), h));
}

TreePair expand_leaf(const TreePair& f, std::size_t i,
                     const std::vector<Address>& suffixes) {
  if (!is_complete_antichain(f.arity(), suffixes)) {
    throw InvalidArgument("expansion shape is not a complete antichain");
  }
  std::vector<Leaf> out;
  out.reserve(f.size() + suffixes.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Leaf& l = f.leaf(k);
    if (k != i) {
      out.push_back(l);
      continue;
    }
    for (const auto& s : suffixes) out.push_back({l.domain + s, l.range + s});
  }
  return TreePair::from_leaves(f.arity(), std::move(out));
}

TreePair refine_leaf(const TreePair& f, std::size_t i) {
  std::vector<Address> caret;
  for (int d = 0; d < f.arity(); ++d) caret.push_back(Address(f.arity()).child(d));
  return expand_leaf(f, i, caret);
}

// ---------------------------------------------------------------- random

std::vector<Address> random_tree(std::mt19937_64& rng, int arity,
                                 std::size_t carets) {
  std::vector<Address> leaves{Address(arity)};
  for (std::size_t c = 0; c < carets; ++c) {
    std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
    const std::size_t i = pick(rng);
    const Address a = leaves[i];
    leaves[i] = a.child(0);
    for (int d = 1; d < arity; ++d) leaves.push_back(a.child(d));
  }
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

TreePair random_element(std::uint64_t seed, int arity, std::size_t leaf_budget) {
  if (leaf_budget < 1) throw InvalidArgument("leaf budget must be positive");
  if (arity < 2 || arity > kMaxArity) throw InvalidArgument("arity out of range");
  std::mt19937_64 rng(seed);
  const std::size_t max_carets =
      (leaf_budget - 1) / static_cast<std::size_t>(arity - 1);
  std::uniform_int_distribution<std::size_t> count(0, max_carets);
  const std::size_t carets = count(rng);
  auto domain = random_tree(rng, arity, carets);
  auto range = random_tree(rng, arity, carets);
  std::vector<std::size_t> perm(domain.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  return TreePair::from_perm(arity, std::move(domain), std::move(range), perm);
}

}  // namespace thompson
