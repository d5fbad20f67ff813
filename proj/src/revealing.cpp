#include "thompson/revealing.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace thompson {

namespace {

class LeafView {
 public:
  explicit LeafView(const TreePair& f) : f_(f) {}

  bool in_domain(const Address& a) const {
    auto i = f_.domain_leaf_above(a);
    return i && f_.leaf(*i).domain == a;
  }
  bool in_range(const Address& a) const {
    auto i = f_.range_leaf_above(a);
    return i && f_.leaf(*i).range == a;
  }
  const Address& sigma(const Address& d) const {
    return f_.leaf(*f_.domain_leaf_above(d)).range;
  }
  const Address& sigma_inv(const Address& r) const {
    return f_.leaf(*f_.range_leaf_above(r)).domain;
  }

  // lambda, g(lambda), ... up to the first vertex that is not a domain leaf.
  std::vector<Address> forward(const Address& lambda) const {
    std::vector<Address> chain{lambda};
    while (in_domain(chain.back())) {
      chain.push_back(sigma(chain.back()));
      if (chain.back() == lambda) break;
    }
    return chain;
  }
  // lambda, g^-1(lambda), ... up to the first vertex that is not a range leaf.
  std::vector<Address> backward(const Address& lambda) const {
    std::vector<Address> chain{lambda};
    while (in_range(chain.back())) {
      chain.push_back(sigma_inv(chain.back()));
      if (chain.back() == lambda) break;
    }
    return chain;
  }

 private:
  const TreePair& f_;
};

std::vector<Address> suffixes_below(const std::vector<Address>& leaves,
                                    const Address& root) {
  std::vector<Address> out;
  for (const auto& a : leaves) out.push_back(a.suffix_from(root.depth()));
  return out;
}

TreePair expand_chain(TreePair f, const std::vector<Address>& domain_leaves,
                      const std::vector<Address>& shape) {
  for (const auto& d : domain_leaves) {
    f = expand_leaf(f, *f.domain_leaf_above(d), shape);
  }
  return f;
}

std::uint64_t lcm64(std::uint64_t a, std::uint64_t b) { return std::lcm(a, b); }

}  // namespace

const char* to_string(LeafKind kind) {
  switch (kind) {
    case LeafKind::NeutralPeriodic:
      return "neutral-periodic";
    case LeafKind::AttractorRoot:
      return "attractor";
    case LeafKind::RepellerRoot:
      return "repeller";
    case LeafKind::Transient:
      return "transient";
  }
  return "?";
}

RevealingPair describe(const TreePair& f) {
  RevealingPair rp{f, {}, {}};
  for (const auto& l : f.leaves()) {
    if (!f.range_leaf_above(l.domain)) rp.y_roots.push_back(l.domain);
    if (!f.domain_leaf_above(l.range)) rp.x_roots.push_back(l.range);
  }
  std::sort(rp.x_roots.begin(), rp.x_roots.end());
  std::sort(rp.y_roots.begin(), rp.y_roots.end());
  return rp;
}

bool satisfies_revealing_definition(const RevealingPair& rp) {
  const LeafView view(rp.base);
  for (const auto& x : rp.x_roots) {
    if (!x.is_strict_prefix_of(view.backward(x).back())) return false;
  }
  for (const auto& y : rp.y_roots) {
    if (!y.is_strict_prefix_of(view.forward(y).back())) return false;
  }
  return true;
}

RevealingPair to_revealing(const TreePair& f, std::size_t iteration_cap) {
  TreePair g = reduce(f);
  if (iteration_cap == 0) iteration_cap = 10 * g.size() * g.size();
  for (std::size_t iteration = 0;; ++iteration) {
    RevealingPair rp = describe(g);
    const LeafView view(g);
    bool fixed = false;
    for (const auto& x : rp.x_roots) {
      auto chain = view.backward(x);
      if (x.is_strict_prefix_of(chain.back())) continue;
      // Pull the component's shape back along the chain so that x becomes
      // neutral; the shape reappears under the chain's first vertex.
      std::vector<Address> below;
      for (auto i : g.domain_leaves_below(x)) below.push_back(g.leaf(i).domain);
      const auto shape = suffixes_below(below, x);
      chain.erase(chain.begin());
      g = expand_chain(g, chain, shape);
      fixed = true;
      break;
    }
    if (!fixed) {
      for (const auto& y : rp.y_roots) {
        auto chain = view.forward(y);
        if (y.is_strict_prefix_of(chain.back())) continue;
        std::vector<Address> below;
        for (auto i : g.range_leaves_below(y)) below.push_back(g.leaf(i).range);
        const auto shape = suffixes_below(below, y);
        chain.pop_back();
        g = expand_chain(g, chain, shape);
        fixed = true;
        break;
      }
    }
    if (!fixed) return rp;
    if (iteration + 1 >= iteration_cap) {
      throw CapExceeded("revealing construction exceeded " +
                        std::to_string(iteration_cap) + " iterations");
    }
  }
}

std::vector<LeafClass> classify_leaves(const RevealingPair& rp) {
  const TreePair& f = rp.base;
  const LeafView view(f);
  std::set<Address> vertices;
  for (const auto& l : f.leaves()) {
    vertices.insert(l.domain);
    vertices.insert(l.range);
  }
  const std::set<Address> xs(rp.x_roots.begin(), rp.x_roots.end());
  const std::set<Address> ys(rp.y_roots.begin(), rp.y_roots.end());
  auto root_above = [](const std::set<Address>& roots, const Address& a) {
    for (const auto& x : roots) {
      if (x.is_strict_prefix_of(a)) return std::optional<Address>(x);
    }
    return std::optional<Address>();
  };

  std::vector<LeafClass> out;
  for (const auto& lambda : vertices) {
    LeafClass c;
    c.leaf = lambda;
    auto fwd = view.forward(lambda);
    if (fwd.size() > 1 && fwd.back() == lambda) {
      c.kind = LeafKind::NeutralPeriodic;
      c.t = fwd.size() - 1;
      c.iac = {lambda};
      out.push_back(std::move(c));
      continue;
    }
    auto bwd = view.backward(lambda);
    if (bwd.size() > 1 && bwd.back() == lambda) {
      throw MalformedRevealing("backward cycle without forward cycle at " +
                               lambda.to_string());
    }
    c.s = fwd.size() - 1;
    c.r = bwd.size() - 1;
    c.iac.assign(bwd.rbegin(), bwd.rend());
    c.iac.insert(c.iac.end(), fwd.begin() + 1, fwd.end());
    const Address& a = bwd.back();
    const Address& b = fwd.back();
    if (ys.count(a)) {
      if (!a.is_strict_prefix_of(b)) {
        throw MalformedRevealing("Y-root " + a.to_string() + " is not an attractor");
      }
      c.kind = LeafKind::AttractorRoot;
    } else if (xs.count(b)) {
      if (!b.is_strict_prefix_of(a)) {
        throw MalformedRevealing("X-root " + b.to_string() + " is not a repeller");
      }
      c.kind = LeafKind::RepellerRoot;
    } else {
      auto source = root_above(xs, a);
      auto target = root_above(ys, b);
      if (!source || !target) {
        throw MalformedRevealing("transient chain of " + lambda.to_string() +
                                 " does not run from X to Y");
      }
      c.kind = LeafKind::Transient;
      c.source = *source;
      c.target = *target;
    }
    out.push_back(std::move(c));
  }
  return out;
}

// ------------------------------------------------------------- dynamics

std::vector<CantorPoint> DynamicalData::att_points() const {
  std::vector<CantorPoint> out;
  for (const auto& p : att) out.push_back(p.point);
  return out;
}

std::vector<CantorPoint> DynamicalData::rep_points() const {
  std::vector<CantorPoint> out;
  for (const auto& p : rep) out.push_back(p.point);
  return out;
}

std::vector<CantorPoint> DynamicalData::per0() const {
  auto out = att_points();
  for (const auto& p : rep) out.push_back(p.point);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t DynamicalData::stabilizing_power() const {
  std::uint64_t k = finite_order_on_U;
  for (const auto& p : att) k = lcm64(k, p.period);
  for (const auto& p : rep) k = lcm64(k, p.period);
  return k;
}

namespace {

std::vector<PeriodicPoint> orbit_of(const TreePair& f, const CantorPoint& p,
                                    std::size_t period, bool backwards) {
  std::vector<CantorPoint> orbit{p};
  for (std::size_t i = 1; i < period; ++i) {
    orbit.push_back(backwards ? apply_inverse(f, orbit.back())
                              : apply(f, orbit.back()));
  }
  const CantorPoint least = *std::min_element(orbit.begin(), orbit.end());
  std::vector<PeriodicPoint> out;
  for (const auto& q : orbit) out.push_back({q, period, least});
  return out;
}

void sort_points(std::vector<PeriodicPoint>& v) {
  std::sort(v.begin(), v.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) {
    return a.point < b.point;
  });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

DynamicalData dynamics(const RevealingPair& rp) {
  const TreePair& f = rp.base;
  const LeafView view(f);
  DynamicalData d;
  for (const auto& alpha : rp.y_roots) {
    const auto chain = view.forward(alpha);
    const Address& b = chain.back();
    const CantorPoint p(alpha, b.suffix_from(alpha.depth()));
    auto orbit = orbit_of(f, p, chain.size() - 1, false);
    d.att.insert(d.att.end(), orbit.begin(), orbit.end());
  }
  for (const auto& beta : rp.x_roots) {
    const auto chain = view.backward(beta);
    const Address& a = chain.back();
    const CantorPoint p(beta, a.suffix_from(beta.depth()));
    auto orbit = orbit_of(f, p, chain.size() - 1, true);
    d.rep.insert(d.rep.end(), orbit.begin(), orbit.end());
  }
  sort_points(d.att);
  sort_points(d.rep);

  std::vector<Address> periodic;
  for (const auto& l : f.leaves()) {
    if (!view.in_range(l.domain)) continue;
    const auto chain = view.forward(l.domain);
    if (chain.size() > 1 && chain.back() == l.domain) {
      periodic.push_back(l.domain);
      d.finite_order_on_U = lcm64(d.finite_order_on_U, chain.size() - 1);
    }
  }
  d.U = ClopenSet::normalize(f.arity(), periodic);
  d.V = complement(d.U);
  return d;
}

DynamicalData dynamics(const TreePair& f) { return dynamics(to_revealing(f)); }

// --------------------------------------------------------- brute force

namespace {

struct Piece {
  std::string from;
  std::string to;
};

bool has_prefix(const std::string& w, const std::string& p) {
  return w.size() >= p.size() && w.compare(0, p.size(), p) == 0;
}

class Stepper {
 public:
  explicit Stepper(const TreePair& f) : arity_(f.arity()) {
    for (const auto& l : f.leaves()) {
      leaves_.push_back({l.domain.digits(), l.range.digits()});
      depth_ = std::max(depth_, l.domain.depth());
    }
  }

  // Pieces of (f o piece), split along the domain leaves.
  void extend(const Piece& p, std::vector<Piece>& out) const {
    for (const auto& l : leaves_) {
      if (has_prefix(p.to, l.from)) {
        out.push_back({p.from, l.to + p.to.substr(l.from.size())});
        return;
      }
    }
    for (const auto& l : leaves_) {
      if (has_prefix(l.from, p.to)) {
        out.push_back({p.from + l.from.substr(p.to.size()), l.to});
      }
    }
  }

  CantorPoint step(const CantorPoint& p) const {
    const std::string head = p.prefix(depth_).digits();
    for (const auto& l : leaves_) {
      if (has_prefix(head, l.from)) {
        return p.shifted(l.from.size()).prepended(Address(arity_, l.to));
      }
    }
    throw Error("domain leaves do not cover the point");
  }

  std::optional<std::string> step(const std::string& a) const {
    for (const auto& l : leaves_) {
      if (has_prefix(a, l.from)) return l.to + a.substr(l.from.size());
    }
    return std::nullopt;
  }

 private:
  int arity_;
  std::vector<Piece> leaves_;
  std::size_t depth_ = 0;
};

}  // namespace

DynamicalData brute_dynamics(const TreePair& f, std::size_t depth,
                             std::size_t steps) {
  const int n = f.arity();
  const Stepper stepper(f);
  DynamicalData d;
  std::set<CantorPoint> seen_att, seen_rep;
  std::vector<Address> periodic;
  ClopenSet covered(n);

  auto record = [&](const CantorPoint& p, std::set<CantorPoint>& seen,
                    std::vector<PeriodicPoint>& out) {
    if (seen.count(p)) return;
    std::vector<CantorPoint> orbit{p};
    for (CantorPoint q = stepper.step(p); q != p; q = stepper.step(q)) {
      orbit.push_back(q);
    }
    const CantorPoint least = *std::min_element(orbit.begin(), orbit.end());
    for (const auto& q : orbit) {
      seen.insert(q);
      out.push_back({q, orbit.size(), least});
    }
  };

  std::vector<Piece> frontier{{std::string(), std::string()}};
  for (std::size_t k = 1; k <= steps && !frontier.empty(); ++k) {
    std::vector<Piece> next;
    next.reserve(frontier.size() + 8);
    for (const auto& p : frontier) stepper.extend(p, next);
    frontier.clear();
    for (auto& p : next) {
      if (p.from.size() > depth) continue;
      if (p.from == p.to) {
        const Address a(n, p.from);
        if (!covered.contains(a)) {
          std::size_t period = 1;
          for (auto img = stepper.step(p.from); img && *img != p.from;
               img = stepper.step(*img)) {
            ++period;
          }
          covered = unite(covered, ClopenSet::interval(a));
          d.finite_order_on_U = lcm64(d.finite_order_on_U, period);
        }
      } else if (has_prefix(p.to, p.from)) {
        record(CantorPoint(Address(n, p.from), Address(n, p.to.substr(p.from.size()))),
               seen_att, d.att);
      } else if (has_prefix(p.from, p.to)) {
        record(CantorPoint(Address(n, p.to), Address(n, p.from.substr(p.to.size()))),
               seen_rep, d.rep);
      }
      frontier.push_back(std::move(p));
    }
  }
  sort_points(d.att);
  sort_points(d.rep);
  d.U = covered;
  d.V = complement(covered);
  return d;
}

std::string format_dynamics(const DynamicalData& d) {
  std::string s;
  for (const auto& p : d.att) {
    if (p.point == p.orbit_min) {
      s += "ATT " + p.point.to_string() + " period=" + std::to_string(p.period) + "\n";
    }
  }
  for (const auto& p : d.rep) {
    if (p.point == p.orbit_min) {
      s += "REP " + p.point.to_string() + " period=" + std::to_string(p.period) + "\n";
    }
  }
  s += "U = " + d.U.to_string() + "\n";
  s += "V = " + d.V.to_string() + "\n";
  return s;
}

}  // namespace thompson
