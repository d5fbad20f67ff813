#include "thompson/tits.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "scan.hpp"

namespace thompson {

namespace {

using Points = std::vector<CantorPoint>;

Points sorted_unique(Points p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

bool has(const Points& sorted, const CantorPoint& p) {
  return std::binary_search(sorted.begin(), sorted.end(), p);
}

Points meet(const Points& a, const Points& b) {
  Points out;
  for (const auto& p : a) {
    if (has(b, p)) out.push_back(p);
  }
  return out;
}

Points minus(const Points& a, const Points& b) {
  Points out;
  for (const auto& p : a) {
    if (!has(b, p)) out.push_back(p);
  }
  return out;
}

Points join(Points a, const Points& b) {
  a.insert(a.end(), b.begin(), b.end());
  return sorted_unique(std::move(a));
}

CantorPoint leftmost(const Address& a) { return CantorPoint(a, Address(a.arity(), std::string(1, '\0'))); }

CantorPoint rightmost(const Address& a) {
  return CantorPoint(a, Address(a.arity(), std::string(1, static_cast<char>(a.arity() - 1))));
}

// Letters of a plain reduced word: (generator, +-1).
using Letters = std::vector<std::pair<std::size_t, int>>;

SubgroupWord from_letters(const Letters& letters) {
  SubgroupWord w;
  for (auto [g, e] : letters) w.factors.push_back({false, g, {}, e});
  return w;
}

CantorPoint act(const Subgroup& g, std::pair<std::size_t, int> l, const CantorPoint& p) {
  return l.second > 0 ? apply(g.generators[l.first], p) : apply_inverse(g.generators[l.first], p);
}

std::vector<std::pair<std::size_t, int>> alphabet(std::size_t generators) {
  std::vector<std::pair<std::size_t, int>> out;
  for (std::size_t i = 0; i < generators; ++i) {
    out.emplace_back(i, 1);
    out.emplace_back(i, -1);
  }
  return out;
}

std::vector<Letters> reduced_letter_words(std::size_t generators, std::size_t max_length) {
  const auto letters = alphabet(generators);
  std::vector<Letters> out;
  std::vector<Letters> layer{Letters{}};
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::vector<Letters> next;
    for (const auto& w : layer) {
      for (const auto& l : letters) {
        if (!w.empty() && w.back().first == l.first && w.back().second == -l.second) continue;
        Letters v = w;
        v.push_back(l);
        next.push_back(std::move(v));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// ---- word text

class WordReader {
 public:
  explicit WordReader(detail::Scanner& in) : in_(in) {}

  std::vector<SubgroupWord::Factor> sequence() {
    std::vector<SubgroupWord::Factor> out;
    while (!in_.done()) {
      const char c = in_.peek();
      if (c != 'g' && c != '(') break;
      SubgroupWord::Factor f;
      if (in_.accept("(")) {
        f.is_group = true;
        f.group = sequence();
        in_.expect(")");
      } else {
        const std::size_t at = in_.pos();
        const std::string_view tok = in_.token("()^");
        const std::string_view digits = tok.substr(1);
        if (digits.empty() || digits.size() > 9 ||
            digits.find_first_not_of("0123456789") != std::string_view::npos) {
          in_.fail_at("bad generator '" + std::string(tok) + "'", at);
        }
        f.generator = std::stoul(std::string(digits));
      }
      if (in_.accept("^")) f.power = in_.integer();
      if (f.power != 0) out.push_back(std::move(f));
    }
    return out;
  }

 private:
  detail::Scanner& in_;
};

std::string factors_to_string(const std::vector<SubgroupWord::Factor>& factors) {
  std::string s;
  for (const auto& f : factors) {
    if (!s.empty()) s += " ";
    s += f.is_group ? "(" + factors_to_string(f.group) + ")" : "g" + std::to_string(f.generator);
    if (f.power != 1) s += "^" + std::to_string(f.power);
  }
  return s;
}

std::vector<SubgroupWord::Factor> inverse_factors(const std::vector<SubgroupWord::Factor>& fs) {
  std::vector<SubgroupWord::Factor> out(fs.rbegin(), fs.rend());
  for (auto& f : out) f.power = -f.power;
  return out;
}

TreePair evaluate_factors(const Subgroup& group, const std::vector<SubgroupWord::Factor>& fs) {
  TreePair e = TreePair::identity(group.arity);
  for (const auto& f : fs) {
    TreePair base;
    if (f.is_group) {
      base = evaluate_factors(group, f.group);
    } else {
      if (f.generator >= group.generators.size()) {
        throw InvalidArgument("no generator g" + std::to_string(f.generator));
      }
      base = group.generators[f.generator];
    }
    e = reduce(compose(power(base, f.power), e));
  }
  return e;
}

// ---- ping-pong

struct Powers {
  TreePair base;
  std::vector<TreePair> up{};    // up[m] = base^m
  std::vector<TreePair> down{};  // down[m] = base^-m

  const TreePair& pos(std::size_t m) {
    extend(m);
    return up[m];
  }
  const TreePair& neg(std::size_t m) {
    extend(m);
    return down[m];
  }
  void extend(std::size_t m) {
    if (up.empty()) {
      up.push_back(TreePair::identity(base.arity()));
      down.push_back(TreePair::identity(base.arity()));
    }
    const TreePair inv = inverse(base);
    while (up.size() <= m) {
      up.push_back(reduce(compose(up.back(), base)));
      down.push_back(reduce(compose(down.back(), inv)));
    }
  }
};

struct Sets {
  ClopenSet x, a_plus, a_minus, b_plus, b_minus;

  const ClopenSet& named(const std::string& name) const {
    if (name == "X") return x;
    if (name == "A+") return a_plus;
    if (name == "A-") return a_minus;
    if (name == "B+") return b_plus;
    return b_minus;
  }
};

Sets pingpong_sets(const DynamicalData& df, const DynamicalData& dg, int n, const Rational& eps) {
  Sets s;
  s.a_plus = neighborhood(df.att_points(), n, eps);
  s.a_minus = neighborhood(df.rep_points(), n, eps);
  s.b_plus = neighborhood(dg.att_points(), n, eps);
  s.b_minus = neighborhood(dg.rep_points(), n, eps);
  ClopenSet removed = unite(df.U, dg.U);
  for (const auto* p : {&s.a_plus, &s.a_minus, &s.b_plus, &s.b_minus}) removed = unite(removed, *p);
  s.x = complement(removed);
  return s;
}

const TreePair& map_named(const std::string& name, Powers& f, Powers& g, std::size_t m) {
  if (name == "u") return f.pos(m);
  if (name == "u^-1") return f.neg(m);
  if (name == "v") return g.pos(m);
  return g.neg(m);
}

bool table_holds(Sets& s, Powers& f, Powers& g, std::size_t m) {
  for (const auto& [map, source, target] : required_inclusions()) {
    if (!subset(map_clopen(map_named(map, f, g, m), s.named(source)), s.named(target))) return false;
  }
  return true;
}

PingPongTable full_table(const Sets& s, Powers& f, Powers& g, std::size_t m, const Rational& eps) {
  PingPongTable t;
  t.m = m;
  t.epsilon = eps;
  t.x = s.x;
  t.a_plus = s.a_plus;
  t.a_minus = s.a_minus;
  t.b_plus = s.b_plus;
  t.b_minus = s.b_minus;
  for (const auto& [map, source, target] : required_inclusions()) {
    InclusionCheck c{map, source, target, map_clopen(map_named(map, f, g, m), s.named(source)), false};
    c.holds = subset(c.image, s.named(target));
    t.checks.push_back(std::move(c));
  }
  return t;
}

// ---- w_epsilon core

struct WCore {
  TreePair w;
  std::size_t n_exp = 0, m_exp = 0;
  int k0 = 0, k1 = 0;
  ClopenSet x;
  bool invariance = false, contractivity = false, periodic_inside = false;
};

// f, g already powered so that U is fixed pointwise and Per0 points are
// fixed.  Everything is relative to the invariant clopen set C.
std::optional<WCore> w_epsilon_on(const TreePair& f, const DynamicalData& df, const TreePair& g,
                                  const DynamicalData& dg, int k0, const ClopenSet& C,
                                  const SearchOptions& options) {
  const int n = f.arity();
  const Rational eps0 = inverse_power(n, k0);
  const Points af = sorted_unique(df.att_points()), rf = sorted_unique(df.rep_points());
  const Points ag = sorted_unique(dg.att_points()), rg = sorted_unique(dg.rep_points());
  const Points ag_rf = meet(ag, rf), rg_af = meet(rg, af), ag_not_rf = minus(ag, rf);
  const auto N = [n](const Points& p, const Rational& e) { return neighborhood(p, n, e); };

  const ClopenSet wg = difference(intersect(dg.V, C), N(rg, eps0));
  const ClopenSet target_g = N(ag, eps0);
  const ClopenSet near_ag_rf = N(ag_rf, eps0);
  const ClopenSet near_rg_af = N(rg_af, eps0);
  const ClopenSet per_near = N(join(join(af, rf), join(ag, rg)), eps0);
  const ClopenSet contract_source = difference(C, N(join(rf, rg), eps0));

  Powers fp{f}, gp{g};
  for (std::size_t ne = 1; ne <= options.m_cap; ++ne) {
    const TreePair& gn = gp.pos(ne);
    if (!subset(map_clopen(gn, wg), target_g)) continue;
    const ClopenSet image_ag_rf = map_clopen(gn, near_ag_rf);
    const int k1_max = k0 + options.k_span + static_cast<int>(image_ag_rf.max_depth());
    for (int k1 = k0 + 1; k1 <= k1_max; ++k1) {
      const Rational eps1 = inverse_power(n, k1);
      if (!subset(N(ag_rf, eps1), image_ag_rf)) continue;
      if (!subset(map_clopen(gn, N(rg_af, eps1)), near_rg_af)) continue;
      const ClopenSet vf1 = difference(intersect(df.V, C), N(rf, eps1));
      const ClopenSet target_f = N(af, eps1);
      std::size_t m0 = 0;
      for (std::size_t m = 1; m <= options.m_cap && !m0; ++m) {
        if (subset(map_clopen(fp.pos(m), vf1), target_f)) m0 = m;
      }
      if (!m0) continue;
      ClopenSet x = unite(unite(N(af, eps0), N(ag_not_rf, eps0)),
                          difference(near_ag_rf, N(ag_rf, eps1)));
      x = intersect(x, C);
      for (std::size_t m = m0; m <= std::min(options.m_cap, m0 + 8); ++m) {
        WCore r;
        r.w = reduce(compose(fp.pos(m), gn));
        r.invariance = subset(map_clopen(r.w, x), x);
        r.contractivity = subset(map_clopen(r.w, contract_source), x);
        if (!r.invariance || !r.contractivity) continue;
        const DynamicalData dw = dynamics(r.w);
        r.periodic_inside = subset(intersect(dw.U, C), per_near);
        for (const auto& p : dw.per0()) {
          if (C.contains(p) && !per_near.contains(p)) r.periodic_inside = false;
        }
        if (!r.periodic_inside) continue;
        r.n_exp = ne;
        r.m_exp = m;
        r.k0 = k0;
        r.k1 = k1;
        r.x = std::move(x);
        return r;
      }
    }
  }
  return std::nullopt;
}

struct Powered {
  TreePair element;
  std::uint64_t exponent;
  DynamicalData dyn;
};

Powered stabilize(const TreePair& f) {
  const std::uint64_t p = dynamics(f).stabilizing_power();
  Powered out{p == 1 ? f : power(f, static_cast<long long>(p)), p, {}};
  out.dyn = dynamics(out.element);
  return out;
}

std::vector<FiniteOrbit::Closure> closure_of(const Subgroup& group, const Points& orbit) {
  std::vector<FiniteOrbit::Closure> out;
  for (std::size_t i = 0; i < group.generators.size(); ++i) {
    for (const auto& p : orbit) out.push_back({i, p, apply(group.generators[i], p)});
  }
  return out;
}

// Orbit of p, also reporting every point reached when it overflows.
std::optional<Points> explore_orbit(const Subgroup& group, const CantorPoint& p,
                                    std::size_t budget, std::set<CantorPoint>* reached) {
  if (p.arity() != group.arity) throw ArityMismatch("point arity differs from the group");
  std::set<CantorPoint> seen{p};
  std::deque<CantorPoint> queue{p};
  const auto letters = alphabet(group.generators.size());
  while (!queue.empty()) {
    const CantorPoint q = queue.front();
    queue.pop_front();
    for (const auto& l : letters) {
      CantorPoint r = act(group, l, q);
      if (seen.insert(r).second) {
        if (seen.size() > budget) {
          if (reached) reached->insert(seen.begin(), seen.end());
          return std::nullopt;
        }
        queue.push_back(std::move(r));
      }
    }
  }
  return Points(seen.begin(), seen.end());
}

FiniteOrbit make_orbit(const Subgroup& group, const CantorPoint& p, Points orbit) {
  FiniteOrbit fo{p, std::move(orbit), {}};
  fo.closure = closure_of(group, fo.orbit);
  return fo;
}

}  // namespace

// ---- Subgroup and words

Subgroup Subgroup::of(std::vector<TreePair> generators) {
  if (generators.empty()) throw InvalidArgument("a subgroup needs at least one generator");
  const int n = generators.front().arity();
  for (const auto& g : generators) {
    if (g.arity() != n) throw ArityMismatch("generators of different arity");
  }
  return Subgroup{n, std::move(generators)};
}

Subgroup Subgroup::parse(std::string_view text) {
  std::vector<TreePair> gens;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      gens.push_back(TreePair::parse(line, line_no));
      if (gens.back().arity() != gens.front().arity()) {
        throw ParseError("generator arity differs from the first one", line_no, 1);
      }
    }
    start = end + 1;
  }
  if (gens.empty()) throw ParseError("no generators", line_no, 1);
  return Subgroup::of(std::move(gens));
}

SubgroupWord SubgroupWord::generator(std::size_t i, long long power) {
  SubgroupWord w;
  if (power != 0) w.factors.push_back({false, i, {}, power});
  return w;
}

SubgroupWord SubgroupWord::parse(std::string_view text, std::size_t line) {
  detail::Scanner in(text, line);
  WordReader reader(in);
  SubgroupWord w{reader.sequence()};
  if (!in.done()) in.fail("unexpected input in word");
  return w;
}

SubgroupWord SubgroupWord::pow(long long k) const {
  SubgroupWord w;
  if (k != 0 && !factors.empty()) w.factors.push_back({true, 0, factors, k});
  return w;
}

SubgroupWord SubgroupWord::inverse() const { return SubgroupWord{inverse_factors(factors)}; }

std::string SubgroupWord::to_string() const { return factors_to_string(factors); }

SubgroupWord operator*(SubgroupWord a, const SubgroupWord& b) {
  a.factors.insert(a.factors.end(), b.factors.begin(), b.factors.end());
  return a;
}

TreePair evaluate(const Subgroup& group, const SubgroupWord& w) {
  return evaluate_factors(group, w.factors);
}

std::vector<SubgroupWord> subgroup_words(std::size_t generators, std::size_t max_length) {
  std::vector<SubgroupWord> out;
  for (const auto& w : reduced_letter_words(generators, max_length)) out.push_back(from_letters(w));
  return out;
}

// ---- certificates

bool PingPongTable::holds() const {
  if (x.empty() || checks.size() != required_inclusions().size()) return false;
  for (const auto* s : {&a_plus, &a_minus, &b_plus, &b_minus}) {
    if (!disjoint(x, *s)) return false;
  }
  return std::all_of(checks.begin(), checks.end(), [](const InclusionCheck& c) { return c.holds; });
}

const std::vector<std::array<std::string, 3>>& required_inclusions() {
  static const std::vector<std::array<std::string, 3>> table = {
      {"u", "X", "A+"},     {"u", "A+", "A+"},    {"u", "B+", "A+"},    {"u", "B-", "A+"},
      {"u^-1", "X", "A-"},  {"u^-1", "A-", "A-"}, {"u^-1", "B+", "A-"}, {"u^-1", "B-", "A-"},
      {"v", "X", "B+"},     {"v", "B+", "B+"},    {"v", "A+", "B+"},    {"v", "A-", "B+"},
      {"v^-1", "X", "B-"},  {"v^-1", "B-", "B-"}, {"v^-1", "A+", "B-"}, {"v^-1", "A-", "B-"},
  };
  return table;
}

std::string format_certificate(const Certificate& c) {
  std::ostringstream out;
  if (const auto* fo = std::get_if<FiniteOrbit>(&c)) {
    out << "FINITE-ORBIT point=" << fo->point << " orbit=[";
    for (std::size_t i = 0; i < fo->orbit.size(); ++i) out << (i ? " " : "") << fo->orbit[i];
    out << "]\n";
    for (const auto& cl : fo->closure) {
      out << "CLOSURE g" << cl.generator << " " << cl.point << " -> " << cl.image << " OK\n";
    }
  } else if (const auto* fs = std::get_if<FreeSubgroup>(&c)) {
    const auto& t = fs->table;
    out << "FREE u=" << fs->u().to_string() << " v=" << fs->v().to_string() << " m=" << t.m
        << " epsilon=" << t.epsilon.to_string() << "\n";
    out << "SET X = " << t.x << "\n";
    out << "SET A+ = " << t.a_plus << "\n";
    out << "SET A- = " << t.a_minus << "\n";
    out << "SET B+ = " << t.b_plus << "\n";
    out << "SET B- = " << t.b_minus << "\n";
    for (const auto& ch : t.checks) {
      out << "CHECK " << ch.map << " " << ch.source << " " << ch.target << " image=" << ch.image
          << (ch.holds ? " OK" : " FAIL") << "\n";
    }
  } else {
    out << "UNDECIDED budget=" << std::get<Undecided>(c).budget << "\n";
  }
  return out.str();
}

Certificate parse_certificate(std::string_view text, int arity) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t start = 0, line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) lines.emplace_back(line_no, line);
    start = end + 1;
  }
  if (lines.empty()) throw ParseError("empty certificate", line_no, 1);

  const auto point = [arity](detail::Scanner& in) {
    in.skip_ws();
    const std::size_t at = in.pos();
    try {
      return CantorPoint::parse(in.token("]"), arity);
    } catch (const ParseError& e) {
      in.fail_at(std::string("bad point: ") + e.what(), at);
    }
  };
  const auto clopen = [arity](detail::Scanner& in) {
    in.skip_ws();
    const std::size_t at = in.pos();
    try {
      return ClopenSet::parse(in.token(), arity);
    } catch (const ParseError& e) {
      in.fail_at(std::string("bad set: ") + e.what(), at);
    }
  };

  detail::Scanner head(lines[0].second, lines[0].first);
  if (head.accept("UNDECIDED")) {
    head.expect("budget=");
    const long long b = head.integer();
    if (!head.done() || lines.size() != 1) head.fail("trailing input");
    return Undecided{static_cast<std::size_t>(std::max(0LL, b))};
  }
  if (head.accept("FINITE-ORBIT")) {
    head.expect("point=");
    FiniteOrbit fo{point(head), {}, {}};
    head.expect("orbit=[");
    while (!head.accept("]")) {
      if (head.done()) head.fail("expected ']'");
      fo.orbit.push_back(point(head));
    }
    if (!head.done()) head.fail("trailing input");
    for (std::size_t i = 1; i < lines.size(); ++i) {
      detail::Scanner in(lines[i].second, lines[i].first);
      in.expect("CLOSURE");
      in.expect("g");
      const long long gi = in.integer();
      if (gi < 0) in.fail("bad generator index");
      CantorPoint from = point(in);
      in.expect("->");
      CantorPoint to = point(in);
      in.accept("OK");
      if (!in.done()) in.fail("trailing input");
      fo.closure.push_back({static_cast<std::size_t>(gi), std::move(from), std::move(to)});
    }
    return fo;
  }
  if (!head.accept("FREE")) head.fail("expected FINITE-ORBIT, FREE or UNDECIDED");
  FreeSubgroup fs;
  head.expect("u=");
  SubgroupWord u{WordReader(head).sequence()};
  head.expect("v=");
  SubgroupWord v{WordReader(head).sequence()};
  head.expect("m=");
  const long long m = head.integer();
  if (m <= 0) head.fail("m must be positive");
  head.expect("epsilon=");
  head.skip_ws();
  const std::size_t eps_at = head.pos();
  try {
    fs.table.epsilon = Rational::parse(head.token());
  } catch (const Error& e) {
    head.fail_at(std::string("bad epsilon: ") + e.what(), eps_at);
  }
  if (!head.done()) head.fail("trailing input");
  const auto base = [&](const SubgroupWord& w, const char* name) {
    if (w.factors.size() != 1 || !w.factors[0].is_group || w.factors[0].power != m) {
      head.fail(std::string(name) + " must have the form (w)^m");
    }
    return SubgroupWord{w.factors[0].group};
  };
  fs.f = base(u, "u");
  fs.g = base(v, "v");
  fs.table.m = static_cast<std::size_t>(m);

  std::set<std::string> seen_sets;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    detail::Scanner in(lines[i].second, lines[i].first);
    if (in.accept("SET")) {
      const std::string name(in.token());
      in.expect("=");
      ClopenSet s = clopen(in);
      if (!in.done()) in.fail("trailing input");
      ClopenSet* slot = name == "X"    ? &fs.table.x
                        : name == "A+" ? &fs.table.a_plus
                        : name == "A-" ? &fs.table.a_minus
                        : name == "B+" ? &fs.table.b_plus
                        : name == "B-" ? &fs.table.b_minus
                                       : nullptr;
      if (!slot) in.fail("unknown set '" + name + "'");
      if (!seen_sets.insert(name).second) in.fail("set '" + name + "' given twice");
      *slot = std::move(s);
    } else if (in.accept("CHECK")) {
      InclusionCheck c;
      c.map = std::string(in.token());
      c.source = std::string(in.token());
      c.target = std::string(in.token());
      in.expect("image=");
      c.image = clopen(in);
      if (in.accept("OK")) {
        c.holds = true;
      } else if (!in.accept("FAIL")) {
        in.fail("expected OK or FAIL");
      }
      if (!in.done()) in.fail("trailing input");
      fs.table.checks.push_back(std::move(c));
    } else {
      in.fail("expected SET or CHECK");
    }
  }
  if (seen_sets.size() != 5) {
    throw ParseError("a FREE certificate needs the sets X, A+, A-, B+, B-", lines.back().first, 1);
  }
  return fs;
}

std::optional<std::string> verify_certificate(const Subgroup& group, const Certificate& c) {
  if (std::holds_alternative<Undecided>(c)) return "undecided: nothing to verify";
  if (const auto* fo = std::get_if<FiniteOrbit>(&c)) {
    const Points orbit = sorted_unique(fo->orbit);
    if (orbit.size() != fo->orbit.size()) return "orbit lists a point twice";
    if (orbit.empty() || !has(orbit, fo->point)) return "point is not in its orbit";
    for (const auto& p : orbit) {
      if (p.arity() != group.arity) return "orbit point of the wrong arity";
    }
    for (std::size_t i = 0; i < group.generators.size(); ++i) {
      for (const auto& p : orbit) {
        if (!has(orbit, apply(group.generators[i], p))) {
          return "g" + std::to_string(i) + " maps " + p.to_string() + " outside the orbit";
        }
      }
    }
    if (!fo->closure.empty() && fo->closure != closure_of(group, orbit)) {
      return "recorded closure images do not match";
    }
    return std::nullopt;
  }
  const auto& fs = std::get<FreeSubgroup>(c);
  const auto& t = fs.table;
  TreePair f, g;
  try {
    f = evaluate(group, fs.f);
    g = evaluate(group, fs.g);
  } catch (const Error& e) {
    return std::string("cannot evaluate the words: ") + e.what();
  }
  const PingPongTable fresh = pingpong_table(f, g, t.m, t.epsilon);
  const std::pair<const ClopenSet*, const ClopenSet*> sets[] = {
      {&t.x, &fresh.x},         {&t.a_plus, &fresh.a_plus},   {&t.a_minus, &fresh.a_minus},
      {&t.b_plus, &fresh.b_plus}, {&t.b_minus, &fresh.b_minus}};
  const char* names[] = {"X", "A+", "A-", "B+", "B-"};
  for (std::size_t i = 0; i < 5; ++i) {
    if (*sets[i].first != *sets[i].second) {
      return std::string("set ") + names[i] + " differs from the recomputed " +
             sets[i].second->to_string();
    }
  }
  if (fresh.x.empty()) return "X is empty";
  for (const auto* s : {&fresh.a_plus, &fresh.a_minus, &fresh.b_plus, &fresh.b_minus}) {
    if (!disjoint(fresh.x, *s)) return "X meets a target set";
  }
  if (t.checks.size() != fresh.checks.size()) return "wrong number of CHECK lines";
  for (const auto& want : fresh.checks) {
    const auto it = std::find_if(t.checks.begin(), t.checks.end(), [&](const InclusionCheck& c2) {
      return c2.map == want.map && c2.source == want.source && c2.target == want.target;
    });
    const std::string label = want.map + " " + want.source + " " + want.target;
    if (it == t.checks.end()) return "missing CHECK " + label;
    if (std::count_if(t.checks.begin(), t.checks.end(), [&](const InclusionCheck& c2) {
          return c2.map == want.map && c2.source == want.source && c2.target == want.target;
        }) != 1) {
      return "CHECK " + label + " repeated";
    }
    if (it->image != want.image) return "CHECK " + label + ": recorded image differs";
    if (!want.holds) return "CHECK " + label + ": inclusion fails";
    if (!it->holds) return "CHECK " + label + ": recorded as failing";
  }
  return std::nullopt;
}

// ---- searches

std::optional<Points> finite_orbit(const Subgroup& group, const CantorPoint& p,
                                   std::size_t orbit_budget) {
  return explore_orbit(group, p, orbit_budget, nullptr);
}

MoverResult disjoint_mover(const Subgroup& group, const std::vector<CantorPoint>& F,
                           std::size_t depth_budget, std::size_t orbit_budget) {
  MoverResult result;
  const Points targets = sorted_unique(F);
  for (const auto& p : targets) {
    if (auto orbit = finite_orbit(group, p, orbit_budget)) {
      result.kind = MoverResult::Kind::FiniteOrbit;
      result.orbit = make_orbit(group, p, std::move(*orbit));
      return result;
    }
  }
  // Words grow on the left, so images extend by one application.
  struct Node {
    Letters letters;
    Points images;
  };
  std::vector<Node> layer{{{}, targets}};
  const auto letters = alphabet(group.generators.size());
  for (std::size_t len = 1; len <= depth_budget; ++len) {
    std::vector<Node> next;
    for (const auto& node : layer) {
      for (const auto& l : letters) {
        if (!node.letters.empty() && node.letters.front().first == l.first &&
            node.letters.front().second == -l.second) {
          continue;
        }
        Node child;
        child.letters.push_back(l);
        child.letters.insert(child.letters.end(), node.letters.begin(), node.letters.end());
        bool moved = true;
        for (const auto& p : node.images) {
          child.images.push_back(act(group, l, p));
          if (has(targets, child.images.back())) moved = false;
        }
        if (moved) {
          result.kind = MoverResult::Kind::Moved;
          const SubgroupWord w = from_letters(child.letters);
          result.mover = NamedElement{w, evaluate(group, w)};
          return result;
        }
        next.push_back(std::move(child));
      }
    }
    layer = std::move(next);
  }
  return result;
}

std::vector<HarmonicCell> harmonic_estimate(const Subgroup& group,
                                            const std::vector<CantorPoint>& basepoint,
                                            const HarmonicOptions& options) {
  const auto letters = alphabet(group.generators.size());
  std::vector<double> weights = options.weights;
  if (weights.empty()) weights.assign(letters.size(), 1.0);
  if (weights.size() != letters.size()) throw InvalidArgument("one weight per letter required");
  if (std::any_of(weights.begin(), weights.end(), [](double w) { return !(w >= 0); }) ||
      std::accumulate(weights.begin(), weights.end(), 0.0) <= 0) {
    throw InvalidArgument("weights must be nonnegative with a positive total");
  }
  if (options.walk_length == 0 || options.samples == 0) {
    throw InvalidArgument("walk length and samples must be positive");
  }
  for (const auto& p : basepoint) {
    if (p.arity() != group.arity) throw ArityMismatch("basepoint arity differs from the group");
  }
  std::mt19937_64 rng(options.seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::map<std::vector<Address>, double> mass;
  const double unit = 1.0 / (static_cast<double>(options.walk_length) * static_cast<double>(options.samples));
  std::vector<Address> cell(basepoint.size());
  for (std::size_t s = 0; s < options.samples; ++s) {
    std::vector<CantorPoint> tuple = basepoint;
    for (std::size_t step = 0; step < options.walk_length; ++step) {
      const auto l = letters[pick(rng)];
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        tuple[i] = act(group, l, tuple[i]);
        cell[i] = tuple[i].prefix(options.depth);
      }
      mass[cell] += unit;
    }
  }
  std::vector<HarmonicCell> out;
  for (auto& [c, w] : mass) out.push_back({c, w});
  return out;
}

std::string to_string(PingPongStatus s) {
  switch (s) {
    case PingPongStatus::Ok: return "Ok";
    case PingPongStatus::NotDisjoint: return "NotDisjoint";
    case PingPongStatus::EmptyPingPongTable: return "EmptyPingPongTable";
    case PingPongStatus::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

PingPongTable pingpong_table(const TreePair& f, const TreePair& g, std::size_t m,
                             const Rational& epsilon) {
  if (f.arity() != g.arity()) throw ArityMismatch("ping-pong elements of different arity");
  const Sets s = pingpong_sets(dynamics(f), dynamics(g), f.arity(), epsilon);
  Powers fp{f}, gp{g};
  return full_table(s, fp, gp, m, epsilon);
}

PingPongResult pingpong_certificate(const TreePair& f, const TreePair& h,
                                    const PingPongOptions& options) {
  if (f.arity() != h.arity()) throw ArityMismatch("ping-pong elements of different arity");
  const int n = f.arity();
  const DynamicalData df = dynamics(f);
  const TreePair g = conjugate(f, h);
  const DynamicalData dg = dynamics(g);

  // Per0(f) u U_f against its image under h.
  const Points per = sorted_unique(df.per0());
  const ClopenSet hu = map_clopen(h, df.U);
  bool apart = disjoint(df.U, hu);
  for (const auto& p : per) {
    const CantorPoint q = apply(h, p);
    if (hu.contains(p) || df.U.contains(q) || has(per, q)) apart = false;
  }
  if (!apart) return {PingPongStatus::NotDisjoint, std::nullopt};

  Powers fp{f}, gp{g};
  bool any_x = false;
  for (int k = options.k_min; k <= options.k_max; ++k) {
    const Rational eps = inverse_power(n, k);
    Sets s = pingpong_sets(df, dg, n, eps);
    if (s.x.empty()) continue;
    any_x = true;
    for (std::size_t m = 1; m <= options.m_cap; ++m) {
      if (table_holds(s, fp, gp, m)) {
        PingPongTable t = full_table(s, fp, gp, m, eps);
        if (t.holds()) return {PingPongStatus::Ok, std::move(t)};
      }
    }
  }
  return {any_x ? PingPongStatus::BudgetExceeded : PingPongStatus::EmptyPingPongTable, std::nullopt};
}

bool fixes_pointwise(const TreePair& f, const ClopenSet& s) {
  for (const auto& l : f.leaves()) {
    if (l.domain == l.range) continue;
    for (const auto& a : s.intervals()) {
      if (a.comparable(l.domain)) return false;
    }
  }
  return true;
}

WEpsilon w_epsilon(const TreePair& f, const TreePair& g, int k, const SearchOptions& options) {
  if (f.arity() != g.arity()) throw ArityMismatch("elements of different arity");
  if (!disjoint(dynamics(f).U, dynamics(g).U)) throw HypothesisFailed("U_f and U_g meet");
  const Powered pf = stabilize(f), pg = stabilize(g);
  const ClopenSet whole = ClopenSet::whole(f.arity());
  for (int k0 = k; k0 <= k + options.k_span; ++k0) {
    auto r = w_epsilon_on(pf.element, pf.dyn, pg.element, pg.dyn, k0, whole, options);
    if (!r) continue;
    WEpsilon out;
    out.w = std::move(r->w);
    out.m1 = static_cast<std::size_t>(pg.exponent) * r->n_exp;
    out.m2 = static_cast<std::size_t>(pf.exponent) * r->m_exp;
    out.epsilon0 = inverse_power(f.arity(), r->k0);
    out.epsilon1 = inverse_power(f.arity(), r->k1);
    out.x = std::move(r->x);
    out.invariance = r->invariance;
    out.contractivity = r->contractivity;
    out.periodic_inside = r->periodic_inside;
    return out;
  }
  throw BudgetExceeded("no w_epsilon within the exponent cap");
}

KFReduction kf_reduce(const std::vector<NamedElement>& F, int k, const SearchOptions& options) {
  if (F.empty()) throw InvalidArgument("kf_reduce needs a nonempty set");
  const int n = F.front().element.arity();
  for (const auto& e : F) {
    if (e.element.arity() != n) throw ArityMismatch("elements of different arity");
  }
  const std::size_t steps = F.size() - 1;

  Powered h = stabilize(F.front().element);
  SubgroupWord h_word = h.exponent == 1 ? F.front().word : F.front().word.pow(static_cast<long long>(h.exponent));
  const DynamicalData d0 = dynamics(F.front().element);
  Points s = sorted_unique(d0.per0());
  ClopenSet k_f = d0.U;

  for (std::size_t j = 1; j <= steps; ++j) {
    const int level = k + static_cast<int>(steps - j);
    const Powered g = stabilize(F[j].element);
    const ClopenSet common = intersect(h.dyn.U, g.dyn.U);
    const ClopenSet c = complement(common);
    std::optional<WCore> r;
    for (int k0 = level; k0 <= level + options.k_span && !r; ++k0) {
      r = w_epsilon_on(h.element, h.dyn, g.element, g.dyn, k0, c, options);
    }
    if (!r) throw BudgetExceeded("no w_epsilon at induction step " + std::to_string(j));
    const SubgroupWord g_word = F[j].word.pow(static_cast<long long>(g.exponent * r->n_exp));
    h_word = g_word * h_word.pow(static_cast<long long>(r->m_exp));
    h = stabilize(r->w);
    if (h.exponent != 1) h_word = h_word.pow(static_cast<long long>(h.exponent));
    s = join(s, g.dyn.per0());
    k_f = intersect(k_f, dynamics(F[j].element).U);
  }

  KFReduction out;
  out.h = NamedElement{h_word, h.element};
  out.s = s;
  out.k_f = k_f;
  out.epsilon = inverse_power(n, k);
  const ClopenSet allowed = unite(k_f, neighborhood(s, n, out.epsilon));
  out.periodic_inside = subset(h.dyn.U, allowed);
  for (const auto& p : h.dyn.per0()) {
    if (!allowed.contains(p)) out.periodic_inside = false;
  }
  out.fixes_k_f = fixes_pointwise(h.element, k_f);
  return out;
}

std::optional<FiniteOrbit> finite_orbit_search(const Subgroup& group,
                                               const OrbitSearchOptions& options) {
  const int n = group.arity;
  ClopenSet k_s = ClopenSet::whole(n);
  Points per;
  for (const auto& w : subgroup_words(group.generators.size(), options.word_length)) {
    const DynamicalData d = dynamics(evaluate(group, w));
    k_s = intersect(k_s, d.U);
    for (const auto& p : d.per0()) per.push_back(p);
  }
  Points candidates;
  for (const auto& a : k_s.intervals()) candidates.push_back(leftmost(a));
  candidates.insert(candidates.end(), per.begin(), per.end());

  HarmonicOptions ho;
  ho.walk_length = 64;
  ho.samples = 64;
  ho.depth = 4;
  ho.seed = options.seed;
  auto cells = harmonic_estimate(group, {leftmost(Address(n))}, ho);
  std::stable_sort(cells.begin(), cells.end(),
                   [](const HarmonicCell& a, const HarmonicCell& b) { return a.mass > b.mass; });
  for (std::size_t i = 0; i < cells.size() && i < 4; ++i) candidates.push_back(leftmost(cells[i].cell[0]));

  std::set<CantorPoint> tried;
  std::set<CantorPoint> infinite;
  for (const auto& p : candidates) {
    if (!tried.insert(p).second || infinite.count(p)) continue;
    if (auto orbit = explore_orbit(group, p, options.orbit_budget, &infinite)) {
      return make_orbit(group, p, std::move(*orbit));
    }
  }
  return std::nullopt;
}

namespace {

std::optional<Certificate> checked(const Subgroup& group, Certificate c) {
  if (verify_certificate(group, c)) return std::nullopt;
  return c;
}

std::optional<Certificate> free_pipeline(const Subgroup& group, std::size_t epoch,
                                         const DecideOptions& options) {
  const PingPongOptions pp{2, options.k_max, options.m_cap};
  std::size_t tried = 0;
  for (const auto& w : subgroup_words(group.generators.size(), epoch)) {
    const TreePair f = evaluate(group, w);
    const DynamicalData df = dynamics(f);
    if (df.att.empty()) continue;
    if (++tried > 16) break;
    Points F = df.per0();
    for (const auto& a : df.U.intervals()) {
      F.push_back(leftmost(a));
      F.push_back(rightmost(a));
    }
    const MoverResult mv = disjoint_mover(group, F, epoch, options.orbit_budget);
    if (mv.kind == MoverResult::Kind::FiniteOrbit) {
      if (auto c = checked(group, *mv.orbit)) return c;
      continue;
    }
    if (mv.kind != MoverResult::Kind::Moved) continue;
    const PingPongResult r = pingpong_certificate(f, mv.mover->element, pp);
    if (r.status != PingPongStatus::Ok) continue;
    const SubgroupWord& hw = mv.mover->word;
    if (auto c = checked(group, FreeSubgroup{w, hw * w * hw.inverse(), *r.table})) return c;
  }

  // Shrink periodic sets over a family with empty K_F, then move S_F off
  // itself.
  std::vector<NamedElement> family;
  ClopenSet k_f = ClopenSet::whole(group.arity);
  for (const auto& w : subgroup_words(group.generators.size(), epoch)) {
    if (k_f.empty()) break;
    TreePair e = evaluate(group, w);
    const ClopenSet u = dynamics(e).U;
    if (intersect(k_f, u) == k_f) continue;
    k_f = intersect(k_f, u);
    family.push_back({w, std::move(e)});
  }
  if (!k_f.empty() || family.size() < 2) return std::nullopt;
  const SearchOptions so{options.m_cap, 4};
  for (int k = 2; k <= options.k_max; ++k) {
    KFReduction kf;
    try {
      kf = kf_reduce(family, k, so);
    } catch (const Error&) {
      continue;
    }
    if (!kf.periodic_inside) continue;
    const MoverResult mv = disjoint_mover(group, kf.s, epoch, options.orbit_budget);
    if (mv.kind == MoverResult::Kind::FiniteOrbit) return checked(group, *mv.orbit);
    if (mv.kind != MoverResult::Kind::Moved) return std::nullopt;
    const PingPongResult r = pingpong_certificate(kf.h.element, mv.mover->element, pp);
    if (r.status != PingPongStatus::Ok) continue;
    const SubgroupWord& tw = mv.mover->word;
    if (auto c = checked(group, FreeSubgroup{kf.h.word, tw * kf.h.word * tw.inverse(), *r.table})) {
      return c;
    }
  }
  return std::nullopt;
}

}  // namespace

Certificate decide(const Subgroup& group, const DecideOptions& options) {
  for (std::size_t epoch = 1; epoch <= options.budget; ++epoch) {
    OrbitSearchOptions oo{epoch, options.orbit_budget, options.seed};
    if (auto fo = finite_orbit_search(group, oo)) {
      if (auto c = checked(group, *fo)) return *c;
    }
    if (auto c = free_pipeline(group, epoch, options)) return *c;
  }
  return Undecided{options.budget};
}

}  // namespace thompson
