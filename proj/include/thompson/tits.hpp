#pragma once

// Finite orbit or free subgroup for a finitely generated subgroup of V_n.
//
// Every search here is bounded and every result carries data that can be
// rechecked exactly: a FiniteOrbit is a finite point set closed under the
// generators, a FreeSubgroup is a ping-pong table of clopen inclusions.
// Generators are named g0, g1, ... in input order; searches enumerate
// letters in the order g0, g0^-1, g1, g1^-1, ...

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "thompson/element.hpp"
#include "thompson/revealing.hpp"

namespace thompson {

struct Subgroup {
  int arity = 2;
  std::vector<TreePair> generators;

  // Validates: nonempty, one arity.
  static Subgroup of(std::vector<TreePair> generators);
  // One element per line; blank lines and `#` comments are skipped.
  static Subgroup parse(std::string_view text);
};

// A word in the generators with nested powers, e.g. `(g1 g0 g1^-1)^3`.
struct SubgroupWord {
  struct Factor {
    bool is_group = false;
    std::size_t generator = 0;
    std::vector<Factor> group;
    long long power = 1;
  };
  std::vector<Factor> factors;

  static SubgroupWord generator(std::size_t i, long long power = 1);
  static SubgroupWord parse(std::string_view text, std::size_t line = 1);

  bool empty() const { return factors.empty(); }
  // (w)^k as a single factor.
  SubgroupWord pow(long long k) const;
  SubgroupWord inverse() const;
  std::string to_string() const;

  friend SubgroupWord operator*(SubgroupWord a, const SubgroupWord& b);
  friend bool operator==(const SubgroupWord& a, const SubgroupWord& b) {
    return a.to_string() == b.to_string();
  }
};

TreePair evaluate(const Subgroup& group, const SubgroupWord& w);

// Reduced words of length 1..max_length, shortest first, letters in the
// order g0, g0^-1, g1, g1^-1, ...
std::vector<SubgroupWord> subgroup_words(std::size_t generators, std::size_t max_length);

struct NamedElement {
  SubgroupWord word;
  TreePair element;
};

// ---- certificates

struct FiniteOrbit {
  struct Closure {
    std::size_t generator;
    CantorPoint point;
    CantorPoint image;
    bool operator==(const Closure&) const = default;
  };
  CantorPoint point;
  std::vector<CantorPoint> orbit;  // sorted
  // g_i(p) for every generator and orbit point, generator-major.
  std::vector<Closure> closure;
};

struct InclusionCheck {
  std::string map;     // u, u^-1, v, v^-1
  std::string source;  // X, A+, A-, B+, B-
  std::string target;
  ClopenSet image;
  bool holds = false;
};

// u = f^m, v = g^m.  A+- = N_eps(Att/Rep f), B+- = N_eps(Att/Rep g),
// X = K - (U_f u U_g u A+ u A- u B+ u B-).  Every reduced word in u, v
// moves X into A+ u A- u B+ u B-, so none is the identity.
struct PingPongTable {
  std::size_t m = 1;
  Rational epsilon;
  ClopenSet x, a_plus, a_minus, b_plus, b_minus;
  std::vector<InclusionCheck> checks;

  bool holds() const;
};

// The 16 (map, source, target) triples a table has to satisfy.
const std::vector<std::array<std::string, 3>>& required_inclusions();

struct FreeSubgroup {
  SubgroupWord f;  // u = f^m
  SubgroupWord g;  // v = g^m
  PingPongTable table;

  SubgroupWord u() const { return f.pow(static_cast<long long>(table.m)); }
  SubgroupWord v() const { return g.pow(static_cast<long long>(table.m)); }
};

struct Undecided {
  std::size_t budget = 0;
};

using Certificate = std::variant<FiniteOrbit, FreeSubgroup, Undecided>;

std::string format_certificate(const Certificate& c);
Certificate parse_certificate(std::string_view text, int arity);
// Replays every check against the group.  Empty when the certificate
// holds, otherwise a description of the first failure.  Undecided never
// verifies.
std::optional<std::string> verify_certificate(const Subgroup& group, const Certificate& c);

// ---- searches

// Orbit of p under the generators and their inverses, if it has at most
// `orbit_budget` points.
std::optional<std::vector<CantorPoint>> finite_orbit(const Subgroup& group, const CantorPoint& p,
                                                     std::size_t orbit_budget);

struct MoverResult {
  enum class Kind { Moved, FiniteOrbit, Exhausted };
  Kind kind = Kind::Exhausted;
  std::optional<NamedElement> mover;  // h with h(F) disjoint from F
  std::optional<FiniteOrbit> orbit;
};

// First checks whether some point of F has a finite orbit, then searches
// reduced words by length for h with h(F) n F = {}.
MoverResult disjoint_mover(const Subgroup& group, const std::vector<CantorPoint>& F,
                           std::size_t depth_budget, std::size_t orbit_budget = 4096);

struct HarmonicOptions {
  // One weight per letter g0, g0^-1, g1, ...; empty means uniform.
  std::vector<double> weights;
  std::size_t walk_length = 100;
  std::size_t samples = 10000;
  std::size_t depth = 1;
  std::uint64_t seed = 0;
};

struct HarmonicCell {
  std::vector<Address> cell;  // depth-d interval of each coordinate
  double mass = 0;
};

// Monte Carlo estimate of (1/l) sum_{i=1..l} mu^i * delta_p on depth-d
// cells of K^|p|.  Sorted by cell.
std::vector<HarmonicCell> harmonic_estimate(const Subgroup& group,
                                            const std::vector<CantorPoint>& basepoint,
                                            const HarmonicOptions& options = {});

struct PingPongOptions {
  int k_min = 2;
  int k_max = 12;
  std::size_t m_cap = 64;
};

enum class PingPongStatus { Ok, NotDisjoint, EmptyPingPongTable, BudgetExceeded };
std::string to_string(PingPongStatus s);

struct PingPongResult {
  PingPongStatus status = PingPongStatus::BudgetExceeded;
  std::optional<PingPongTable> table;
};

// Ping-pong for f and g = h f h^-1, searching eps = n^-k (k increasing) and
// then m increasing.
PingPongResult pingpong_certificate(const TreePair& f, const TreePair& h,
                                    const PingPongOptions& options = {});
// The table for u = f^m, v = g^m at eps with every check evaluated.
PingPongTable pingpong_table(const TreePair& f, const TreePair& g, std::size_t m,
                             const Rational& epsilon);

struct SearchOptions {
  std::size_t m_cap = 64;
  int k_span = 6;  // how many finer eps levels to try
};

// w = g^m1 f^m2 whose periodic points lie in N_eps(Per0 f u Per0 g).
struct WEpsilon {
  TreePair w;
  std::size_t m1 = 0;  // exponent of g
  std::size_t m2 = 0;  // exponent of f
  Rational epsilon0;
  Rational epsilon1;
  ClopenSet x;
  bool invariance = false;     // w(X) in X
  bool contractivity = false;  // w(K - N_eps0(Rep f u Rep g)) in X
  bool periodic_inside = false;
};

// eps = n^-k.  Throws HypothesisFailed if U_f and U_g meet, BudgetExceeded
// if no exponents up to the cap work down to n^-(k + k_span).
WEpsilon w_epsilon(const TreePair& f, const TreePair& g, int k, const SearchOptions& options = {});

struct KFReduction {
  NamedElement h;
  std::vector<CantorPoint> s;  // S_F
  ClopenSet k_f;               // intersection of the U_g, g in F
  Rational epsilon;
  bool periodic_inside = false;  // U_h u Per0(h) in K_F u N_eps(S_F)
  bool fixes_k_f = false;        // h is the identity on K_F
};

// Induction over F in list order: S_{F+g} = S_F u Per0(g), each step a
// w_epsilon on the complement of U_h n U_g.
KFReduction kf_reduce(const std::vector<NamedElement>& F, int k, const SearchOptions& options = {});

// True when f is the identity on every point of s.
bool fixes_pointwise(const TreePair& f, const ClopenSet& s);

struct OrbitSearchOptions {
  std::size_t word_length = 6;
  std::size_t orbit_budget = 4096;
  std::uint64_t seed = 0;
};

// Candidates: leftmost points of the intervals of K_S (S the words up to
// word_length), Per0 points of those words, then the heaviest cells of a
// harmonic estimate.
std::optional<FiniteOrbit> finite_orbit_search(const Subgroup& group,
                                               const OrbitSearchOptions& options = {});

struct DecideOptions {
  std::size_t budget = 6;
  std::size_t orbit_budget = 4096;
  std::size_t m_cap = 64;
  int k_max = 12;
  std::uint64_t seed = 0;
};

// Epochs 1..budget; in each, a finite-orbit search first, then the
// free-subgroup pipeline.  The returned certificate has been verified.
Certificate decide(const Subgroup& group, const DecideOptions& options = {});

}  // namespace thompson
