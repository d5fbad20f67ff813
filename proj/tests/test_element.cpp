#include <doctest.h>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "thompson/element.hpp"

using namespace thompson;

namespace {

CantorPoint pt(std::string_view text, int n = 2) { return CantorPoint::parse(text, n); }
ClopenSet set(std::string_view text, int n = 2) { return ClopenSet::parse(text, n); }

TreePair random_refinement(const TreePair& f, std::mt19937_64& rng, int splits) {
  TreePair g = f;
  for (int i = 0; i < splits; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    g = refine_leaf(g, pick(rng));
  }
  return g;
}

}  // namespace

TEST_CASE("text round trip") {
  const auto f = fixture::f0();
  CHECK(f.to_string() == "V 2 : {0,10,11} -> {00,01,1} perm [0 1 2]");
  CHECK(TreePair::parse(f.to_string()) == f);
  CHECK(TreePair::identity(3).to_string() == "V 3 : {ε} -> {ε} perm [0]");
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto g = random_element(seed, 2 + static_cast<int>(seed % 3), 10);
    CHECK(TreePair::parse(g.to_string()).to_string() == g.to_string());
  }
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(TreePair::parse("V 2 : {0,1} -> {0} perm [0 1]"), ParseError);
  CHECK_THROWS_AS(TreePair::parse("V 2 : {0,10} -> {0,1} perm [0 1]"), ParseError);
  CHECK_THROWS_AS(TreePair::parse("V 2 : {0,1} -> {0,1} perm [0 0]"), ParseError);
  try {
    TreePair::parse("V 2 : {0,2} -> {0,1} perm [0 1]", 4);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(e.column() == 10);
  }
}

TEST_CASE("apply examples") {
  const auto f = fixture::f0();
  CHECK(apply(f, pt("(0)")) == pt("(0)"));
  CHECK(apply(f, pt("10(0)")) == pt("01(0)"));
  CHECK(apply(TreePair::identity(2), pt("1(10)")) == pt("1(10)"));
  const auto f2 = compose(f, f);
  CHECK(apply(f2, pt("11(1)")) == pt("(1)"));
  CHECK(apply(f2, pt("10(0)")) == pt("001(0)"));
  CHECK(apply_inverse(f, apply(f, pt("0110(110)"))) == pt("0110(110)"));
}

TEST_CASE("map_clopen examples") {
  const auto f = fixture::f0();
  CHECK(map_clopen(f, set("{0}")).to_string() == "{00}");
  CHECK(map_clopen(f, set("{ε}")).is_whole());
  CHECK(map_clopen(f, set("{1}")).to_string() == "{01,1}");
}

TEST_CASE("reduce examples") {
  const auto f = TreePair::parse("V 2 : {00,01,1} -> {0,10,11} perm [1 2 0]");
  CHECK(reduce(f).to_string() == "V 2 : {0,1} -> {0,1} perm [1 0]");
  CHECK_FALSE(f.is_reduced());
  CHECK(fixture::f0().is_reduced());
  std::mt19937_64 rng(3);
  CHECK(equal(fixture::f0(), random_refinement(fixture::f0(), rng, 1)));
  CHECK(equal(inverse(inverse(fixture::f0())), fixture::f0()));
  CHECK(reduce(compose(fixture::f0(), inverse(fixture::f0()))).is_identity());
  CHECK(equal(compose(TreePair::identity(2), fixture::f0()), fixture::f0()));
  CHECK(equal(power(fixture::h(), 3), TreePair::identity(2)));
  CHECK(equal(power(fixture::cycle4(), -1), power(fixture::cycle4(), 3)));
}

TEST_CASE("random elements") {
  CHECK(random_element(1, 2, 1).is_identity());
  CHECK(random_element(9, 2, 8) == random_element(9, 2, 8));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_element(seed, 3, 9);
    CHECK(f.size() <= 9);
    CHECK_NOTHROW(TreePair::from_leaves(3, f.leaves()));
  }
  CHECK_THROWS_AS(random_element(1, 2, 0), InvalidArgument);
}

TEST_CASE("depth-12 action table of a composite") {
  const auto f = fixture::f0();
  const auto g = fixture::h();
  const auto fg = compose(f, g);
  const auto sequential = oracle::depth_table({oracle::of(f), oracle::of(g)}, 2, 12);
  CHECK(oracle::depth_table({oracle::of(fg)}, 2, 12) == sequential);
  CHECK(sequential.size() == 4096);
  CHECK(oracle::depth_table({oracle::of(reduce(compose(fg, f)))}, 2, 12) ==
        oracle::depth_table({oracle::of(f), oracle::of(g), oracle::of(f)}, 2, 12));
}

TEST_CASE("group laws against the action oracle") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const int n = 2 + static_cast<int>(seed % 2);
    const auto f = random_element(3 * seed, n, 10);
    const auto g = random_element(3 * seed + 1, n, 10);
    const auto h = random_element(3 * seed + 2, n, 10);
    const auto fg = compose(f, g);
    CHECK(oracle::same_action({oracle::of(fg)}, {oracle::of(f), oracle::of(g)}, n));
    CHECK(equal(compose(fg, h), compose(f, compose(g, h))));
    CHECK(reduce(compose(f, inverse(f))).is_identity());
    const auto r = reduce(f);
    CHECK(r.is_reduced());
    CHECK(reduce(r) == r);
    CHECK(oracle::same_action({oracle::of(r)}, {oracle::of(f)}, n));
    CHECK(reduce(random_refinement(f, rng, 3)) == reduce(random_refinement(f, rng, 3)));
    CHECK(equal(f, g) == oracle::same_action({oracle::of(f)}, {oracle::of(g)}, n));
    CHECK(oracle::same_action({oracle::of(inverse(f))}, {oracle::inverse_of(f)}, n));
    const auto s = ClopenSet::normalize(n, {f.leaf(0).domain});
    CHECK(map_clopen(f, complement(s)) == complement(map_clopen(f, s)));
  }
}
