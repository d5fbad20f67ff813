#include <doctest.h>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "thompson/vbar.hpp"

using namespace thompson;

namespace {

CantorPoint pt(std::string_view text) { return CantorPoint::parse(text, 2); }

oracle::Map signed_map(const SignedTreePair& f) {
  oracle::Map m{2, {}};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Leaf& l = f.base().leaf(i);
    m.pieces.push_back({l.domain.digits(), l.range.digits(), f.reversed()[i]});
  }
  return m;
}

SignedTreePair f0s() { return SignedTreePair(fixture::f0()); }

}  // namespace

TEST_CASE("signed application") {
  const auto r = SignedTreePair::reflection();
  CHECK(signed_apply(r, pt("(0)")) == pt("(1)"));
  CHECK(signed_apply(r, pt("0(10)")) == pt("1(01)"));
  for (const auto& p : {pt("(0)"), pt("10(0)"), pt("1(10)"), pt("0110(10)")}) {
    CHECK(signed_apply(f0s(), p) == apply(fixture::f0(), p));
  }
}

TEST_CASE("signed group structure") {
  const auto r = SignedTreePair::reflection();
  CHECK(signed_equal(signed_compose(r, r), SignedTreePair::identity()));
  CHECK(signed_equal(signed_inverse(r), r));
  const auto rf = signed_compose(r, f0s());
  const auto fr = signed_compose(f0s(), r);
  CHECK_FALSE(signed_equal(rf, fr));
  // Both send (0) to (1); they separate at 10(0).
  CHECK(signed_apply(rf, pt("(0)")) == signed_apply(fr, pt("(0)")));
  CHECK(signed_apply(rf, pt("10(0)")) == pt("00(1)"));
  CHECK(signed_apply(fr, pt("10(0)")) == pt("10(1)"));
  CHECK(signed_apply(rf, pt("(0)")) == apply(fixture::f0(), pt("(1)")));
}

TEST_CASE("signed text format") {
  const auto f = SignedTreePair::parse("V 2 : {0,1} -> {0,1} perm [1 0] signs [- +]");
  CHECK(f.to_string() == "V 2 : {0,1} -> {0,1} perm [1 0] signs [- +]");
  CHECK(SignedTreePair::parse("V 2 : {ε} -> {ε} perm [0]").all_positive());
  CHECK_THROWS_AS(SignedTreePair::parse("V 2 : {0,1} -> {0,1} perm [1 0] signs [-]"),
                  ParseError);
  CHECK_THROWS_AS(SignedTreePair::parse("V 3 : {ε} -> {ε} perm [0]"), ArityMismatch);
}

TEST_CASE("phi examples") {
  CHECK(phi(SignedTreePair::identity()).is_identity());
  CHECK(reduce(phi(SignedTreePair::reflection())).to_string() ==
        "V 2 : {0,1} -> {0,1} perm [1 0]");
  const auto pf = phi(f0s());
  for (const auto& p : {pt("(0)"), pt("10(0)"), pt("1(10)"), pt("0110(10)")}) {
    const auto image = apply(fixture::f0(), p);
    CHECK(apply(pf, p.prepended(Address::parse("0", 2))) ==
          image.prepended(Address::parse("0", 2)));
    CHECK(apply(pf, complement(p).prepended(Address::parse("1", 2))) ==
          complement(image).prepended(Address::parse("1", 2)));
  }
}

TEST_CASE("phi on random signed elements") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto f = random_signed(2 * seed, 8);
    const auto g = random_signed(2 * seed + 1, 8);
    const auto fg = signed_compose(f, g);
    CHECK(oracle::same_action({signed_map(fg)}, {signed_map(f), signed_map(g)}, 2));
    CHECK(equal(phi(fg), compose(phi(f), phi(g))));
    CHECK(signed_equal(signed_compose(f, signed_inverse(f)), SignedTreePair::identity()));
    const auto reduced = signed_reduce(f);
    CHECK(oracle::same_action({signed_map(reduced)}, {signed_map(f)}, 2));
    CHECK(reduce(phi(reduced)) == reduce(phi(signed_refine_leaf(reduced, 0))));
    CHECK(equal(phi(reduced), phi(f)));
    // Each copy follows the signed action.
    for (const auto& p : {pt("(0)"), pt("1(10)"), pt("0100(110)"), pt("11(0)")}) {
      const auto image = signed_apply(f, p);
      CHECK(oracle::unroll(image, 20) ==
            oracle::run({signed_map(f)}, oracle::unroll(p, 40)).value().substr(0, 20));
      const auto zero = Address::parse("0", 2), one = Address::parse("1", 2);
      const auto in0 = apply(phi(f), p.prepended(zero));
      const auto in1 = apply(phi(f), complement(p).prepended(one));
      const bool rev = f.reversed()[*f.base().domain_leaf_above(p.prefix(f.base().max_depth()))];
      CHECK(in0 == (rev ? complement(image).prepended(one) : image.prepended(zero)));
      CHECK(in1 == (rev ? image.prepended(zero) : complement(image).prepended(one)));
    }
  }
}

TEST_CASE("phi is injective on small signed diagrams") {
  const auto all = all_signed(3);
  CHECK(all.size() == 202);
  std::vector<SignedTreePair> reduced;
  std::vector<TreePair> images;
  for (const auto& f : all) {
    reduced.push_back(signed_reduce(f));
    images.push_back(reduce(phi(f)));
    if (images.back().is_identity()) {
      CHECK(signed_equal(f, SignedTreePair::identity()));
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      CHECK((images[i] == images[j]) == (reduced[i] == reduced[j]));
    }
  }
}
