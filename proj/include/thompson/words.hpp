#pragma once

// Free-group words over the surface generators A = {a0, a1, ...} and the
// loops X = {x_I : I a binary string}, with the invariant c(w) and Cooper's
// cancellation bound for automorphisms.
//
// For genus g the surface group is <a0..a(2g-1) | [a0,a1][a2,a3]...>; every
// x letter projects to the identity.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace thompson {

// Bit 31 set: x_I, encoded as (1 << |I|) | I read in binary.  Otherwise the
// index k of a_k.
using Symbol = std::uint32_t;

inline constexpr std::size_t kMaxXDepth = 24;

struct Letter {
  Symbol symbol;
  int exponent;  // +1 or -1

  static Letter a(std::uint32_t k, int exponent = 1) { return {k, exponent}; }
  static Letter x(std::string_view index, int exponent = 1);

  bool is_x() const { return symbol >> 31; }
  std::uint32_t a_index() const { return symbol; }
  std::string x_index() const;
  Letter inverse() const { return {symbol, -exponent}; }
  std::string to_string() const;

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

// `a0 a1^-1 x010 (a0 x0)^2`; `^k` on a letter or a parenthesised group,
// negative k inverts.  The result is the literal expansion, not reduced.
Word parse_word(std::string_view text, std::size_t line = 1);
std::string to_string(const Word& w);

Word inverse(const Word& w);
Word reduce(const Word& w);
bool is_reduced(std::span<const Letter> w);
bool is_cyclically_reduced(std::span<const Letter> w);
// w = conjugator . core . conjugator^-1 with core cyclically reduced.
std::pair<Word, Word> cyclic_reduce(const Word& w);
// Longest common prefix of two reduced words.
std::size_t co(const Word& w, const Word& v);

// Triviality of the projection to the closed surface group of `genus`.
// Genus 0 is the trivial group; genus 1 is Z^2; higher genus runs Dehn's
// algorithm.  a-letters must have index < 2 * genus when genus > 0.
bool surface_nontrivial(std::span<const Letter> w, int genus);
bool surface_nontrivial(const Word& w, int genus);
// Greedy Dehn reduction of the projection; empty iff trivial (genus >= 2).
Word dehn_reduce(const Word& w, int genus);
Word surface_relator(int genus);

// Largest k with w = w0 v^k w1 as reduced words, v nontrivial in the surface
// group, v a subword at letter granularity.
std::size_t c_word(std::span<const Letter> w, int genus);
std::size_t c_word(const Word& w, int genus);
// Largest c_word over the cyclic rotations of the cyclic reduction.
std::size_t c_class(const Word& w, int genus);

// Applies x_I = x_I0 x_I1 until every x letter has depth >= target_depth.
Word expand_x(const Word& w, std::size_t target_depth);
// Inverse rewriting: merges x_I0 x_I1 -> x_I (and inverses) while possible.
Word collapse_x(const Word& w);

class FreeAutomorphism {
 public:
  // Generators missing from `images` or `inverse_images` map to themselves.
  // Throws InvalidArgument unless the two maps are mutually inverse on the
  // basis.
  FreeAutomorphism(std::vector<Symbol> basis,
                   std::vector<std::pair<Symbol, Word>> images,
                   std::vector<std::pair<Symbol, Word>> inverse_images);

  static FreeAutomorphism identity(std::vector<Symbol> basis);
  // `a0 -> a0 a1, a1 -> a1 | a0 -> a0 a1^-1`; the basis is every symbol
  // that occurs.
  static FreeAutomorphism parse(std::string_view text, std::size_t line = 1);

  const std::vector<Symbol>& basis() const { return basis_; }
  const Word& image(std::size_t i) const { return images_[i]; }
  const Word& inverse_image(std::size_t i) const { return inverse_images_[i]; }

  Word apply(const Word& w) const;
  Word apply_inverse(const Word& w) const;
  FreeAutomorphism inverse() const;

  std::string to_string() const;

 private:
  std::size_t position(Symbol s) const;
  Word substitute(const Word& w, const std::vector<Word>& table) const;

  std::vector<Symbol> basis_;
  std::vector<Word> images_;
  std::vector<Word> inverse_images_;
};

// max over generators g and e = +-1 of l(f^e(g)).
std::size_t lambda(const FreeAutomorphism& f);

// Every reduced word over basis^+-1 of length <= max_length, shortest first.
std::vector<Word> reduced_words(const std::vector<Symbol>& basis,
                                std::size_t max_length);

struct CooperReport {
  bool pass = true;
  std::size_t lambda = 0;
  std::size_t bound = 0;   // lambda^2
  std::size_t max_co = 0;  // largest co(f(w), f(w')) seen
  std::size_t pairs = 0;
  std::optional<std::pair<Word, Word>> counterexample;
};

// All reduced pairs of length <= length_bound with co(w, w') = 0.
CooperReport cooper_check(const FreeAutomorphism& f, std::size_t length_bound);

}  // namespace thompson
