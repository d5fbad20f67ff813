#include "thompson/words.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "scan.hpp"
#include "thompson/error.hpp"

namespace thompson {

namespace {

constexpr Symbol kXFlag = Symbol{1} << 31;
constexpr std::size_t kMaxWordLength = std::size_t{1} << 24;

bool cancels(const Letter& a, const Letter& b) {
  return a.symbol == b.symbol && a.exponent == -b.exponent;
}

void check_genus(int genus) {
  if (genus < 0) throw InvalidArgument("genus must be nonnegative");
}

void check_alphabet(std::span<const Letter> w, int genus) {
  check_genus(genus);
  if (genus == 0) return;
  for (const Letter& l : w) {
    if (!l.is_x() && l.a_index() >= static_cast<std::uint32_t>(2 * genus)) {
      throw InvalidArgument(l.to_string() + " is outside the genus " +
                            std::to_string(genus) + " alphabet");
    }
  }
}

class WordParser {
 public:
  WordParser(detail::Scanner& in, std::string_view stops) : in_(in), stops_(stops) {}

  Word sequence() {
    Word out;
    while (!in_.done()) {
      const char c = in_.peek();
      if (c == ')' || stops_.find(c) != std::string_view::npos) break;
      append(out, item());
    }
    return out;
  }

 private:
  Word item() {
    Word base;
    if (in_.accept("(")) {
      base = sequence();
      in_.expect(")");
    } else {
      base.push_back(letter());
    }
    if (!in_.accept("^")) return base;
    const std::size_t at = in_.pos();
    const long long k = in_.integer();
    const std::size_t count = static_cast<std::size_t>(k < 0 ? -k : k);
    if (!base.empty() && count > kMaxWordLength / base.size()) {
      in_.fail_at("word too long", at);
    }
    if (k < 0) base = inverse(base);
    Word out;
    out.reserve(base.size() * count);
    for (std::size_t i = 0; i < count; ++i) out.insert(out.end(), base.begin(), base.end());
    return out;
  }

  Letter letter() {
    in_.skip_ws();
    const std::size_t at = in_.pos();
    std::string stops = "()^";
    stops += stops_;
    const std::string_view tok = in_.token(stops);
    if (tok.empty()) in_.fail("expected a letter");
    const std::string_view rest = tok.substr(1);
    if (tok[0] == 'x') {
      if (rest.size() > kMaxXDepth ||
          rest.find_first_not_of("01") != std::string_view::npos) {
        in_.fail_at("bad x index '" + std::string(rest) + "'", at);
      }
      return Letter::x(rest);
    }
    if (tok[0] == 'a' && !rest.empty() && rest.size() <= 9 &&
        rest.find_first_not_of("0123456789") == std::string_view::npos) {
      return Letter::a(static_cast<std::uint32_t>(std::stoul(std::string(rest))));
    }
    in_.fail_at("unknown letter '" + std::string(tok) + "'", at);
  }

  void append(Word& out, const Word& more) {
    if (out.size() + more.size() > kMaxWordLength) in_.fail("word too long");
    out.insert(out.end(), more.begin(), more.end());
  }

  detail::Scanner& in_;
  std::string_view stops_;
};

Word parse_word_until(detail::Scanner& in, std::string_view stops) {
  WordParser p(in, stops);
  Word w = p.sequence();
  if (!in.done() && in.peek() == ')') in.fail("unbalanced ')'");
  return w;
}

}  // namespace

Letter Letter::x(std::string_view index, int exponent) {
  if (index.size() > kMaxXDepth) throw InvalidArgument("x index too deep");
  Symbol bits = 0;
  for (char c : index) {
    if (c != '0' && c != '1') throw InvalidArgument("x index must be binary");
    bits = (bits << 1) | static_cast<Symbol>(c - '0');
  }
  return {kXFlag | (Symbol{1} << index.size()) | bits, exponent};
}

std::string Letter::x_index() const {
  const Symbol v = symbol & ~kXFlag;
  const int len = std::bit_width(v) - 1;
  std::string s(static_cast<std::size_t>(len), '0');
  for (int i = 0; i < len; ++i) {
    if ((v >> (len - 1 - i)) & 1) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

std::string Letter::to_string() const {
  std::string s = is_x() ? "x" + x_index() : "a" + std::to_string(a_index());
  if (exponent != 1) s += "^" + std::to_string(exponent);
  return s;
}

Word parse_word(std::string_view text, std::size_t line) {
  detail::Scanner in(text, line);
  Word w = parse_word_until(in, "");
  if (!in.done()) in.fail("trailing input");
  return w;
}

std::string to_string(const Word& w) {
  std::string s;
  for (const Letter& l : w) {
    if (!s.empty()) s += " ";
    s += l.to_string();
  }
  return s;
}

Word inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverse());
  return out;
}

Word reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const Letter& l : w) {
    if (!out.empty() && cancels(out.back(), l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

bool is_reduced(std::span<const Letter> w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (cancels(w[i - 1], w[i])) return false;
  }
  return true;
}

bool is_cyclically_reduced(std::span<const Letter> w) {
  return is_reduced(w) && (w.size() < 2 || !cancels(w.front(), w.back()));
}

std::pair<Word, Word> cyclic_reduce(const Word& w) {
  const Word r = reduce(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && cancels(r[i], r[j - 1])) {
    ++i;
    --j;
  }
  return {Word(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(i)),
          Word(r.begin() + static_cast<std::ptrdiff_t>(i),
               r.begin() + static_cast<std::ptrdiff_t>(j))};
}

std::size_t co(const Word& w, const Word& v) {
  const auto [a, b] = std::mismatch(w.begin(), w.end(), v.begin(), v.end());
  return static_cast<std::size_t>(a - w.begin());
}

Word surface_relator(int genus) {
  check_genus(genus);
  Word r;
  for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(genus); ++i) {
    r.insert(r.end(), {Letter::a(2 * i), Letter::a(2 * i + 1), Letter::a(2 * i, -1),
                       Letter::a(2 * i + 1, -1)});
  }
  return r;
}

Word dehn_reduce(const Word& w, int genus) {
  check_alphabet(w, genus);
  if (genus < 2) throw InvalidArgument("Dehn reduction needs genus >= 2");
  Word cur;
  for (const Letter& l : w) {
    if (!l.is_x()) cur.push_back(l);
  }
  cur = reduce(cur);

  // Cyclic rotations of the relator and its inverse.
  std::vector<Word> rotations;
  for (const Word& r : {surface_relator(genus), inverse(surface_relator(genus))}) {
    for (std::size_t s = 0; s < r.size(); ++s) {
      Word rot(r.begin() + static_cast<std::ptrdiff_t>(s), r.end());
      rot.insert(rot.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(s));
      rotations.push_back(std::move(rot));
    }
  }
  const std::size_t half = 2 * static_cast<std::size_t>(genus);

  bool changed = true;
  while (changed && !cur.empty()) {
    changed = false;
    for (std::size_t i = 0; i < cur.size() && !changed; ++i) {
      for (const Word& rot : rotations) {
        std::size_t m = 0;
        while (m < rot.size() && i + m < cur.size() && cur[i + m] == rot[m]) ++m;
        if (m <= half) continue;
        // cur[i, i+m) = rot[0, m) = rot[m, end)^-1.
        Word rest(rot.begin() + static_cast<std::ptrdiff_t>(m), rot.end());
        Word next(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(i));
        const Word inv = inverse(rest);
        next.insert(next.end(), inv.begin(), inv.end());
        next.insert(next.end(), cur.begin() + static_cast<std::ptrdiff_t>(i + m), cur.end());
        cur = reduce(next);
        changed = true;
        break;
      }
    }
  }
  return cur;
}

bool surface_nontrivial(std::span<const Letter> w, int genus) {
  check_alphabet(w, genus);
  if (genus == 0) return false;
  if (genus == 1) {
    int s0 = 0, s1 = 0;
    for (const Letter& l : w) {
      if (l.is_x()) continue;
      (l.a_index() == 0 ? s0 : s1) += l.exponent;
    }
    return s0 != 0 || s1 != 0;
  }
  return !dehn_reduce(Word(w.begin(), w.end()), genus).empty();
}

bool surface_nontrivial(const Word& w, int genus) {
  return surface_nontrivial(std::span<const Letter>(w), genus);
}

std::size_t c_word(std::span<const Letter> w, int genus) {
  check_alphabet(w, genus);
  if (genus == 0) return 0;
  if (!is_reduced(w)) return c_word(reduce(Word(w.begin(), w.end())), genus);
  const std::size_t n = w.size();

  // Exponent-sum prefixes for the torus test.
  constexpr std::size_t kInline = 64;
  std::array<int, 2 * (kInline + 1)> inline_sums{};
  std::vector<int> heap_sums;
  int* sums = inline_sums.data();
  if (genus == 1) {
    if (n > kInline) {
      heap_sums.assign(2 * (n + 1), 0);
      sums = heap_sums.data();
    }
    for (std::size_t i = 0; i < n; ++i) {
      sums[2 * (i + 1)] = sums[2 * i];
      sums[2 * (i + 1) + 1] = sums[2 * i + 1];
      if (!w[i].is_x()) sums[2 * (i + 1) + w[i].a_index()] += w[i].exponent;
    }
  }
  const auto nontrivial = [&](std::size_t s, std::size_t q) {
    if (genus == 1) {
      return sums[2 * (s + q)] != sums[2 * s] || sums[2 * (s + q) + 1] != sums[2 * s + 1];
    }
    return surface_nontrivial(w.subspan(s, q), genus);
  };

  // A maximal stretch of period q starting at s holds the windows
  // s, s+1, ..., s+r, which are cyclic rotations of each other, hence all
  // trivial or all not.
  std::size_t best = 0;
  for (std::size_t q = 1; q <= n && n / q > best; ++q) {
    std::size_t s = 0;
    while (s + q <= n) {
      std::size_t r = 0;
      while (s + r + q < n && w[s + r] == w[s + r + q]) ++r;
      const std::size_t k = (r + q) / q;
      if (k > best && nontrivial(s, q)) best = k;
      s += r + 1;
    }
  }
  return best;
}

std::size_t c_word(const Word& w, int genus) {
  return c_word(std::span<const Letter>(w), genus);
}

std::size_t c_class(const Word& w, int genus) {
  check_alphabet(w, genus);
  const Word core = cyclic_reduce(w).second;
  std::size_t best = 0;
  for (std::size_t s = 0; s < core.size(); ++s) {
    Word rot(core.begin() + static_cast<std::ptrdiff_t>(s), core.end());
    rot.insert(rot.end(), core.begin(), core.begin() + static_cast<std::ptrdiff_t>(s));
    best = std::max(best, c_word(rot, genus));
  }
  return best;
}

Word expand_x(const Word& w, std::size_t target_depth) {
  if (target_depth > kMaxXDepth) throw InvalidArgument("x depth overflow");
  std::size_t total = 0;
  for (const Letter& l : w) {
    const std::size_t d = l.is_x() ? l.x_index().size() : target_depth;
    total += d < target_depth ? std::size_t{1} << (target_depth - d) : 1;
    if (total > kMaxWordLength) throw CapExceeded("expanded word too long");
  }
  Word out;
  out.reserve(total);
  for (const Letter& l : w) {
    if (!l.is_x()) {
      out.push_back(l);
      continue;
    }
    const std::string index = l.x_index();
    if (index.size() >= target_depth) {
      out.push_back(l);
      continue;
    }
    const std::size_t extra = target_depth - index.size();
    const std::size_t count = std::size_t{1} << extra;
    for (std::size_t j = 0; j < count; ++j) {
      // Leaves left to right; an inverse letter runs right to left.
      const std::size_t leaf = l.exponent > 0 ? j : count - 1 - j;
      std::string sub = index;
      for (std::size_t b = extra; b-- > 0;) sub += ((leaf >> b) & 1) ? '1' : '0';
      out.push_back(Letter::x(sub, l.exponent));
    }
  }
  return out;
}

Word collapse_x(const Word& w) {
  Word out;
  for (const Letter& l : w) {
    out.push_back(l);
    while (out.size() >= 2) {
      const Letter& first = out[out.size() - 2];
      const Letter& second = out.back();
      if (!first.is_x() || !second.is_x() || first.exponent != second.exponent) break;
      const std::string i = first.x_index();
      const std::string j = second.x_index();
      if (i.empty() || i.size() != j.size() ||
          i.compare(0, i.size() - 1, j, 0, j.size() - 1) != 0) {
        break;
      }
      // x_I0 x_I1 = x_I, and x_I1^-1 x_I0^-1 = x_I^-1.
      const char lead = first.exponent > 0 ? '0' : '1';
      if (i.back() != lead || j.back() == lead) break;
      const Letter merged = Letter::x(std::string_view(i).substr(0, i.size() - 1), first.exponent);
      out.pop_back();
      out.back() = merged;
    }
  }
  return out;
}

FreeAutomorphism::FreeAutomorphism(std::vector<Symbol> basis,
                                   std::vector<std::pair<Symbol, Word>> images,
                                   std::vector<std::pair<Symbol, Word>> inverse_images)
    : basis_(std::move(basis)) {
  std::sort(basis_.begin(), basis_.end());
  basis_.erase(std::unique(basis_.begin(), basis_.end()), basis_.end());
  if (basis_.empty()) throw InvalidArgument("empty basis");
  for (Symbol s : basis_) {
    images_.push_back({Letter{s, 1}});
    inverse_images_.push_back({Letter{s, 1}});
  }
  for (auto& [s, w] : images) images_[position(s)] = reduce(w);
  for (auto& [s, w] : inverse_images) inverse_images_[position(s)] = reduce(w);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const Word g{Letter{basis_[i], 1}};
    if (apply(apply_inverse(g)) != g || apply_inverse(apply(g)) != g) {
      throw InvalidArgument("invalid inverse map at " + g[0].to_string());
    }
  }
}

FreeAutomorphism FreeAutomorphism::identity(std::vector<Symbol> basis) {
  return FreeAutomorphism(std::move(basis), {}, {});
}

FreeAutomorphism FreeAutomorphism::parse(std::string_view text, std::size_t line) {
  detail::Scanner in(text, line);
  std::vector<Symbol> basis;
  std::vector<std::pair<Symbol, Word>> sides[2];
  for (int side = 0; side < 2; ++side) {
    while (!in.done() && in.peek() != '|') {
      in.skip_ws();
      const std::size_t at = in.pos();
      const Word g = parse_word_until(in, "-,|");
      if (g.size() != 1 || g[0].exponent != 1) in.fail_at("expected a generator", at);
      in.expect("->");
      const Word image = parse_word_until(in, ",|");
      basis.push_back(g[0].symbol);
      for (const Letter& l : image) basis.push_back(l.symbol);
      sides[side].emplace_back(g[0].symbol, image);
      if (!in.accept(",")) break;
    }
    if (side == 0 && !in.accept("|")) break;
  }
  if (!in.done()) in.fail("trailing input");
  try {
    return FreeAutomorphism(std::move(basis), std::move(sides[0]), std::move(sides[1]));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), line, 1);
  }
}

std::size_t FreeAutomorphism::position(Symbol s) const {
  const auto it = std::lower_bound(basis_.begin(), basis_.end(), s);
  if (it == basis_.end() || *it != s) {
    throw InvalidArgument(Letter{s, 1}.to_string() + " is not in the basis");
  }
  return static_cast<std::size_t>(it - basis_.begin());
}

Word FreeAutomorphism::substitute(const Word& w, const std::vector<Word>& table) const {
  Word out;
  for (const Letter& l : w) {
    const Word& image = table[position(l.symbol)];
    if (l.exponent > 0) {
      out.insert(out.end(), image.begin(), image.end());
    } else {
      const Word inv = thompson::inverse(image);
      out.insert(out.end(), inv.begin(), inv.end());
    }
  }
  return reduce(out);
}

Word FreeAutomorphism::apply(const Word& w) const { return substitute(w, images_); }

Word FreeAutomorphism::apply_inverse(const Word& w) const {
  return substitute(w, inverse_images_);
}

FreeAutomorphism FreeAutomorphism::inverse() const {
  FreeAutomorphism f = *this;
  std::swap(f.images_, f.inverse_images_);
  return f;
}

std::string FreeAutomorphism::to_string() const {
  std::string s;
  for (int side = 0; side < 2; ++side) {
    const auto& table = side == 0 ? images_ : inverse_images_;
    if (side == 1) s += " | ";
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (i) s += ", ";
      s += Letter{basis_[i], 1}.to_string() + " -> " + thompson::to_string(table[i]);
    }
  }
  return s;
}

std::size_t lambda(const FreeAutomorphism& f) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < f.basis().size(); ++i) {
    best = std::max({best, f.image(i).size(), f.inverse_image(i).size()});
  }
  return best;
}

std::vector<Word> reduced_words(const std::vector<Symbol>& basis, std::size_t max_length) {
  std::vector<Letter> letters;
  for (Symbol s : basis) {
    letters.push_back({s, 1});
    letters.push_back({s, -1});
  }
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_length; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (const Letter& l : letters) {
        if (!out[i].empty() && cancels(out[i].back(), l)) continue;
        Word w = out[i];
        w.push_back(l);
        out.push_back(std::move(w));
      }
    }
    begin = end;
  }
  return out;
}

CooperReport cooper_check(const FreeAutomorphism& f, std::size_t length_bound) {
  CooperReport report;
  report.lambda = lambda(f);
  report.bound = report.lambda * report.lambda;
  const auto words = reduced_words(f.basis(), length_bound);
  std::vector<Word> images;
  images.reserve(words.size());
  for (const Word& w : words) images.push_back(f.apply(w));
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (co(words[i], words[j]) != 0) continue;
      ++report.pairs;
      const std::size_t c = co(images[i], images[j]);
      report.max_co = std::max(report.max_co, c);
      if (c > report.bound && report.pass) {
        report.pass = false;
        report.counterexample = {words[i], words[j]};
      }
    }
  }
  return report;
}

}  // namespace thompson
