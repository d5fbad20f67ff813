#pragma once

// Brute-force references for the word invariants.  Letters are plain
// (generator, sign) pairs so nothing here depends on the library encoding.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace word_oracle {

struct L {
  int gen;   // index into the caller's alphabet
  int sign;  // +1 / -1
  bool operator==(const L&) const = default;
};

using W = std::vector<L>;
using Nontrivial = std::function<bool(const W&)>;

// Max k over every literal decomposition w = w0 v^k w1 with v nonempty and
// nontrivial(v).
inline std::size_t brute_c(const W& w, const Nontrivial& nontrivial) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t q = 1; i + q <= w.size(); ++q) {
      const W v(w.begin() + static_cast<std::ptrdiff_t>(i),
                w.begin() + static_cast<std::ptrdiff_t>(i + q));
      if (!nontrivial(v)) continue;
      for (std::size_t k = 1; i + k * q <= w.size(); ++k) {
        bool match = true;
        for (std::size_t j = 0; j < q && match; ++j) match = w[i + (k - 1) * q + j] == v[j];
        if (!match) break;
        best = std::max(best, k);
      }
    }
  }
  return best;
}

// Nontrivial in Z^2 = torus group: generators 0 and 1 are a0, a1; anything
// else is an x letter.
inline bool torus_nontrivial(const W& v) {
  int s0 = 0, s1 = 0;
  for (const L& l : v) {
    if (l.gen == 0) s0 += l.sign;
    if (l.gen == 1) s1 += l.sign;
  }
  return s0 != 0 || s1 != 0;
}

// Depth-first walk over every reduced word of length 1..max_len over
// `gens` generators, torus projection (generators 0, 1 are a0, a1).  The
// value of c for a word is the max of its value on the prefix and the best
// decomposition whose power ends at the last letter, which is found by
// checking how many copies of each suffix repeat backwards.
class TorusWalk {
 public:
  TorusWalk(int gens, std::size_t max_len) : gens_(gens), max_len_(max_len) {}

  // visit(word, c) for each word; returns the number of words visited.
  template <class Visit>
  std::size_t run(Visit&& visit) {
    word_.clear();
    c_.assign(1, 0);
    s0_.assign(1, 0);
    s1_.assign(1, 0);
    count_ = 0;
    descend(visit);
    return count_;
  }

 private:
  template <class Visit>
  void descend(Visit& visit) {
    if (word_.size() == max_len_) return;
    for (int g = 0; g < gens_; ++g) {
      for (int sign : {1, -1}) {
        if (!word_.empty() && word_.back().gen == g && word_.back().sign == -sign) continue;
        push({g, sign});
        ++count_;
        visit(word_, c_.back());
        descend(visit);
        pop();
      }
    }
  }

  void push(L l) {
    word_.push_back(l);
    s0_.push_back(s0_.back() + (l.gen == 0 ? l.sign : 0));
    s1_.push_back(s1_.back() + (l.gen == 1 ? l.sign : 0));
    const std::size_t n = word_.size();
    std::size_t best = c_.back();
    for (std::size_t q = 1; q <= n; ++q) {
      if (s0_[n] == s0_[n - q] && s1_[n] == s1_[n - q]) continue;
      std::size_t k = 1;
      while ((k + 1) * q <= n) {
        bool match = true;
        for (std::size_t j = 0; j < q && match; ++j) {
          match = word_[n - (k + 1) * q + j] == word_[n - q + j];
        }
        if (!match) break;
        ++k;
      }
      best = std::max(best, k);
    }
    c_.push_back(best);
  }

  void pop() {
    word_.pop_back();
    c_.pop_back();
    s0_.pop_back();
    s1_.pop_back();
  }

  int gens_;
  std::size_t max_len_;
  W word_;
  std::vector<std::size_t> c_;
  std::vector<int> s0_, s1_;
  std::size_t count_ = 0;
};

}  // namespace word_oracle
