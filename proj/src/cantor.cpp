#include "thompson/cantor.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

namespace thompson {

namespace {

void check_arity(int arity) {
  if (arity < 2 || arity > kMaxArity) {
    throw InvalidArgument("arity must lie in [2, " +
                          std::to_string(kMaxArity) + "], got " +
                          std::to_string(arity));
  }
}

void require_same_arity(int a, int b) {
  if (a != b) {
    throw ArityMismatch("arity mismatch: " + std::to_string(a) + " vs " +
                        std::to_string(b));
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

constexpr std::string_view kEpsilon = "\xCE\xB5";  // ε

// Smallest q dividing |w| with w = (w[0..q))^(|w|/q).
std::size_t primitive_period(const std::string& w) {
  const std::size_t n = w.size();
  for (std::size_t q = 1; q < n; ++q) {
    if (n % q != 0) continue;
    bool ok = true;
    for (std::size_t i = q; i < n && ok; ++i) ok = w[i] == w[i - q];
    if (ok) return q;
  }
  return n;
}

}  // namespace

// ---------------------------------------------------------------- Address

Address::Address(int arity, std::string digits)
    : arity_(arity), digits_(std::move(digits)) {
  check_arity(arity);
  for (char c : digits_) {
    if (static_cast<unsigned char>(c) >= static_cast<unsigned>(arity)) {
      throw InvalidArgument("digit out of range for arity " +
                            std::to_string(arity));
    }
  }
}

Address Address::parse(std::string_view text, int arity) {
  check_arity(arity);
  text = trim(text);
  if (text == kEpsilon || text == "e") return Address(arity);
  std::string digits;
  digits.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c < '0' || c - '0' >= arity) {
      throw ParseError("bad digit '" + std::string(1, c) + "' in address", 1,
                       i + 1);
    }
    digits.push_back(static_cast<char>(c - '0'));
  }
  return Address(arity, std::move(digits));
}

bool Address::is_prefix_of(const Address& other) const {
  return digits_.size() <= other.digits_.size() &&
         other.digits_.compare(0, digits_.size(), digits_) == 0;
}

Address Address::child(int digit) const {
  Address out = *this;
  out.digits_.push_back(static_cast<char>(digit));
  return out;
}

Address Address::parent() const {
  Address out = *this;
  out.digits_.pop_back();
  return out;
}

Address Address::prefix(std::size_t length) const {
  Address out;
  out.arity_ = arity_;
  out.digits_ = digits_.substr(0, length);
  return out;
}

Address Address::suffix_from(std::size_t position) const {
  Address out;
  out.arity_ = arity_;
  out.digits_ = digits_.substr(std::min(position, digits_.size()));
  return out;
}

Address Address::operator+(const Address& tail) const {
  require_same_arity(arity_, tail.arity_);
  Address out = *this;
  out.digits_ += tail.digits_;
  return out;
}

std::string Address::to_string() const {
  if (digits_.empty()) return std::string(kEpsilon);
  std::string s;
  s.reserve(digits_.size());
  for (char c : digits_) s.push_back(static_cast<char>('0' + c));
  return s;
}

std::ostream& operator<<(std::ostream& os, const Address& a) {
  return os << a.to_string();
}

Address complement(const Address& a) {
  std::string d = a.digits();
  for (char& c : d) c = static_cast<char>(a.arity() - 1 - c);
  return Address(a.arity(), std::move(d));
}

// ------------------------------------------------------------ CantorPoint

CantorPoint::CantorPoint(Address preperiod, Address period) {
  require_same_arity(preperiod.arity(), period.arity());
  if (period.is_root()) throw InvalidArgument("period must be nonempty");
  std::string u = preperiod.digits();
  std::string v = period.digits();
  v.resize(primitive_period(v));
  while (!u.empty() && u.back() == v.back()) {
    u.pop_back();
    std::rotate(v.rbegin(), v.rbegin() + 1, v.rend());
  }
  preperiod_ = Address(period.arity(), std::move(u));
  period_ = Address(period.arity(), std::move(v));
}

CantorPoint CantorPoint::parse(std::string_view text, int arity) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw ParseError("point must look like u(v)", 1, 1);
  }
  const auto head = text.substr(0, open);
  const auto body = text.substr(open + 1, text.size() - open - 2);
  if (body.empty()) throw ParseError("empty period", 1, open + 2);
  return CantorPoint(head.empty() ? Address(arity) : Address::parse(head, arity),
                     Address::parse(body, arity));
}

int CantorPoint::digit(std::size_t i) const {
  if (i < preperiod_.depth()) return preperiod_[i];
  return period_[(i - preperiod_.depth()) % period_.depth()];
}

Address CantorPoint::prefix(std::size_t length) const {
  std::string d;
  d.reserve(length);
  for (std::size_t i = 0; i < length; ++i) d.push_back(static_cast<char>(digit(i)));
  return Address(arity(), std::move(d));
}

CantorPoint CantorPoint::shifted(std::size_t k) const {
  if (k <= preperiod_.depth()) {
    return CantorPoint(preperiod_.suffix_from(k), period_);
  }
  const std::size_t r = (k - preperiod_.depth()) % period_.depth();
  std::string v = period_.digits();
  std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r), v.end());
  return CantorPoint(Address(arity()), Address(arity(), std::move(v)));
}

CantorPoint CantorPoint::prepended(const Address& head) const {
  return CantorPoint(head + preperiod_, period_);
}

bool CantorPoint::in_interval(const Address& a) const {
  for (std::size_t i = 0; i < a.depth(); ++i) {
    if (digit(i) != a[i]) return false;
  }
  return true;
}

std::string CantorPoint::to_string() const {
  std::string s = preperiod_.is_root() ? std::string() : preperiod_.to_string();
  return s + "(" + period_.to_string() + ")";
}

std::ostream& operator<<(std::ostream& os, const CantorPoint& p) {
  return os << p.to_string();
}

CantorPoint complement(const CantorPoint& p) {
  return CantorPoint(complement(p.preperiod()), complement(p.period()));
}

// --------------------------------------------------------------- Rational

Rational Rational::parse(std::string_view text) {
  text = trim(text);
  Rational r;
  const auto slash = text.find('/');
  auto parse_u64 = [](std::string_view s, std::uint64_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ParseError("bad rational '" + std::string(s) + "'", 1, 1);
    }
  };
  if (slash == std::string_view::npos) {
    parse_u64(text, r.num);
    r.den = 1;
  } else {
    parse_u64(text.substr(0, slash), r.num);
    parse_u64(text.substr(slash + 1), r.den);
  }
  if (r.den == 0) throw ParseError("zero denominator", 1, slash + 2);
  return r;
}

std::string Rational::to_string() const {
  return den == 1 ? std::to_string(num)
                  : std::to_string(num) + "/" + std::to_string(den);
}

Rational inverse_power(int arity, int k) {
  std::uint64_t den = 1;
  for (int i = 0; i < k; ++i) den *= static_cast<std::uint64_t>(arity);
  return {1, den};
}

// -------------------------------------------------------------- ClopenSet

ClopenSet ClopenSet::normalize(int arity, std::vector<Address> intervals) {
  check_arity(arity);
  for (const auto& a : intervals) require_same_arity(arity, a.arity());
  std::sort(intervals.begin(), intervals.end());
  intervals.erase(std::unique(intervals.begin(), intervals.end()),
                  intervals.end());

  // Sorted order places every member right after its prefix and keeps a
  // complete sibling family contiguous, so one stack pass suffices.
  std::vector<Address> stack;
  for (auto& a : intervals) {
    if (!stack.empty() && stack.back().is_prefix_of(a)) continue;
    stack.push_back(std::move(a));
    while (!stack.empty() && !stack.back().is_root() &&
           stack.back()[stack.back().depth() - 1] == arity - 1 &&
           stack.size() >= static_cast<std::size_t>(arity)) {
      const std::size_t base = stack.size() - static_cast<std::size_t>(arity);
      const Address parent = stack.back().parent();
      bool family = true;
      for (int d = 0; d < arity && family; ++d) {
        const Address& m = stack[base + static_cast<std::size_t>(d)];
        family = m.depth() == parent.depth() + 1 && m[parent.depth()] == d &&
                 parent.is_prefix_of(m);
      }
      if (!family) break;
      stack.resize(base);
      stack.push_back(parent);
    }
  }
  ClopenSet s(arity);
  s.intervals_ = std::move(stack);
  return s;
}

ClopenSet ClopenSet::whole(int arity) {
  return normalize(arity, {Address(arity)});
}

ClopenSet ClopenSet::interval(const Address& a) {
  return normalize(a.arity(), {a});
}

ClopenSet ClopenSet::parse(std::string_view text, int arity) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw ParseError("clopen set must be enclosed in braces", 1, 1);
  }
  std::string_view body = trim(text.substr(1, text.size() - 2));
  std::vector<Address> out;
  while (!body.empty()) {
    const auto comma = body.find(',');
    out.push_back(Address::parse(body.substr(0, comma), arity));
    if (comma == std::string_view::npos) break;
    body = body.substr(comma + 1);
  }
  return normalize(arity, std::move(out));
}

std::size_t ClopenSet::max_depth() const {
  std::size_t d = 0;
  for (const auto& a : intervals_) d = std::max(d, a.depth());
  return d;
}

bool ClopenSet::contains(const CantorPoint& p) const {
  require_same_arity(arity_, p.arity());
  for (const auto& a : intervals_) {
    if (p.in_interval(a)) return true;
  }
  return false;
}

bool ClopenSet::contains(const Address& a) const {
  for (const auto& m : intervals_) {
    if (m.is_prefix_of(a)) return true;
  }
  return false;
}

std::string ClopenSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (i) s += ",";
    s += intervals_[i].to_string();
  }
  return s + "}";
}

std::ostream& operator<<(std::ostream& os, const ClopenSet& s) {
  return os << s.to_string();
}

ClopenSet unite(const ClopenSet& a, const ClopenSet& b) {
  require_same_arity(a.arity(), b.arity());
  std::vector<Address> all = a.intervals();
  all.insert(all.end(), b.intervals().begin(), b.intervals().end());
  return ClopenSet::normalize(a.arity(), std::move(all));
}

ClopenSet intersect(const ClopenSet& a, const ClopenSet& b) {
  require_same_arity(a.arity(), b.arity());
  std::vector<Address> out;
  for (const auto& x : a.intervals()) {
    for (const auto& y : b.intervals()) {
      if (x.is_prefix_of(y)) {
        out.push_back(y);
      } else if (y.is_prefix_of(x)) {
        out.push_back(x);
      }
    }
  }
  return ClopenSet::normalize(a.arity(), std::move(out));
}

namespace {

void subtract_from_interval(const Address& x, const std::vector<Address>& cut,
                            std::vector<Address>& out) {
  std::vector<Address> below;
  for (const auto& y : cut) {
    if (y.is_prefix_of(x)) return;
    if (x.is_prefix_of(y)) below.push_back(y);
  }
  if (below.empty()) {
    out.push_back(x);
    return;
  }
  for (int d = 0; d < x.arity(); ++d) {
    subtract_from_interval(x.child(d), below, out);
  }
}

}  // namespace

ClopenSet difference(const ClopenSet& a, const ClopenSet& b) {
  require_same_arity(a.arity(), b.arity());
  std::vector<Address> out;
  for (const auto& x : a.intervals()) {
    subtract_from_interval(x, b.intervals(), out);
  }
  return ClopenSet::normalize(a.arity(), std::move(out));
}

ClopenSet complement(const ClopenSet& a) {
  return difference(ClopenSet::whole(a.arity()), a);
}

bool subset(const ClopenSet& a, const ClopenSet& b) {
  return difference(a, b).empty();
}

bool disjoint(const ClopenSet& a, const ClopenSet& b) {
  require_same_arity(a.arity(), b.arity());
  for (const auto& x : a.intervals()) {
    for (const auto& y : b.intervals()) {
      if (x.comparable(y)) return false;
    }
  }
  return true;
}

ClopenSet clopen_algebra(const ClopenSet& a, const ClopenSet& b, ClopenOp op) {
  switch (op) {
    case ClopenOp::Union:
      return unite(a, b);
    case ClopenOp::Intersect:
      return intersect(a, b);
    case ClopenOp::Difference:
      return difference(a, b);
  }
  return ClopenSet(a.arity());
}

// ----------------------------------------------------------- neighborhoods

std::size_t neighborhood_depth(int arity, const Rational& epsilon) {
  if (epsilon.num == 0 || epsilon.den == 0) {
    throw InvalidArgument("epsilon must be positive");
  }
  // n^-d < num/den  <=>  n^d * num > den
  unsigned __int128 scaled = epsilon.num;
  std::size_t d = 0;
  while (scaled <= epsilon.den) {
    scaled *= static_cast<unsigned>(arity);
    ++d;
  }
  return d;
}

Address neighborhood_interval(const CantorPoint& p, const Rational& epsilon) {
  return p.prefix(neighborhood_depth(p.arity(), epsilon));
}

ClopenSet neighborhood(const CantorPoint& p, const Rational& epsilon) {
  return ClopenSet::interval(neighborhood_interval(p, epsilon));
}

ClopenSet neighborhood(const std::vector<CantorPoint>& points, int arity,
                       const Rational& epsilon) {
  return neighborhood_at_depth(points, arity,
                               neighborhood_depth(arity, epsilon));
}

ClopenSet neighborhood_at_depth(const std::vector<CantorPoint>& points,
                                int arity, std::size_t depth) {
  std::vector<Address> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    require_same_arity(arity, p.arity());
    out.push_back(p.prefix(depth));
  }
  return ClopenSet::normalize(arity, std::move(out));
}

std::vector<Address> all_addresses(int arity, std::size_t depth) {
  std::vector<Address> level{Address(arity)};
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<Address> next;
    next.reserve(level.size() * static_cast<std::size_t>(arity));
    for (const auto& a : level) {
      for (int k = 0; k < arity; ++k) next.push_back(a.child(k));
    }
    level = std::move(next);
  }
  return level;
}

}  // namespace thompson
