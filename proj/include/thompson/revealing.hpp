#pragma once

// Revealing tree-pair diagrams and the dynamics they expose.
//
// For a diagram (A, B, s): X-roots are range leaves lying strictly above
// domain leaves, Y-roots are domain leaves lying strictly above range
// leaves.  The diagram is revealing when every X-root is a repeller (its
// backward chain through neutral leaves ends strictly below it) and every
// Y-root is an attractor (its forward chain ends strictly below it).

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "thompson/element.hpp"

namespace thompson {

struct RevealingPair {
  TreePair base;
  std::vector<Address> x_roots;  // repellers
  std::vector<Address> y_roots;  // attractors
};

// X- and Y-roots of an arbitrary diagram, without modifying it.
RevealingPair describe(const TreePair& f);
bool satisfies_revealing_definition(const RevealingPair& rp);

// Reduces f, then expands along offending chains until revealing.  A cap
// of 0 selects 10 * (leaf count)^2 iterations.
RevealingPair to_revealing(const TreePair& f, std::size_t iteration_cap = 0);

enum class LeafKind { NeutralPeriodic, AttractorRoot, RepellerRoot, Transient };
const char* to_string(LeafKind kind);

struct LeafClass {
  Address leaf;
  LeafKind kind = LeafKind::NeutralPeriodic;
  std::size_t s = 0;  // forward steps to the end of the chain
  std::size_t r = 0;  // backward steps to the start of the chain
  std::size_t t = 0;  // period of a neutral periodic leaf
  Address source;     // Transient: repeller root above the chain start
  Address target;     // Transient: attractor root above the chain end
  std::vector<Address> iac;  // g^-r(leaf), ..., g^s(leaf)
};

// One entry per leaf of A union B, sorted by address.
std::vector<LeafClass> classify_leaves(const RevealingPair& rp);

struct PeriodicPoint {
  CantorPoint point;
  std::size_t period;
  CantorPoint orbit_min;  // least point of the orbit
  friend bool operator==(const PeriodicPoint&, const PeriodicPoint&) = default;
};

struct DynamicalData {
  ClopenSet U;
  ClopenSet V;
  std::vector<PeriodicPoint> att;  // every point of every attracting orbit
  std::vector<PeriodicPoint> rep;
  std::uint64_t finite_order_on_U = 1;

  std::vector<CantorPoint> att_points() const;
  std::vector<CantorPoint> rep_points() const;
  std::vector<CantorPoint> per0() const;
  // Lcm of all periods, including the order on U.
  std::uint64_t stabilizing_power() const;
};

DynamicalData dynamics(const TreePair& f);
DynamicalData dynamics(const RevealingPair& rp);

// Independent estimate: enumerates the affine pieces P -> Q of f^k for
// k <= steps, ignoring pieces finer than `depth`.  Q = P.u gives an
// attracting point, P = Q.u a repelling one and P = Q a periodic interval.
DynamicalData brute_dynamics(const TreePair& f, std::size_t depth,
                             std::size_t steps);

// `ATT p period=s` / `REP p period=r` per orbit, then `U = ...`, `V = ...`.
std::string format_dynamics(const DynamicalData& d);

}  // namespace thompson
