#pragma once

#include "thompson/element.hpp"

namespace fixture {

using thompson::TreePair;

// Attracting fixed point (0), repelling fixed point (1).
inline TreePair f0() {
  return TreePair::parse("V 2 : {0,10,11} -> {00,01,1} perm [0 1 2]");
}
// Order three: 0 -> 10 -> 11 -> 0 on leaves.
inline TreePair h() {
  return TreePair::parse("V 2 : {0,10,11} -> {0,10,11} perm [1 2 0]");
}
inline TreePair swap() {
  return TreePair::parse("V 2 : {0,1} -> {0,1} perm [1 0]");
}
// 00 -> 01 -> 10 -> 11 -> 00.
inline TreePair cycle4() {
  return TreePair::parse("V 2 : {00,01,10,11} -> {00,01,10,11} perm [1 2 3 0]");
}
// Identity on K_0, attractor 1(0) and repeller (1) on K_1.
inline TreePair with_fixed_half() {
  return TreePair::parse("V 2 : {0,10,110,111} -> {0,100,101,11} perm [0 1 2 3]");
}
// Identity on K_1, attractor (0) and repeller 0(1) on K_0.
inline TreePair with_fixed_other_half() {
  return TreePair::parse("V 2 : {00,010,011,1} -> {000,001,01,1} perm [0 1 2 3]");
}
// Fixed attractor (0) and fixed repeller 0(1) on K_0; on K_1 a repelling
// 2-cycle {1(0), 101(0)} and an attracting 4-cycle through 11(0).
inline TreePair mixed_periods() {
  return TreePair::parse(
      "V 2 : {00,010,011,1000,1001,1010,1011,1100,1101,1110,1111} -> "
      "{000,001,01,100,101,11000,110010,110011,1101,1110,1111} "
      "perm [0 1 2 4 6 3 7 8 9 10 5]");
}

}  // namespace fixture
