#pragma once

#include <string>
#include <vector>

#include "bootperc/family.hpp"
#include "bootperc/geometry.hpp"

namespace bootperc {

enum class Classification { Supercritical, Critical, Subcritical };

std::string to_string(Classification c);

struct StabilityProfile {
  ArcSet unstable;  // union of the per-rule open unstable arcs
  ArcSet stable;    // its complement: closed arcs and isolated points
  // Stable arcs of positive length (everything stable except isolated points).
  ArcSet non_isolated;
  std::vector<Direction> isolated;  // ccw order from (1,0)
  Classification classification;

  bool is_stable(const Direction& u) const { return stable.contains(u); }
  bool is_isolated(const Direction& u) const;
};

StabilityProfile stability_profile(const UpdateFamily& family);
Classification classify(const UpdateFamily& family);

// Open semicircles that contain no non-isolated stable direction, one per
// combinatorial type of the isolated directions they contain; the infimum in
// the family difficulty ranges over these. Throws StateError unless the
// profile is critical.
std::vector<Arc> critical_semicircle_candidates(const StabilityProfile& profile);

}  // namespace bootperc
