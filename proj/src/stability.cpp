#include "bootperc/stability.hpp"

#include <algorithm>

namespace bootperc {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Supercritical: return "Supercritical";
    case Classification::Critical: return "Critical";
    case Classification::Subcritical: return "Subcritical";
  }
  return "?";
}

bool StabilityProfile::is_isolated(const Direction& u) const {
  return std::find(isolated.begin(), isolated.end(), u) != isolated.end();
}

namespace {

// Endpoints at which an extremal semicircle may start: every stable
// breakpoint. A semicircle free of some closed set can be rotated clockwise
// until it starts at a point of that set without changing its contents.
std::vector<Direction> arc_his(const ArcSet& s) {
  std::vector<Direction> out;
  for (const auto& a : s.arcs())
    if (a.kind() != Arc::Kind::Full) out.push_back(a.hi());
  return out;
}

bool misses(const Arc& c, const ArcSet& s) { return ArcSet::of(c).intersect(s).is_empty(); }

Classification classify_profile(const ArcSet& stable, const ArcSet& non_isolated) {
  if (stable.is_empty()) return Classification::Supercritical;
  for (const auto& hi : arc_his(stable))
    if (misses(semicircle(hi, Orientation::CounterClockwise), stable))
      return Classification::Supercritical;
  if (non_isolated.is_empty()) return Classification::Critical;
  for (const auto& hi : arc_his(non_isolated))
    if (misses(semicircle(hi, Orientation::CounterClockwise), non_isolated))
      return Classification::Critical;
  return Classification::Subcritical;
}

}  // namespace

StabilityProfile stability_profile(const UpdateFamily& family) {
  std::vector<Arc> arcs;
  arcs.reserve(family.size());
  for (const auto& r : family.rules()) arcs.push_back(unstable_arc_of_rule(r.sites()));
  ArcSet unstable = arcset_union(arcs);
  ArcSet stable = unstable.complement();
  ArcSet non_isolated;
  for (const auto& a : stable.arcs())
    if (a.kind() != Arc::Kind::Point) non_isolated = non_isolated.unite(ArcSet::of(a));
  auto isolated = stable.isolated_points();
  std::sort(isolated.begin(), isolated.end());
  const auto cls = classify_profile(stable, non_isolated);
  return {std::move(unstable), std::move(stable), std::move(non_isolated), std::move(isolated), cls};
}

Classification classify(const UpdateFamily& family) { return stability_profile(family).classification; }

std::vector<Arc> critical_semicircle_candidates(const StabilityProfile& profile) {
  if (profile.classification != Classification::Critical)
    throw StateError("semicircle candidates requested for a " + to_string(profile.classification) +
                     " family");
  std::vector<Direction> anchors = profile.stable.breakpoints();
  std::vector<Arc> out;
  for (const auto& p : anchors) {
    for (auto side : {Orientation::CounterClockwise, Orientation::Clockwise}) {
      Arc c = semicircle(p, side);
      if (!misses(c, profile.non_isolated)) continue;
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
  }
  return out;
}

}  // namespace bootperc
