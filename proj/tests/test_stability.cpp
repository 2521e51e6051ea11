#include <algorithm>
#include <random>

#include "bootperc/errors.hpp"
#include "bootperc/stability.hpp"
#include "doctest.h"
#include "printers.hpp"
#include "oracles.hpp"

using namespace bootperc;

namespace {
Direction D(std::int64_t x, std::int64_t y) { return Direction::of(x, y); }

bool stable_by_dot(const UpdateFamily& f, const Direction& u) {
  for (const auto& r : f.rules()) {
    bool inside = true;
    for (const auto& x : r.sites()) inside = inside && dot(x, u.vector()) < 0;
    if (inside) return false;
  }
  return true;
}

// Classification from scratch: the circle is cut at every perpendicular of a
// rule site; each cut point and one interior point per gap is tested with
// the dot-product rule, then every semicircle anchored at a cut is scanned.
// Cuts are closed under antipodes, so no gap straddles a semicircle end.
Classification brute_classify(const UpdateFamily& f) {
  std::vector<Direction> cuts;
  for (const auto& r : f.rules())
    for (const auto& x : r.sites()) {
      const auto d = Direction::of(x);
      cuts.push_back(d.rotated_ccw());
      cuts.push_back(d.rotated_cw());
      cuts.push_back(d);
      cuts.push_back(d.antipode());
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  struct Elem {
    Direction d;
    bool gap;
    bool stable;
  };
  std::vector<Elem> ring;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const auto a = cuts[i], b = cuts[(i + 1) % cuts.size()];
    ring.push_back({a, false, stable_by_dot(f, a)});
    Direction mid = a.rotated_ccw();
    if (cuts.size() > 1 && cross(a.vector(), b.vector()) > 0) mid = Direction::of(a.vector() + b.vector());
    ring.push_back({mid, true, stable_by_dot(f, mid)});
  }
  bool super = false, critical = false;
  for (const auto& e : cuts) {
    const auto sc = semicircle(e, Orientation::CounterClockwise);
    bool any_stable = false, any_stable_gap = false;
    for (const auto& el : ring)
      if (sc.contains(el.d) && el.stable) {
        any_stable = true;
        any_stable_gap = any_stable_gap || el.gap;
      }
    super = super || !any_stable;
    critical = critical || !any_stable_gap;
  }
  if (super) return Classification::Supercritical;
  if (critical) return Classification::Critical;
  return Classification::Subcritical;
}
}  // namespace

TEST_CASE("golden stable sets") {
  const auto m2 = stability_profile(named_family("modified_two_neighbour"));
  CHECK(m2.isolated == std::vector<Direction>{D(1, 0), D(0, 1), D(-1, 0), D(0, -1)});
  CHECK(m2.non_isolated.is_empty());

  const auto east = stability_profile(named_family("east"));
  CHECK(east.stable == ArcSet::of(Arc::closed(D(-1, 0), D(0, -1))));
  CHECK(east.isolated.empty());

  const auto toy = stability_profile(named_family("toy"));
  const ArcSet expected = ArcSet::of(Arc::closed(D(-1, 0), D(0, -1)))
                              .unite(ArcSet::of(Arc::point(D(1, 0))))
                              .unite(ArcSet::of(Arc::point(D(0, 1))));
  CHECK(toy.stable == expected);
  CHECK(toy.isolated == std::vector<Direction>{D(1, 0), D(0, 1)});
  CHECK(toy.is_isolated(D(0, 1)));
  CHECK_FALSE(toy.is_isolated(D(-1, -1)));
  CHECK(toy.is_stable(D(-1, -1)));
}

TEST_CASE("golden classification") {
  CHECK(classify(named_family("east")) == Classification::Supercritical);
  CHECK(classify(named_family("north_east")) == Classification::Subcritical);
  CHECK(classify(named_family("toy")) == Classification::Critical);
  CHECK(classify(named_family("modified_two_neighbour")) == Classification::Critical);
  CHECK(classify(named_family("two_neighbour")) == Classification::Critical);
  CHECK(classify(named_family("appendix_uk", 3)) == Classification::Critical);
  CHECK(to_string(Classification::Critical) == "Critical");
}

TEST_CASE("critical semicircle candidates") {
  const auto toy = critical_semicircle_candidates(stability_profile(named_family("toy")));
  CHECK(std::find(toy.begin(), toy.end(), Arc::open(D(0, -1), D(0, 1))) != toy.end());

  const auto prof = stability_profile(named_family("modified_two_neighbour"));
  const auto m2 = critical_semicircle_candidates(prof);
  REQUIRE_FALSE(m2.empty());
  for (const auto& c : m2) {
    int inside = 0;
    for (const auto& d : prof.isolated) inside += c.contains(d);
    CHECK(inside >= 1);
    CHECK(inside <= 2);
  }
  CHECK_THROWS_AS(critical_semicircle_candidates(stability_profile(named_family("east"))), StateError);
  CHECK_THROWS_AS(critical_semicircle_candidates(stability_profile(named_family("north_east"))), StateError);
}

TEST_CASE("profile partitions the circle and matches the dot test") {
  std::mt19937_64 rng(21);
  std::vector<Direction> probes;
  for (std::int64_t x = -5; x <= 5; ++x)
    for (std::int64_t y = -5; y <= 5; ++y)
      if (x || y) probes.push_back(D(x, y));
  for (int rep = 0; rep < 200; ++rep) {
    const auto f = oracle::random_family(rng, 4, 3, 2);
    const auto p = stability_profile(f);
    CHECK(p.unstable.unite(p.stable).is_full());
    CHECK(p.unstable.intersect(p.stable).is_empty());
    CHECK(p.isolated == p.stable.isolated_points());
    CHECK(std::is_sorted(p.isolated.begin(), p.isolated.end()));
    for (const auto& u : probes) CHECK(p.is_stable(u) == stable_by_dot(f, u));
  }
}

TEST_CASE("classification agrees with a brute-force semicircle scan") {
  std::mt19937_64 rng(99);
  int counts[3] = {0, 0, 0};
  for (int rep = 0; rep < 400; ++rep) {
    const auto f = oracle::random_family(rng, 4, 3, 2);
    const auto c = classify(f);
    ++counts[static_cast<int>(c)];
    CHECK_MESSAGE(c == brute_classify(f), serialize(f));
  }
  // The sample reaches every class.
  CHECK(counts[0] > 0);
  CHECK(counts[1] > 0);
  CHECK(counts[2] > 0);
}

TEST_CASE("profile is equivariant under lattice symmetries") {
  std::mt19937_64 rng(4);
  std::vector<Direction> probes;
  for (std::int64_t x = -4; x <= 4; ++x)
    for (std::int64_t y = -4; y <= 4; ++y)
      if (x || y) probes.push_back(D(x, y));
  std::vector<UpdateFamily> fams{named_family("toy"), named_family("east"), named_family("modified_two_neighbour")};
  for (int i = 0; i < 40; ++i) fams.push_back(oracle::random_family(rng, 4, 3, 2));
  for (const auto& f : fams) {
    const auto p = stability_profile(f);
    for (const auto& g : lattice_symmetries()) {
      const auto q = stability_profile(transformed(f, g));
      CHECK(q.classification == p.classification);
      std::vector<Direction> mapped;
      for (const auto& d : p.isolated) mapped.push_back(g.apply(d));
      std::sort(mapped.begin(), mapped.end());
      CHECK(mapped == q.isolated);
      for (const auto& d : probes) CHECK(p.stable.contains(d) == q.stable.contains(g.apply(d)));
    }
  }
}
