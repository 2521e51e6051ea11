#include <algorithm>
#include <set>

#include "bootperc/errors.hpp"
#include "bootperc/reduction.hpp"
#include "bootperc/stability.hpp"
#include "doctest.h"

using namespace bootperc;

namespace {
Direction D(std::int64_t x, std::int64_t y) { return Direction::of(x, y); }

const SetCoverInstance kPairs{4, {{1, 2}, {3, 4}, {1, 3}, {2, 4}}};
const SetCoverInstance kSingletons{4, {{1}, {2}, {3}, {4}}};
const SetCoverInstance kWhole{4, {{1, 2, 3, 4}, {1}, {2}, {3}}};
const SetCoverInstance kFive{5, {{1, 2}, {3, 4}, {5}, {1, 3, 5}, {2, 4}}};
}  // namespace

TEST_CASE("instance validation") {
  CHECK(validation_issues(kPairs).empty());
  CHECK_FALSE(validation_issues(SetCoverInstance{3, {{1}, {2}, {3}, {1}}}).empty());
  CHECK_FALSE(validation_issues(SetCoverInstance{4, {{1, 2, 3, 4}, {1}, {2}}}).empty());
  CHECK_FALSE(validation_issues(SetCoverInstance{4, {{1, 2}, {3}, {2}, {}}}).empty());
  CHECK_FALSE(validation_issues(SetCoverInstance{4, {{1, 2}, {3}, {2}, {5}}}).empty());
  CHECK_FALSE(validation_issues(SetCoverInstance{5, {{1, 2}, {3}, {2}, {4}}}).empty());
  CHECK_THROWS_AS(reduce(SetCoverInstance{4, {{1, 2}, {3, 4}}}), ValidationError);
}

TEST_CASE("set cover text format") {
  const auto inst = parse_set_cover("# pairs\n4\n1 2\n3 4\n\n1 3  # third\n4 2 2\n");
  CHECK(inst.universe == 4);
  CHECK(inst.sets == kPairs.sets);
  CHECK(parse_set_cover(serialize(inst)).sets == inst.sets);
  CHECK_THROWS_AS(parse_set_cover("4 5\n1\n"), ParseError);
  CHECK_THROWS_AS(parse_set_cover("4\n1 x\n"), ParseError);
  CHECK_THROWS_AS(parse_set_cover("# empty\n"), ParseError);
}

TEST_CASE("brute-force set cover") {
  CHECK(solve_set_cover_bruteforce(kPairs) == 2);
  CHECK(solve_set_cover_bruteforce(kWhole) == 1);
  CHECK(solve_set_cover_bruteforce(kSingletons) == 4);
  CHECK(solve_set_cover_bruteforce(kFive) == 2);
  CHECK(optimal_cover(kPairs) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("predicted difficulty") {
  CHECK(predicted_alpha(kPairs) == 22);
  CHECK(predicted_alpha(kSingletons) == 24);
  for (const auto& inst : {kPairs, kSingletons, kWhole, kFive}) {
    const auto s = static_cast<std::int64_t>(inst.sets.size());
    CHECK(predicted_alpha(inst) >= s * s + s + 1);
  }
}

TEST_CASE("reduction size") {
  const auto f = reduce(kPairs);
  CHECK(f.size() == 130);
  for (const auto& inst : {kPairs, kSingletons, kWhole, kFive}) {
    const auto fam = reduce(inst);
    const auto c = reduction_counts(inst);
    CHECK(fam.size() == c.rules);
    CHECK(fam.total_sites() == c.total_sites);
    std::uint64_t sum = 0;
    for (const auto& s : inst.sets) sum += s.size();
    const std::uint64_t S = inst.sets.size(), N = static_cast<std::uint64_t>(inst.universe);
    CHECK(c.prose_rules == S * S * S * sum);
    CHECK(c.total_sites == 4 * N * S * S + S * S * sum * (N * S * S + S * S + S + 1));
    for (const auto& r : fam.rules()) CHECK((r.size() == c.u0_size || r.size() == c.uijk_size));
  }
}

TEST_CASE("reduced family is critical with one isolated stable direction") {
  for (const auto& inst : {kPairs, kSingletons, kFive}) {
    const auto fam = reduce(inst);
    const auto p = stability_profile(fam);
    CHECK(p.classification == Classification::Critical);
    CHECK(p.isolated == std::vector<Direction>{D(0, 1)});
    // The remaining stable set sits in the closed lower half-circle.
    const auto lower = ArcSet::of(Arc::closed(D(-1, 0), D(1, 0)));
    CHECK(p.non_isolated.intersect(lower) == p.non_isolated);
    // U_0 and U_1 contribute the two upper quarter arcs.
    for (const auto& r : fam.rules())
      if (r.size() == reduction_counts(inst).u0_size) {
        const auto a = unstable_arc_of_rule(r.sites());
        CHECK((a == Arc::open(D(1, 0), D(0, 1)) || a == Arc::open(D(0, 1), D(-1, 0))));
      }
  }
}

TEST_CASE("upper bound witness and non-cover control") {
  for (const auto& inst : {kPairs, kSingletons}) {
    const auto up = verify_reduction_upper_bound(inst);
    CHECK(up.verified);
    CHECK(up.status == ClosureStatus::CertifiedInfinite);
    CHECK(static_cast<std::int64_t>(up.seed.size()) == predicted_alpha(inst));
    const auto ctl = run_reduction_control(inst, reduction_budget(inst));
    CHECK_FALSE(ctl.verified);
    CHECK(ctl.status == ClosureStatus::CertifiedFinite);
  }
  CHECK(verify_reduction_upper_bound(kSingletons).seed.size() == 24);

  // Any superset of a cover still works.
  const auto fam = reduce(kPairs);
  std::vector<std::size_t> all{0, 1, 2, 3};
  const auto z = reduction_seed(kPairs, all);
  CHECK(z.size() == 24);
  auto b = reduction_budget(kPairs);
  const auto out = half_plane_closure(fam, D(0, 1), z, b);
  CHECK(out.status == ClosureStatus::CertifiedInfinite);
}

TEST_CASE("W rigidity") {
  CHECK(check_w_rigidity(4));
  CHECK(check_w_rigidity(5));
  CHECK(check_w_rigidity(kPairs));
  const auto w = w_shape(4);
  CHECK(w.size() == 20);
  CHECK(std::count_if(w.begin(), w.end(), [](const LatticePoint& p) { return p.y == 1; }) == 4);
}
