#include <algorithm>
#include <random>

#include "bootperc/errors.hpp"
#include "bootperc/dynamics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bootperc;

namespace {
Direction D(std::int64_t x, std::int64_t y) { return Direction::of(x, y); }

std::vector<LatticePoint> pts(std::initializer_list<LatticePoint> l) { return l; }

std::vector<std::vector<std::int64_t>> sorted_rules(OneDFamily f) {
  std::sort(f.rules.begin(), f.rules.end());
  return f.rules;
}

std::int64_t top_of(const std::vector<LatticePoint>& z, const Direction& u) {
  std::int64_t t = 0;
  for (const auto& p : z) t = std::max(t, dot(p, u.vector()));
  return t;
}
}  // namespace

TEST_CASE("finite closure examples") {
  const auto m2 = named_family("modified_two_neighbour");
  const Rectangle six{0, 5, 0, 5};
  CHECK(closure_finite(m2, six, std::vector<LatticePoint>{}).infected.empty());

  std::vector<LatticePoint> all;
  for (std::int64_t y = 0; y <= 5; ++y)
    for (std::int64_t x = 0; x <= 5; ++x) all.push_back({x, y});
  std::sort(all.begin(), all.end());
  const auto full = closure_finite(m2, six, all);
  CHECK(full.infected == all);
  CHECK(full.generation == 0);

  const auto diag = closure_finite(m2, six, pts({{0, 0}, {1, 1}}));
  CHECK(diag.infected == pts({{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  const auto ref = oracle::rectangle_closure(m2, 0, 5, 0, 5, pts({{0, 0}, {1, 1}}));
  CHECK(oracle::to_points(ref.infected) == diag.infected);
  CHECK(diag.generation == ref.rounds);

  CHECK_THROWS_AS(closure_finite(m2, six, pts({{6, 0}})), PreconditionError);
  CHECK_THROWS_AS(closure_finite(m2, LineWindow{0, 3}, pts({})), PreconditionError);
}

TEST_CASE("torus closure wraps") {
  const auto east = named_family("east");
  const auto r = closure_finite(east, Torus{5}, pts({{2, 3}}));
  CHECK(r.infected.size() == 25);
  const auto m2 = named_family("modified_two_neighbour");
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 30; ++rep) {
    const auto a = oracle::random_subset(rng, 0, 6, 0, 6, 0.2);
    const auto ref = oracle::torus_closure(m2, 7, a);
    const auto got = closure_finite(m2, Torus{7}, a);
    CHECK(oracle::to_points(ref.infected) == got.infected);
    CHECK(ref.rounds == got.generation);
  }
}

TEST_CASE("induced one-dimensional families") {
  const auto toy = induced_1d(named_family("toy"), D(1, 0));
  CHECK(sorted_rules(toy) == std::vector<std::vector<std::int64_t>>{{-2, -1}, {1}});
  for (std::int64_t k = 2; k <= 5; ++k) {
    const auto f = induced_1d(named_family("appendix_uk", k), D(0, 1));
    std::vector<std::vector<std::int64_t>> want{{-k, -k + 1}, {k - 1, k}};
    CHECK(sorted_rules(f) == want);
    CHECK(f.diameter == 2 * k);
  }
  // {(0,-1),(-1,0)} and {(1,0),(0,-1)} lie in H_u U l_u; the other two rules
  // reach above the line.
  CHECK(sorted_rules(induced_1d(named_family("modified_two_neighbour"), D(0, 1))) ==
        std::vector<std::vector<std::int64_t>>{{-1}, {1}});
  CHECK_THROWS_AS(induced_1d(named_family("east"), D(1, 0)), StateError);

  // The toy line process started from one site fills the line.
  const std::vector<std::int64_t> zero{0};
  CHECK(closure_1d(toy, zero, BoundMode::Adaptive).status == ClosureStatus::CertifiedInfinite);
  const auto line = oracle::line_closure(toy.rules, zero, 50);
  CHECK(line.size() == 101);
}

TEST_CASE("one-dimensional closure") {
  const OneDFamily succ{{{1}}, 2, 1};
  const std::vector<std::int64_t> zero{0}, pair{0, 1};
  const auto inf = closure_1d(succ, zero, BoundMode::Adaptive);
  CHECK(inf.status == ClosureStatus::CertifiedInfinite);
  REQUIRE(inf.certificate);
  CHECK(replay_certificate_1d(succ, zero, *inf.certificate));

  const auto u2 = induced_1d(named_family("appendix_uk", 2), D(0, 1));
  const auto fin = closure_1d(u2, zero, BoundMode::Adaptive);
  CHECK(fin.status == ClosureStatus::CertifiedFinite);
  CHECK(fin.state.infected == pts({{0, 0}}));

  for (auto mode : {BoundMode::Adaptive, BoundMode::PaperBound}) {
    const auto grow = closure_1d(u2, pair, mode);
    CHECK(grow.status == ClosureStatus::CertifiedInfinite);
    REQUIRE(grow.certificate);
    CHECK(replay_certificate_1d(u2, pair, *grow.certificate));
  }

  // A replay against a different seed is rejected.
  const auto grow = closure_1d(u2, pair, BoundMode::Adaptive);
  CHECK_FALSE(replay_certificate_1d(u2, zero, *grow.certificate));
}

TEST_CASE("one-dimensional closure matches the line oracle") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> c(-3, 3);
  std::uniform_int_distribution<int> nr(1, 3), ns(1, 3);
  int finite = 0, infinite = 0;
  for (int rep = 0; rep < 300; ++rep) {
    OneDFamily f;
    const int r = nr(rng);
    for (int i = 0; i < r; ++i) {
      std::vector<std::int64_t> rule;
      const int k = ns(rng);
      while (static_cast<int>(rule.size()) < k) {
        const auto s = c(rng);
        if (s) rule.push_back(s);
      }
      std::sort(rule.begin(), rule.end());
      rule.erase(std::unique(rule.begin(), rule.end()), rule.end());
      f.rules.push_back(rule);
      for (auto s : rule) f.diameter = std::max(f.diameter, 2 * std::abs(s));
    }
    std::sort(f.rules.begin(), f.rules.end());
    f.rules.erase(std::unique(f.rules.begin(), f.rules.end()), f.rules.end());
    std::vector<std::int64_t> a;
    for (std::int64_t s = 0; s < 6; ++s)
      if (rng() % 3 == 0) a.push_back(s);
    const auto out = closure_1d(f, a, BoundMode::Adaptive);
    REQUIRE(out.status != ClosureStatus::BudgetExhausted);
    const auto ref = oracle::line_closure(f.rules, a, 400);
    if (out.status == ClosureStatus::CertifiedFinite) {
      ++finite;
      std::vector<LatticePoint> want;
      for (auto s : ref) want.push_back({s, 0});
      CHECK(out.state.infected == want);
    } else {
      ++infinite;
      CHECK((*ref.begin() < -390 || *ref.rbegin() > 390));
      REQUIRE(out.certificate);
      CHECK(replay_certificate_1d(f, a, *out.certificate));
    }
  }
  CHECK(finite > 0);
  CHECK(infinite > 0);
}

TEST_CASE("half-plane closure examples") {
  const auto toy = named_family("toy");
  SearchBudget b;
  const auto seed = pts({{0, 0}});
  const auto east_dir = half_plane_closure(toy, D(1, 0), seed, b);
  CHECK(east_dir.status == ClosureStatus::CertifiedInfinite);
  REQUIRE(east_dir.certificate);
  CHECK(replay_certificate(toy, D(1, 0), seed, *east_dir.certificate));

  const auto north = half_plane_closure(toy, D(0, 1), seed, b);
  CHECK(north.status == ClosureStatus::CertifiedFinite);
  CHECK(north.state.infected == seed);

  const auto pair = pts({{0, 0}, {1, 0}});
  const auto grow = half_plane_closure(toy, D(0, 1), pair, b);
  CHECK(grow.status == ClosureStatus::CertifiedInfinite);
  REQUIRE(grow.certificate);
  CHECK(replay_certificate(toy, D(0, 1), pair, *grow.certificate));
  CHECK_FALSE(replay_certificate(toy, D(0, 1), seed, *grow.certificate));

  for (const auto& u : {D(1, 0), D(0, 1)}) {
    const auto empty = half_plane_closure(toy, u, std::vector<LatticePoint>{}, b);
    CHECK(empty.status == ClosureStatus::CertifiedFinite);
    CHECK(empty.state.infected.empty());
  }

  CHECK_THROWS_AS(half_plane_closure(toy, D(-1, -1), seed, b), StateError);
  CHECK_THROWS_AS(half_plane_closure(toy, D(1, 1), seed, b), StateError);
  CHECK_THROWS_AS(half_plane_closure(toy, D(0, 1), pts({{0, -1}}), b), PreconditionError);
}

TEST_CASE("half-plane closure matches a wide-box oracle along (0,1)") {
  // Sites above the top row of Z stay healthy, so a rectangle with the rows
  // below y = 0 infected reproduces the strip exactly until the edges matter.
  std::vector<UpdateFamily> fams{named_family("toy"), named_family("modified_two_neighbour"),
                                 named_family("appendix_uk", 2), named_family("appendix_uk", 3)};
  std::mt19937_64 rng(23);
  SearchBudget b;
  for (const auto& f : fams) {
    for (int rep = 0; rep < 40; ++rep) {
      auto z = oracle::random_subset(rng, 0, 4, 0, 1, 0.3);
      const auto out = half_plane_closure(f, D(0, 1), z, b);
      REQUIRE(out.status != ClosureStatus::BudgetExhausted);
      const bool grows = oracle::grows_above_axis(f, z, 60, 8);
      CHECK_MESSAGE((out.status == ClosureStatus::CertifiedInfinite) == grows, serialize(f));
      const auto top = top_of(z, D(0, 1));
      for (const auto& p : out.state.infected) CHECK(p.y <= top);
      if (out.status == ClosureStatus::CertifiedFinite) {
        std::int64_t y1 = top;
        const auto ref = oracle::rectangle_closure(f, -60, 60, 0, y1, z, true);
        CHECK(oracle::to_points(ref.infected) == out.state.infected);
      } else {
        REQUIRE(out.certificate);
        CHECK(replay_certificate(f, D(0, 1), z, *out.certificate));
      }
    }
  }
}

TEST_CASE("half-plane closure in a sheared frame") {
  // g = [[1,0],[1,1]] maps the (0,1) strip onto the (-1,1) strip.
  const LatticeSymmetry g{1, 0, 1, 1};
  const auto toy = named_family("toy");
  const auto f = transformed(toy, g);
  const auto u = D(-1, 1);
  SearchBudget b;
  const auto one = half_plane_closure(f, u, pts({{0, 0}}), b);
  CHECK(one.status == ClosureStatus::CertifiedFinite);
  const auto z = pts({{0, 0}, {1, 1}});
  const auto two = half_plane_closure(f, u, z, b);
  CHECK(two.status == ClosureStatus::CertifiedInfinite);
  REQUIRE(two.certificate);
  CHECK(replay_certificate(f, u, z, *two.certificate));

  std::mt19937_64 rng(31);
  for (const auto& base : {toy, named_family("appendix_uk", 3)}) {
    const auto fb = transformed(base, g);
    for (int rep = 0; rep < 30; ++rep) {
      const auto z0 = oracle::random_subset(rng, 0, 5, 0, 1, 0.3);
      std::vector<LatticePoint> zg;
      for (const auto& p : z0) zg.push_back(g.apply(p));
      const auto out = half_plane_closure(fb, u, zg, b);
      REQUIRE(out.status != ClosureStatus::BudgetExhausted);
      CHECK((out.status == ClosureStatus::CertifiedInfinite) == oracle::grows_above_axis(base, z0, 60, 8));
      if (out.status == ClosureStatus::CertifiedFinite) {
        const auto ref = oracle::rectangle_closure(base, -60, 60, 0, top_of(z0, D(0, 1)), z0, true);
        std::vector<LatticePoint> want;
        for (const auto& p : oracle::to_points(ref.infected)) want.push_back(g.apply(p));
        std::sort(want.begin(), want.end());
        CHECK(want == out.state.infected);
      } else {
        REQUIRE(out.certificate);
        CHECK(replay_certificate(fb, u, zg, *out.certificate));
      }
    }
  }
}

TEST_CASE("bitmap dump") {
  const auto m2 = named_family("modified_two_neighbour");
  const auto st = closure_finite(m2, Rectangle{0, 3, 0, 2}, pts({{0, 0}, {1, 1}}));
  CHECK(dump_bitmap(st) == "....\n##..\n##..\n");
  const auto line = closure_1d(induced_1d(named_family("appendix_uk", 2), D(0, 1)), std::vector<std::int64_t>{0},
                               BoundMode::Adaptive);
  const auto text = dump_bitmap(line.state);
  CHECK(std::count(text.begin(), text.end(), '#') == 1);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
}
