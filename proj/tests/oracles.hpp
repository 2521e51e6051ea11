#pragma once

// Reference implementations used only by the tests. They share no code with
// the library engines: plain per-site fixpoints over std::set.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "bootperc/family.hpp"
#include "bootperc/geometry.hpp"

namespace oracle {

using bootperc::LatticePoint;
using bootperc::UpdateFamily;

using Site = std::pair<std::int64_t, std::int64_t>;

inline bool fires(const UpdateFamily& f, const std::set<Site>& on, Site p, auto infected) {
  for (const auto& r : f.rules()) {
    bool ok = true;
    for (const auto& x : r.sites())
      if (!infected(on, Site{p.first + x.x, p.second + x.y})) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

struct Result {
  std::set<Site> infected;
  std::int64_t rounds = 0;
};

// Synchronous rounds over every site of [x0,x1] x [y0,y1]; outside is healthy
// unless `below_infected`, in which case every site with y < y0 is infected.
inline Result rectangle_closure(const UpdateFamily& f, std::int64_t x0, std::int64_t x1, std::int64_t y0,
                                std::int64_t y1, const std::vector<LatticePoint>& a,
                                bool below_infected = false) {
  Result res;
  for (const auto& p : a) res.infected.insert({p.x, p.y});
  auto infected = [&](const std::set<Site>& on, Site s) {
    if (below_infected && s.second < y0) return true;
    if (s.first < x0 || s.first > x1 || s.second < y0 || s.second > y1) return false;
    return on.count(s) > 0;
  };
  for (;;) {
    std::vector<Site> add;
    for (auto y = y0; y <= y1; ++y)
      for (auto x = x0; x <= x1; ++x)
        if (!res.infected.count({x, y}) && fires(f, res.infected, {x, y}, infected)) add.push_back({x, y});
    if (add.empty()) return res;
    ++res.rounds;
    res.infected.insert(add.begin(), add.end());
  }
}

inline Result torus_closure(const UpdateFamily& f, std::int64_t n, const std::vector<LatticePoint>& a) {
  Result res;
  auto wrap = [n](std::int64_t v) { return ((v % n) + n) % n; };
  for (const auto& p : a) res.infected.insert({wrap(p.x), wrap(p.y)});
  auto infected = [&](const std::set<Site>& on, Site s) { return on.count({wrap(s.first), wrap(s.second)}) > 0; };
  for (;;) {
    std::vector<Site> add;
    for (std::int64_t y = 0; y < n; ++y)
      for (std::int64_t x = 0; x < n; ++x)
        if (!res.infected.count({x, y}) && fires(f, res.infected, {x, y}, infected)) add.push_back({x, y});
    if (add.empty()) return res;
    ++res.rounds;
    res.infected.insert(add.begin(), add.end());
  }
}

// One-dimensional closure of A in [-radius, radius], outside healthy.
inline std::set<std::int64_t> line_closure(const std::vector<std::vector<std::int64_t>>& rules,
                                           const std::vector<std::int64_t>& a, std::int64_t radius) {
  std::vector<char> on(static_cast<std::size_t>(2 * radius + 1), 0);
  auto idx = [&](std::int64_t s) { return static_cast<std::size_t>(s + radius); };
  auto get = [&](std::int64_t s) { return s >= -radius && s <= radius && on[idx(s)]; };
  for (auto s : a) on[idx(s)] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::int64_t s = -radius; s <= radius; ++s) {
      if (on[idx(s)]) continue;
      for (const auto& r : rules) {
        bool ok = !r.empty();
        for (auto d : r)
          if (!get(s + d)) {
            ok = false;
            break;
          }
        if (ok) {
          on[idx(s)] = 1;
          changed = true;
          break;
        }
      }
    }
  }
  std::set<std::int64_t> out;
  for (std::int64_t s = -radius; s <= radius; ++s)
    if (on[idx(s)]) out.insert(s);
  return out;
}

// Growth test above H_(0,1) by long simulation in a wide box: seed Z sits
// near the centre; "infinite" when infection reaches within `edge` columns of
// the box side.
inline bool grows_above_axis(const UpdateFamily& f, const std::vector<LatticePoint>& z, std::int64_t half_width,
                             std::int64_t edge) {
  std::int64_t top = 0;
  for (const auto& p : z) top = std::max(top, p.y);
  const auto r = rectangle_closure(f, -half_width, half_width, 0, top, z, true);
  for (const auto& s : r.infected)
    if (std::abs(s.first) >= half_width - edge) return true;
  return false;
}

// Smallest k such that some k-subset of the box [0,bw) x [0,bh] grows, or -1.
inline int brute_force_difficulty_axis(const UpdateFamily& f, std::int64_t bw, std::int64_t bh, int max_k,
                                       std::int64_t half_width, std::int64_t edge) {
  std::vector<LatticePoint> box;
  for (std::int64_t y = 0; y <= bh; ++y)
    for (std::int64_t x = 0; x < bw; ++x) box.push_back({x, y});
  const std::size_t n = box.size();
  for (int k = 1; k <= max_k; ++k) {
    std::vector<char> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + k, 1);
    do {
      std::vector<LatticePoint> z;
      for (std::size_t i = 0; i < n; ++i)
        if (pick[i]) z.push_back(box[i]);
      if (grows_above_axis(f, z, half_width, edge)) return k;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return -1;
}

// Random family with sites in [-r, r]^2 \ {0}.
inline UpdateFamily random_family(std::mt19937_64& rng, int max_rules, int max_sites, std::int64_t r) {
  std::uniform_int_distribution<int> nr(1, max_rules), ns(1, max_sites);
  std::uniform_int_distribution<std::int64_t> c(-r, r);
  bootperc::RawFamily raw;
  const int rules = nr(rng);
  for (int i = 0; i < rules; ++i) {
    std::vector<LatticePoint> sites;
    const int k = ns(rng);
    while (static_cast<int>(sites.size()) < k) {
      LatticePoint p{c(rng), c(rng)};
      if (p.x == 0 && p.y == 0) continue;
      sites.push_back(p);
    }
    raw.push_back(sites);
  }
  return bootperc::make_family(raw);
}

inline std::vector<LatticePoint> random_subset(std::mt19937_64& rng, std::int64_t x0, std::int64_t x1,
                                               std::int64_t y0, std::int64_t y1, double p) {
  std::bernoulli_distribution b(p);
  std::vector<LatticePoint> out;
  for (auto y = y0; y <= y1; ++y)
    for (auto x = x0; x <= x1; ++x)
      if (b(rng)) out.push_back({x, y});
  return out;
}

inline std::vector<LatticePoint> to_points(const std::set<Site>& s) {
  std::vector<LatticePoint> out;
  for (const auto& [x, y] : s) out.push_back({x, y});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
