#include "strip.hpp"

#include <algorithm>
#include <unordered_map>

#include "bootperc/errors.hpp"

namespace bootperc::detail {

namespace {

// Returns (a, b) with a*x + b*y = gcd(x, y) = 1 for primitive (x, y).
LatticePoint bezout(std::int64_t x, std::int64_t y) {
  std::int64_t old_r = x, r = y, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_s, old_t};
}

}  // namespace

Frame::Frame(const Direction& u) : u_(u), w_(bezout(u.px(), u.py())), v_{-u.py(), u.px()} {}

Sheared Frame::to_sheared(const LatticePoint& z) const {
  return {dot(z, u_.vector()), checked_sub(checked_mul(w_.x, z.y), checked_mul(w_.y, z.x))};
}

LatticePoint Frame::to_lattice(const Sheared& p) const {
  return {checked_add(checked_mul(p.h, w_.x), checked_mul(p.s, v_.x)),
          checked_add(checked_mul(p.h, w_.y), checked_mul(p.s, v_.y))};
}

ShearedRules shear_rules(const UpdateFamily& family, const Frame& frame) {
  ShearedRules out;
  for (const auto& r : family.rules()) {
    std::vector<Sheared> sites;
    for (const auto& x : r.sites()) {
      sites.push_back(frame.to_sheared(x));
      out.reach = std::max(out.reach, std::abs(sites.back().s));
    }
    out.rules.push_back(std::move(sites));
  }
  return out;
}

ShearedRules line_rules(const std::vector<std::vector<std::int64_t>>& rules) {
  ShearedRules out;
  for (const auto& r : rules) {
    std::vector<Sheared> sites;
    for (auto s : r) {
      sites.push_back({0, s});
      out.reach = std::max(out.reach, std::abs(s));
    }
    out.rules.push_back(std::move(sites));
  }
  return out;
}

StripModel::StripModel(const ShearedRules& rules, std::int64_t top_row)
    : top_(top_row), reach_(std::max<std::int64_t>(rules.reach, 1)) {
  if (top_row < 0) throw PreconditionError("strip top row must be non-negative");
  rows_.resize(static_cast<std::size_t>(top_row + 1));
  for (std::int64_t r = 0; r <= top_row; ++r) {
    for (const auto& rule : rules.rules) {
      std::vector<Sheared> kept;
      bool reaches_above = false;
      for (const auto& x : rule) {
        const std::int64_t h = r + x.h;
        if (h > top_row) {
          reaches_above = true;
          break;
        }
        if (h >= 0) kept.push_back(x);
      }
      if (reaches_above) continue;
      if (kept.empty())
        throw StateError("a rule lies inside the infected half-plane: direction is unstable");
      rows_[static_cast<std::size_t>(r)].push_back(std::move(kept));
    }
  }
}

StripGrid::StripGrid(std::int64_t top_row, std::int64_t lo, std::int64_t hi)
    : top_(top_row), lo_(lo), hi_(hi) {
  if (hi < lo) throw PreconditionError("empty strip window");
  cells_.assign(static_cast<std::size_t>((top_row + 1) * width()), 0);
}

bool StripGrid::set(std::int64_t h, std::int64_t s) {
  auto& c = cells_[static_cast<std::size_t>(h * width() + (s - lo_))];
  if (c) return false;
  c = 1;
  if (count_ == 0) {
    min_s_ = max_s_ = s;
  } else {
    min_s_ = std::min(min_s_, s);
    max_s_ = std::max(max_s_, s);
  }
  ++count_;
  return true;
}

bool StripGrid::column_empty(std::int64_t s) const {
  for (std::int64_t h = 0; h <= top_; ++h)
    if (get(h, s)) return false;
  return true;
}

void StripGrid::resize(std::int64_t new_lo, std::int64_t new_hi) {
  StripGrid g(top_, new_lo, new_hi);
  for (std::int64_t h = 0; h <= top_; ++h)
    for (std::int64_t s = std::max(lo_, new_lo); s <= std::min(hi_, new_hi); ++s)
      if (get(h, s)) g.set(h, s);
  *this = std::move(g);
}

std::vector<Sheared> StripGrid::infected() const {
  std::vector<Sheared> out;
  out.reserve(count_);
  for (std::int64_t h = 0; h <= top_; ++h)
    for (std::int64_t s = lo_; s <= hi_; ++s)
      if (get(h, s)) out.push_back({h, s});
  return out;
}

namespace {

bool column_pass(const StripModel& model, StripGrid& grid, std::int64_t s) {
  bool changed = false;
  for (std::int64_t h = 0; h <= model.top_row(); ++h) {
    if (grid.get(h, s)) continue;
    for (const auto& rule : model.row(h)) {
      bool fires = true;
      for (const auto& x : rule)
        if (!grid.get(h + x.h, s + x.s)) {
          fires = false;
          break;
        }
      if (fires) {
        grid.set(h, s);
        changed = true;
        break;
      }
    }
  }
  return changed;
}

}  // namespace

EngineResult run_engine(const StripModel& model, StripGrid& grid, std::int64_t step_budget) {
  const std::int64_t R = model.reach();
  std::int64_t sweeps = 0;
  bool forward = true;
  for (;;) {
    if (!grid.any()) return {true, sweeps};
    if (sweeps >= step_budget) return {false, sweeps};
    bool changed = false;
    if (forward) {
      for (std::int64_t s = std::max(grid.lo(), grid.min_s() - R);
           s <= std::min(grid.hi(), grid.max_s() + R); ++s)
        changed |= column_pass(model, grid, s);
    } else {
      for (std::int64_t s = std::min(grid.hi(), grid.max_s() + R);
           s >= std::max(grid.lo(), grid.min_s() - R); --s)
        changed |= column_pass(model, grid, s);
    }
    ++sweeps;
    forward = !forward;
    if (!changed) return {true, sweeps};
  }
}

StripGrid window_closure(const StripModel& model, std::span<const Sheared> seeds, std::int64_t lo,
                         std::int64_t hi, std::int64_t step_budget) {
  StripGrid g(model.top_row(), lo, hi);
  for (const auto& p : seeds)
    if (p.h >= 0 && p.h <= model.top_row() && p.s >= lo && p.s <= hi) g.set(p.h, p.s);
  run_engine(model, g, step_budget);
  return g;
}

bool replay_translate(const StripModel& model, const StripCertificate& cert, std::int64_t step_budget) {
  if (cert.kind != StripCertificate::Kind::TranslateRepetition || cert.pattern.empty() || cert.shift == 0)
    return false;
  for (const auto& p : cert.pattern)
    if (p.h < 0 || p.h > model.top_row() || p.s < cert.replay_lo || p.s > cert.replay_hi) return false;
  const auto g = window_closure(model, cert.pattern, cert.replay_lo, cert.replay_hi, step_budget);
  for (const auto& p : cert.pattern)
    if (!g.get(p.h, p.s + cert.shift)) return false;
  return true;
}

namespace {

// Searches for a nonempty block of `wd` columns strictly outside the seed
// range (direction dir = +1 to the right, -1 to the left) that reappears
// translated further out; confirms the repetition by a windowed replay.
std::optional<StripCertificate> find_repetition(const StripModel& model, const StripGrid& grid,
                                                std::int64_t seed_edge, int dir, std::int64_t step_budget) {
  const std::int64_t wd = model.reach();
  const std::int64_t start = seed_edge + dir;
  const std::int64_t far = dir > 0 ? grid.hi() : grid.lo();
  const std::int64_t n = (far - start) * dir + 1;  // columns available
  if (n < 2 * wd) return std::nullopt;
  auto col = [&](std::int64_t i) { return start + dir * i; };

  std::vector<std::uint64_t> code(static_cast<std::size_t>(n));
  std::vector<std::int64_t> filled(static_cast<std::size_t>(n + 1), 0);
  for (std::int64_t i = 0; i < n; ++i) {
    std::uint64_t c = 1469598103934665603ULL;
    bool any = false;
    for (std::int64_t h = 0; h <= grid.top_row(); ++h) {
      const bool b = grid.get(h, col(i));
      any |= b;
      c = (c ^ (b ? 0x9e3779b97f4a7c15ULL : 0x51ULL)) * 1099511628211ULL;
    }
    code[static_cast<std::size_t>(i)] = c;
    filled[static_cast<std::size_t>(i + 1)] = filled[static_cast<std::size_t>(i)] + (any ? 1 : 0);
  }
  const std::uint64_t base = 0x100000001b3ULL;
  std::uint64_t top_pow = 1;
  for (std::int64_t i = 1; i < wd; ++i) top_pow *= base;

  auto equal_blocks = [&](std::int64_t i, std::int64_t j) {
    for (std::int64_t d = 0; d < wd; ++d)
      for (std::int64_t h = 0; h <= grid.top_row(); ++h)
        if (grid.get(h, col(i + d)) != grid.get(h, col(j + d))) return false;
    return true;
  };

  std::unordered_map<std::uint64_t, std::vector<std::int64_t>> seen;
  int replays_left = 32;
  std::uint64_t hash = 0;
  for (std::int64_t i = 0; i < wd; ++i) hash = hash * base + code[static_cast<std::size_t>(i)];
  for (std::int64_t i = 0; i + wd <= n; ++i) {
    if (i > 0)
      hash = (hash - code[static_cast<std::size_t>(i - 1)] * top_pow) * base +
             code[static_cast<std::size_t>(i + wd - 1)];
    if (filled[static_cast<std::size_t>(i + wd)] == filled[static_cast<std::size_t>(i)]) continue;
    auto& bucket = seen[hash];
    for (std::int64_t i0 : bucket) {
      if (!equal_blocks(i0, i)) continue;
      StripCertificate cert;
      cert.kind = StripCertificate::Kind::TranslateRepetition;
      for (std::int64_t d = 0; d < wd; ++d)
        for (std::int64_t h = 0; h <= grid.top_row(); ++h)
          if (grid.get(h, col(i0 + d))) cert.pattern.push_back({h, col(i0 + d)});
      std::sort(cert.pattern.begin(), cert.pattern.end());
      cert.shift = col(i) - col(i0);
      if (dir > 0) {
        cert.replay_lo = col(i0);
        cert.replay_hi = grid.hi();
      } else {
        cert.replay_lo = grid.lo();
        cert.replay_hi = col(i0);
      }
      if (replay_translate(model, cert, step_budget)) return cert;
      if (--replays_left == 0) return std::nullopt;
    }
    bucket.push_back(i);
  }
  return std::nullopt;
}

}  // namespace

StripParams half_plane_params(std::int64_t diameter, std::int64_t top_row, const SearchBudget& budget) {
  StripParams params;
  params.margin = std::max<std::int64_t>(diameter, 1);
  params.max_half_width = budget.window_half_width;
  params.step_budget = budget.step_budget;
  if (budget.use_paper_bounds) {
    params.escape_bound = paper_escape_bound(diameter, top_row);
    params.translate_certificates = false;
  }
  return params;
}

StripRun run_strip(const StripModel& model, std::span<const Sheared> seeds, const StripParams& params) {
  StripRun run;
  if (seeds.empty()) {
    run.grid = StripGrid(model.top_row(), 0, 0);
    return run;
  }
  run.seed_lo = run.seed_hi = seeds.front().s;
  for (const auto& p : seeds) {
    if (p.h < 0 || p.h > model.top_row()) throw PreconditionError("seed outside the strip rows");
    run.seed_lo = std::min(run.seed_lo, p.s);
    run.seed_hi = std::max(run.seed_hi, p.s);
  }
  const std::int64_t m = std::max<std::int64_t>(params.margin, model.reach());
  const std::int64_t allowed_lo = run.seed_lo - std::max(params.max_half_width, 2 * m);
  const std::int64_t allowed_hi = run.seed_hi + std::max(params.max_half_width, 2 * m);
  run.grid = StripGrid(model.top_row(), run.seed_lo - 2 * m, run.seed_hi + 2 * m);
  for (const auto& p : seeds) run.grid.set(p.h, p.s);

  for (;;) {
    const auto er = run_engine(model, run.grid, params.step_budget - run.sweeps);
    run.sweeps += er.sweeps;
    if (!er.converged) {
      run.status = ClosureStatus::BudgetExhausted;
      return run;
    }
    const std::int64_t a = run.grid.min_s(), b = run.grid.max_s();
    if (params.escape_bound) {
      const std::int64_t bound = *params.escape_bound;
      std::optional<std::int64_t> col;
      if (b - run.seed_hi > bound)
        col = b;
      else if (run.seed_lo - a > bound)
        col = a;
      if (col) {
        StripCertificate cert;
        cert.kind = StripCertificate::Kind::Escape;
        cert.bound = bound;
        for (std::int64_t h = 0; h <= model.top_row(); ++h)
          if (run.grid.get(h, *col)) {
            cert.escape_site = {h, *col};
            break;
          }
        run.status = ClosureStatus::CertifiedInfinite;
        run.certificate = cert;
        return run;
      }
    }
    const bool right = b > run.grid.hi() - m;
    const bool left = a < run.grid.lo() + m;
    if (!right && !left) {
      run.status = ClosureStatus::CertifiedFinite;
      return run;
    }
    if (params.translate_certificates) {
      std::optional<StripCertificate> cert;
      if (right) cert = find_repetition(model, run.grid, run.seed_hi, +1, params.step_budget);
      if (!cert && left) cert = find_repetition(model, run.grid, run.seed_lo, -1, params.step_budget);
      if (cert) {
        run.status = ClosureStatus::CertifiedInfinite;
        run.certificate = std::move(cert);
        return run;
      }
    }
    if ((right && run.grid.hi() >= allowed_hi) || (left && run.grid.lo() <= allowed_lo)) {
      run.status = ClosureStatus::BudgetExhausted;
      return run;
    }
    const std::int64_t w = run.grid.width();
    const std::int64_t new_hi = right ? std::min(allowed_hi, run.grid.hi() + w) : run.grid.hi();
    const std::int64_t new_lo = left ? std::max(allowed_lo, run.grid.lo() - w) : run.grid.lo();
    run.grid.resize(new_lo, new_hi);
  }
}

}  // namespace bootperc::detail
