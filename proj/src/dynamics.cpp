#include "bootperc/dynamics.hpp"

#include <algorithm>
#include <set>

#include "bootperc/errors.hpp"
#include "bootperc/stability.hpp"
#include "strip.hpp"

namespace bootperc {

using detail::Frame;
using detail::Sheared;
using detail::StripModel;

std::string to_string(ClosureStatus s) {
  switch (s) {
    case ClosureStatus::CertifiedFinite: return "CertifiedFinite";
    case ClosureStatus::CertifiedInfinite: return "CertifiedInfinite";
    case ClosureStatus::BudgetExhausted: return "BudgetExhausted";
  }
  return "?";
}

bool InfectionState::contains(const LatticePoint& p) const {
  return std::binary_search(infected.begin(), infected.end(), p);
}

namespace {

class FiniteGrid {
 public:
  explicit FiniteGrid(const Region& region) {
    if (const auto* r = std::get_if<Rectangle>(&region)) {
      if (r->x1 < r->x0 || r->y1 < r->y0) throw PreconditionError("empty rectangle");
      x0_ = r->x0;
      y0_ = r->y0;
      w_ = r->x1 - r->x0 + 1;
      h_ = r->y1 - r->y0 + 1;
    } else if (const auto* t = std::get_if<Torus>(&region)) {
      if (t->n <= 0) throw PreconditionError("torus size must be positive");
      w_ = h_ = t->n;
      torus_ = true;
    } else {
      throw PreconditionError("closure_finite needs a Rectangle or Torus region");
    }
    cells_.assign(static_cast<std::size_t>(w_ * h_), 0);
  }

  // Cell index of p, or -1 outside a rectangle.
  std::int64_t index(LatticePoint p) const {
    std::int64_t x = p.x - x0_, y = p.y - y0_;
    if (torus_) {
      x = ((x % w_) + w_) % w_;
      y = ((y % h_) + h_) % h_;
    } else if (x < 0 || y < 0 || x >= w_ || y >= h_) {
      return -1;
    }
    return y * w_ + x;
  }
  LatticePoint point(std::int64_t i) const { return {x0_ + i % w_, y0_ + i / w_}; }
  bool infected(std::int64_t i) const { return i >= 0 && cells_[static_cast<std::size_t>(i)]; }
  void set(std::int64_t i) { cells_[static_cast<std::size_t>(i)] = 1; }
  std::int64_t size() const { return w_ * h_; }

 private:
  std::int64_t x0_ = 0, y0_ = 0, w_ = 0, h_ = 0;
  bool torus_ = false;
  std::vector<std::uint8_t> cells_;
};

}  // namespace

InfectionState closure_finite(const UpdateFamily& family, const Region& region,
                              std::span<const LatticePoint> seeds) {
  FiniteGrid g(region);
  std::vector<std::int64_t> frontier;
  for (const auto& p : seeds) {
    const auto i = g.index(p);
    if (i < 0) throw PreconditionError("seed " + to_string(p) + " lies outside the region");
    if (!g.infected(i)) {
      g.set(i);
      frontier.push_back(i);
    }
  }
  std::set<LatticePoint> offsets;
  for (const auto& r : family.rules())
    for (const auto& x : r.sites()) offsets.insert(x);

  std::int64_t generation = 0;
  std::vector<std::uint8_t> queued(static_cast<std::size_t>(g.size()), 0);
  while (!frontier.empty()) {
    std::vector<std::int64_t> candidates;
    for (auto i : frontier) {
      const auto p = g.point(i);
      for (const auto& x : offsets) {
        const auto q = g.index(p - x);
        if (q < 0 || g.infected(q) || queued[static_cast<std::size_t>(q)]) continue;
        queued[static_cast<std::size_t>(q)] = 1;
        candidates.push_back(q);
      }
    }
    std::vector<std::int64_t> next;
    for (auto q : candidates) {
      queued[static_cast<std::size_t>(q)] = 0;
      const auto p = g.point(q);
      for (const auto& r : family.rules()) {
        bool fires = true;
        for (const auto& x : r.sites())
          if (!g.infected(g.index(p + x))) {
            fires = false;
            break;
          }
        if (fires) {
          next.push_back(q);
          break;
        }
      }
    }
    for (auto q : next) g.set(q);
    if (!next.empty()) ++generation;
    frontier = std::move(next);
  }
  InfectionState out{region, {}, generation};
  for (std::int64_t i = 0; i < g.size(); ++i)
    if (g.infected(i)) out.infected.push_back(g.point(i));
  std::sort(out.infected.begin(), out.infected.end());
  return out;
}

OneDFamily induced_1d(const UpdateFamily& family, const Direction& u) {
  if (!stability_profile(family).is_stable(u))
    throw StateError("induced 1D family requested for unstable direction " + to_string(u));
  const Frame frame(u);
  std::set<std::vector<std::int64_t>> rules;
  for (const auto& r : family.rules()) {
    std::vector<std::int64_t> line;
    bool inside = true;
    for (const auto& x : r.sites()) {
      const auto p = frame.to_sheared(x);
      if (p.h > 0) {
        inside = false;
        break;
      }
      if (p.h == 0) line.push_back(p.s);
    }
    if (!inside || line.empty()) continue;
    std::sort(line.begin(), line.end());
    rules.insert(std::move(line));
  }
  OneDFamily out;
  out.rules.assign(rules.begin(), rules.end());
  for (const auto& r : out.rules)
    for (auto s : r) out.diameter = std::max(out.diameter, 2 * std::abs(s));
  out.spacing_squared = u.px() * u.px() + u.py() * u.py();
  return out;
}

namespace {

template <class ToPoint>
ClosureOutcome to_outcome(const detail::StripRun& run, Region region, ToPoint to_point) {
  ClosureOutcome out;
  out.status = run.status;
  out.state.region = std::move(region);
  out.state.generation = run.sweeps;
  for (const auto& p : run.grid.infected()) out.state.infected.push_back(to_point(p));
  std::sort(out.state.infected.begin(), out.state.infected.end());
  out.seed_lo = run.seed_lo;
  out.seed_hi = run.seed_hi;
  out.span_lo = run.grid.any() ? run.grid.min_s() : run.seed_lo;
  out.span_hi = run.grid.any() ? run.grid.max_s() : run.seed_hi;
  if (run.certificate) {
    const auto& c = *run.certificate;
    if (c.kind == detail::StripCertificate::Kind::TranslateRepetition) {
      TranslateRepetition t;
      t.offset = to_point(Sheared{0, c.shift});
      for (const auto& p : c.pattern) t.pattern.push_back(to_point(p));
      t.top_row = run.grid.top_row();
      t.replay_lo = c.replay_lo;
      t.replay_hi = c.replay_hi;
      t.source_lo = run.grid.lo();
      t.source_hi = run.grid.hi();
      out.certificate = std::move(t);
    } else {
      out.certificate = EscapeBeyondBound{to_point(c.escape_site), c.bound, run.grid.top_row(),
                                          run.grid.lo(), run.grid.hi()};
    }
  }
  return out;
}

// Shared certificate check in sheared coordinates. `required_bound` is the
// smallest escape bound accepted as proof of infinite growth.
template <class ToSheared>
bool replay_sheared(const detail::ShearedRules& rules, std::span<const Sheared> seeds, const Certificate& cert,
                    ToSheared to_sheared, std::int64_t required_bound, std::int64_t step_budget) {
  if (seeds.empty()) return false;
  std::int64_t top = 0, lo = seeds.front().s, hi = seeds.front().s;
  for (const auto& p : seeds) {
    if (p.h < 0) return false;
    top = std::max(top, p.h);
    lo = std::min(lo, p.s);
    hi = std::max(hi, p.s);
  }
  if (const auto* t = std::get_if<TranslateRepetition>(&cert)) {
    if (t->top_row < top || t->source_lo > lo || t->source_hi < hi) return false;
    const auto offset = to_sheared(t->offset);
    if (offset.h != 0 || offset.s == 0) return false;
    const StripModel model(rules, t->top_row);
    const auto closure = detail::window_closure(model, seeds, t->source_lo, t->source_hi, step_budget);
    detail::StripCertificate sc;
    sc.shift = offset.s;
    sc.replay_lo = t->replay_lo;
    sc.replay_hi = t->replay_hi;
    for (const auto& p : t->pattern) {
      const auto q = to_sheared(p);
      if (!closure.get(q.h, q.s) || q.h < 0) return false;
      sc.pattern.push_back(q);
    }
    return detail::replay_translate(model, sc, step_budget);
  }
  const auto& e = std::get<EscapeBeyondBound>(cert);
  if (e.top_row < top || e.bound < required_bound) return false;
  const auto site = to_sheared(e.site);
  if (site.s <= hi + e.bound && site.s >= lo - e.bound) return false;
  const StripModel model(rules, e.top_row);
  const auto closure = detail::window_closure(model, seeds, e.source_lo, e.source_hi, step_budget);
  return closure.get(site.h, site.s) && site.h >= 0;
}

}  // namespace

ClosureOutcome closure_1d(const OneDFamily& family, std::span<const std::int64_t> seeds, BoundMode mode,
                          const LineBudget& budget) {
  std::vector<Sheared> pts;
  for (auto s : seeds) pts.push_back({0, s});
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const StripModel model(detail::line_rules(family.rules), 0);
  detail::StripParams params;
  params.margin = std::max<std::int64_t>(family.diameter, 1);
  params.max_half_width = budget.max_half_width;
  params.step_budget = budget.step_budget;
  if (mode == BoundMode::PaperBound) params.escape_bound = paper_1d_bound(family.diameter);
  const auto run = detail::run_strip(model, pts, params);
  return to_outcome(run, LineWindow{run.grid.lo(), run.grid.hi()},
                    [](const Sheared& p) { return LatticePoint{p.s, 0}; });
}

ClosureOutcome half_plane_closure(const UpdateFamily& family, const Direction& u,
                                  std::span<const LatticePoint> seeds, const SearchBudget& budget) {
  if (!stability_profile(family).is_isolated(u))
    throw StateError("half-plane closure needs an isolated stable direction, got " + to_string(u));
  const Frame frame(u);
  std::vector<Sheared> pts;
  for (const auto& z : seeds) {
    const auto p = frame.to_sheared(z);
    if (p.h < 0) throw PreconditionError("seed " + to_string(z) + " lies in the half-plane H_u");
    pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::int64_t top = 0;
  for (const auto& p : pts) top = std::max(top, p.h);
  const StripModel model(detail::shear_rules(family, frame), top);
  const auto params = detail::half_plane_params(family.diameter(), top, budget);
  const auto run = detail::run_strip(model, pts, params);
  return to_outcome(run, HalfPlaneStrip{u, top, run.grid.lo(), run.grid.hi()},
                    [&](const Sheared& p) { return frame.to_lattice(p); });
}

bool replay_certificate(const UpdateFamily& family, const Direction& u, std::span<const LatticePoint> seeds,
                        const Certificate& cert, std::int64_t step_budget) {
  const Frame frame(u);
  std::vector<Sheared> pts;
  std::int64_t top = 0;
  for (const auto& z : seeds) {
    pts.push_back(frame.to_sheared(z));
    top = std::max(top, pts.back().h);
  }
  try {
    return replay_sheared(detail::shear_rules(family, frame), pts, cert,
                          [&](const LatticePoint& z) { return frame.to_sheared(z); },
                          paper_escape_bound(family.diameter(), top), step_budget);
  } catch (const StateError&) {
    return false;
  }
}

bool replay_certificate_1d(const OneDFamily& family, std::span<const std::int64_t> seeds,
                           const Certificate& cert, std::int64_t step_budget) {
  std::vector<Sheared> pts;
  for (auto s : seeds) pts.push_back({0, s});
  return replay_sheared(
      detail::line_rules(family.rules), pts, cert,
      [](const LatticePoint& z) { return Sheared{z.y == 0 ? 0 : -1, z.x}; }, paper_1d_bound(family.diameter),
      step_budget);
}

std::string dump_bitmap(const InfectionState& state) {
  std::string out;
  auto emit = [&](std::int64_t rows_hi, std::int64_t rows_lo, std::int64_t cols_lo, std::int64_t cols_hi,
                  auto is_set) {
    for (std::int64_t r = rows_hi; r >= rows_lo; --r) {
      for (std::int64_t c = cols_lo; c <= cols_hi; ++c) out += is_set(r, c) ? '#' : '.';
      out += '\n';
    }
  };
  std::visit(
      [&](const auto& reg) {
        using T = std::decay_t<decltype(reg)>;
        if constexpr (std::is_same_v<T, Rectangle>) {
          emit(reg.y1, reg.y0, reg.x0, reg.x1, [&](auto y, auto x) { return state.contains({x, y}); });
        } else if constexpr (std::is_same_v<T, Torus>) {
          emit(reg.n - 1, 0, 0, reg.n - 1, [&](auto y, auto x) { return state.contains({x, y}); });
        } else if constexpr (std::is_same_v<T, HalfPlaneStrip>) {
          const Frame frame(reg.u);
          emit(reg.height, 0, reg.s_lo, reg.s_hi,
               [&](auto h, auto s) { return state.contains(frame.to_lattice({h, s})); });
        } else {
          emit(0, 0, reg.lo, reg.hi, [&](auto, auto s) { return state.contains({s, 0}); });
        }
      },
      state.region);
  return out;
}

}  // namespace bootperc
