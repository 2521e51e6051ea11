#include "bootperc/difficulty.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "bootperc/errors.hpp"
#include "bootperc/stability.hpp"
#include "strip.hpp"

namespace bootperc {

using detail::Sheared;

std::string to_string(const DifficultyValue& v) {
  return v.is_infinite() ? std::string("inf") : std::to_string(v.value());
}

std::string to_string(DifficultyStatus s) {
  switch (s) {
    case DifficultyStatus::Exact: return "Exact";
    case DifficultyStatus::UpperBoundOnly: return "UpperBoundOnly";
    case DifficultyStatus::Indeterminate: return "Indeterminate";
  }
  return "?";
}

namespace {

// Seeds of size k in (s, h) lexicographic order: the first at column 0,
// heights in [0, hb], consecutive columns at most g apart, and sorted heights
// at most gap_u apart.
class CandidateEnumerator {
 public:
  CandidateEnumerator(std::size_t k, std::int64_t hb, std::int64_t g, std::int64_t gap_u)
      : k_(k), hb_(hb), g_(g), gap_u_(gap_u), p_(k) {}

  bool next(std::vector<Sheared>& out) {
    for (;;) {
      if (!started_) {
        started_ = true;
        if (!fill(0)) return false;
      } else if (!step()) {
        return false;
      }
      if (heights_ok()) {
        out = p_;
        return true;
      }
    }
  }

 private:
  Sheared succ(const Sheared& q) const { return q.h < hb_ ? Sheared{q.h + 1, q.s} : Sheared{0, q.s + 1}; }
  bool valid(std::size_t i, const Sheared& q) const {
    if (q.h > hb_) return false;
    return i == 0 ? q.s == 0 : q.s <= p_[i - 1].s + g_;
  }
  static bool lex_less(const Sheared& a, const Sheared& b) { return a.s != b.s ? a.s < b.s : a.h < b.h; }
  bool fill(std::size_t j) {
    for (std::size_t t = j; t < k_; ++t) {
      const Sheared q = t == 0 ? Sheared{0, 0} : succ(p_[t - 1]);
      if (!valid(t, q)) return false;
      p_[t] = q;
    }
    return true;
  }
  bool step() {
    std::size_t i = k_;
    while (i > 0) {
      const std::size_t j = i - 1;
      const Sheared q = succ(p_[j]);
      if (!valid(j, q)) {
        --i;
        continue;
      }
      p_[j] = q;
      if (fill(j + 1)) return true;
    }
    return false;
  }
  bool heights_ok() const {
    if (gap_u_ >= hb_) return true;
    std::vector<std::int64_t> hs;
    for (const auto& q : p_) hs.push_back(q.h);
    std::sort(hs.begin(), hs.end());
    for (std::size_t i = 1; i < hs.size(); ++i)
      if (hs[i] - hs[i - 1] > gap_u_) return false;
    return true;
  }

  std::size_t k_;
  std::int64_t hb_, g_, gap_u_;
  std::vector<Sheared> p_;
  bool started_ = false;
};

struct Evaluation {
  ClosureStatus status;
  std::int64_t extension;
};

class DirectionSearch {
 public:
  DirectionSearch(const UpdateFamily& family, const Direction& u, const SearchBudget& budget)
      : family_(family), frame_(u), budget_(budget), rules_(detail::shear_rules(family, frame_)) {
    const std::int64_t d = family.diameter();
    max_k_ = budget.max_k > 0 ? budget.max_k : d;
    hb_ = budget.height_bound > 0 ? budget.height_bound : d;
    gap_u_ = budget.gap_u > 0 ? budget.gap_u : hb_;
    threads_ = budget.threads > 0 ? budget.threads : std::max(1u, std::thread::hardware_concurrency());
    for (std::int64_t top = 0; top <= hb_; ++top) models_.emplace_back(rules_, top);
  }

  DifficultyResult run() {
    DifficultyResult res;
    res.u = frame_.direction();
    auto& ex = res.exhaustion;
    ex.height_bound = hb_;
    ex.gap_u = gap_u_;
    ex.gap_perp_cap = budget_.gap_perp;
    ex.window_half_width = budget_.window_half_width;
    ex.step_budget = budget_.step_budget;
    ex.max_k = max_k_;
    ex.paper_bounds = budget_.use_paper_bounds;

    std::int64_t extension = 0;  // over certified-finite closures of all lower levels
    bool lower_complete = true;
    std::int64_t lower_bound = 1;
    std::optional<std::vector<Sheared>> hit;
    for (std::int64_t k = 1; k <= max_k_ && !hit; ++k) {
      LevelRecord level;
      level.k = k;
      const std::int64_t reach = std::max<std::int64_t>(rules_.reach, 1);
      std::int64_t g = saturating_add(saturating_mul(2, extension), saturating_mul(2, reach));
      if (!lower_complete || g > budget_.gap_perp) {
        level.gap_capped = true;
        g = std::min(g, budget_.gap_perp);
      }
      level.gap_perp = g;
      hit = run_level(level, g);
      extension = std::max(extension, level.max_extension);
      res.closures += level.candidates;
      const bool complete = level.complete();
      ex.levels.push_back(level);
      if (hit) break;
      if (lower_complete && complete) lower_bound = k + 1;
      lower_complete = lower_complete && complete;
      if (level.truncated) break;
    }
    res.lower_bound = lower_bound;
    if (hit) {
      auto w = normalize(*hit);
      const auto check = verify_witness(family_, frame_.direction(), w, budget_);
      if (!check.ok) throw StateError("search witness failed re-verification");
      res.witness = std::move(w);
      res.certificate = check.certificate;
      const auto size = static_cast<std::int64_t>(res.witness->size());
      res.value = DifficultyValue::finite(size);
      res.status = size == lower_bound ? DifficultyStatus::Exact : DifficultyStatus::UpperBoundOnly;
    } else {
      res.value = DifficultyValue::finite(lower_bound);
      res.status = DifficultyStatus::Indeterminate;
    }
    return res;
  }

 private:
  Evaluation evaluate(const std::vector<Sheared>& z) const {
    std::int64_t top = 0;
    for (const auto& p : z) top = std::max(top, p.h);
    const auto params = detail::half_plane_params(family_.diameter(), top, budget_);
    const auto run = detail::run_strip(models_[static_cast<std::size_t>(top)], z, params);
    std::int64_t ext = 0;
    if (run.grid.any())
      ext = std::max({std::int64_t{0}, run.seed_lo - run.grid.min_s(), run.grid.max_s() - run.seed_hi});
    return {run.status, ext};
  }

  // Evaluates level candidates in chunks; the hit with the smallest
  // enumeration index wins, so the result does not depend on scheduling.
  std::optional<std::vector<Sheared>> run_level(LevelRecord& level, std::int64_t g) {
    CandidateEnumerator en(static_cast<std::size_t>(level.k), hb_, g, gap_u_);
    constexpr std::size_t kChunk = 1024;
    std::vector<std::vector<Sheared>> chunk;
    std::vector<Evaluation> results;
    for (;;) {
      chunk.clear();
      std::vector<Sheared> z;
      while (chunk.size() < kChunk) {
        if (used_ >= budget_.candidate_budget) {
          level.truncated = true;
          break;
        }
        if (!en.next(z)) break;
        chunk.push_back(z);
        ++used_;
      }
      if (chunk.empty()) return std::nullopt;
      results.assign(chunk.size(), {ClosureStatus::BudgetExhausted, 0});
      std::atomic<std::size_t> cursor{0};
      std::atomic<std::size_t> best{chunk.size()};
      auto worker = [&] {
        for (;;) {
          const std::size_t i = cursor.fetch_add(1);
          if (i >= chunk.size() || i > best.load()) return;
          results[i] = evaluate(chunk[i]);
          if (results[i].status == ClosureStatus::CertifiedInfinite) {
            std::size_t cur = best.load();
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
          }
        }
      };
      const unsigned n = std::min<unsigned>(threads_, static_cast<unsigned>(chunk.size()));
      if (n <= 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
      }
      const std::size_t stop = std::min(best.load() + 1, chunk.size());
      for (std::size_t i = 0; i < stop; ++i) {
        ++level.candidates;
        switch (results[i].status) {
          case ClosureStatus::CertifiedFinite:
            ++level.finite;
            level.max_extension = std::max(level.max_extension, results[i].extension);
            break;
          case ClosureStatus::CertifiedInfinite: ++level.infinite; break;
          case ClosureStatus::BudgetExhausted: ++level.exhausted; break;
        }
      }
      if (best.load() < chunk.size()) return chunk[best.load()];
      if (level.truncated) return std::nullopt;
    }
  }

  // Lattice form, translated along l_u so that the lexicographically least
  // site on l_u (or the least site overall) is the origin.
  std::vector<LatticePoint> normalize(const std::vector<Sheared>& z) const {
    std::vector<LatticePoint> pts;
    for (const auto& p : z) pts.push_back(frame_.to_lattice(p));
    std::optional<LatticePoint> anchor;
    for (std::size_t i = 0; i < z.size(); ++i)
      if (z[i].h == 0 && (!anchor || pts[i] < *anchor)) anchor = pts[i];
    std::optional<std::int64_t> anchor_s;
    if (anchor) anchor_s = frame_.to_sheared(*anchor).s;
    else anchor_s = std::min_element(z.begin(), z.end())->s;
    const LatticePoint shift = frame_.to_lattice({0, *anchor_s});
    for (auto& p : pts) p = p - shift;
    std::sort(pts.begin(), pts.end());
    return pts;
  }

  const UpdateFamily& family_;
  detail::Frame frame_;
  SearchBudget budget_;
  detail::ShearedRules rules_;
  std::vector<detail::StripModel> models_;
  std::int64_t max_k_ = 0, hb_ = 0, gap_u_ = 0;
  unsigned threads_ = 1;
  std::uint64_t used_ = 0;
};

void require_critical(const StabilityProfile& profile) {
  if (profile.classification != Classification::Critical)
    throw StateError("difficulty is defined for critical families; this one is " +
                     to_string(profile.classification));
}

DifficultyResult difficulty_for(const UpdateFamily& family, const StabilityProfile& profile, const Direction& u,
                                const SearchBudget& budget) {
  DifficultyResult res;
  res.u = u;
  if (!profile.is_stable(u)) {
    res.value = DifficultyValue::zero();
    return res;
  }
  if (!profile.is_isolated(u)) {
    res.value = DifficultyValue::infinite();
    return res;
  }
  return DirectionSearch(family, u, budget).run();
}

}  // namespace

DifficultyResult direction_difficulty(const UpdateFamily& family, const Direction& u, const SearchBudget& budget) {
  const auto profile = stability_profile(family);
  require_critical(profile);
  return difficulty_for(family, profile, u, budget);
}

FamilyDifficultyResult family_difficulty(const UpdateFamily& family, const SearchBudget& budget) {
  const auto profile = stability_profile(family);
  require_critical(profile);
  FamilyDifficultyResult out;
  for (const auto& u : profile.isolated) out.directions.push_back(difficulty_for(family, profile, u, budget));

  auto lower_of = [](const DifficultyResult& r) {
    return r.status == DifficultyStatus::Exact ? r.value : DifficultyValue::finite(r.lower_bound);
  };
  std::optional<DifficultyValue> best_upper;
  std::optional<DifficultyValue> best_lower;
  for (const auto& c : critical_semicircle_candidates(profile)) {
    SemicircleBound sb{c, {}, DifficultyValue::zero(), DifficultyValue::zero()};
    for (const auto& r : out.directions) {
      if (!c.contains(r.u)) continue;
      sb.directions.push_back(r.u);
      sb.lower = std::max(sb.lower, lower_of(r));
      if (sb.upper) {
        if (r.witness)
          sb.upper = std::max(*sb.upper, r.value);
        else
          sb.upper.reset();
      }
    }
    if (!best_lower || sb.lower < *best_lower) best_lower = sb.lower;
    if (sb.upper && (!best_upper || *sb.upper < *best_upper)) {
      best_upper = sb.upper;
      out.semicircle = c;
    }
    out.semicircles.push_back(std::move(sb));
  }
  out.lower = best_lower.value_or(DifficultyValue::zero());
  if (best_upper) {
    out.value = *best_upper;
    out.status = *best_upper == out.lower ? DifficultyStatus::Exact : DifficultyStatus::UpperBoundOnly;
  } else {
    out.value = out.lower;
    out.status = DifficultyStatus::Indeterminate;
  }
  return out;
}

WitnessCheck verify_witness(const UpdateFamily& family, const Direction& u, std::span<const LatticePoint> seeds,
                            const SearchBudget& budget) {
  WitnessCheck out;
  if (seeds.empty()) return out;
  try {
    out.outcome = half_plane_closure(family, u, seeds, budget);
  } catch (const StateError&) {
    return out;
  } catch (const PreconditionError&) {
    return out;
  }
  if (out.outcome.status != ClosureStatus::CertifiedInfinite || !out.outcome.certificate) return out;
  out.certificate = out.outcome.certificate;
  out.ok = replay_certificate(family, u, seeds, *out.certificate, budget.step_budget);
  return out;
}

}  // namespace bootperc
