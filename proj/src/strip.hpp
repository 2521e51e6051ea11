#pragma once

// Closure engine for the strip above an infected half-plane. Sites are
// addressed in sheared coordinates (h, s): h = <z,u> is the row above the
// line l_u and s is the position along the primitive vector of l_u. Every row
// h < 0 is permanently infected; rows above the top row are never infected
// (stability of u), so the strip is a finite stack of bi-infinite rows, of
// which a window [lo, hi] of columns is materialized.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bootperc/budget.hpp"
#include "bootperc/dynamics.hpp"
#include "bootperc/family.hpp"
#include "bootperc/geometry.hpp"

namespace bootperc::detail {

struct Sheared {
  std::int64_t h{0};
  std::int64_t s{0};

  friend auto operator<=>(const Sheared&, const Sheared&) = default;
};

class Frame {
 public:
  explicit Frame(const Direction& u);

  const Direction& direction() const noexcept { return u_; }
  // Unit step across rows (<up, u> = 1) and along l_u.
  const LatticePoint& up() const noexcept { return w_; }
  const LatticePoint& along() const noexcept { return v_; }

  Sheared to_sheared(const LatticePoint& z) const;
  LatticePoint to_lattice(const Sheared& p) const;

 private:
  Direction u_;
  LatticePoint w_;
  LatticePoint v_;
};

struct ShearedRules {
  std::vector<std::vector<Sheared>> rules;
  std::int64_t reach = 0;  // max |s| over all rule sites
};

ShearedRules shear_rules(const UpdateFamily& family, const Frame& frame);
ShearedRules line_rules(const std::vector<std::vector<std::int64_t>>& rules);

// Rules specialised to each row of a strip with a fixed top row: sites that
// fall in the infected half-plane are dropped, rules reaching above the top
// row are dropped for that row.
class StripModel {
 public:
  StripModel(const ShearedRules& rules, std::int64_t top_row);

  std::int64_t top_row() const noexcept { return top_; }
  std::int64_t reach() const noexcept { return reach_; }
  const std::vector<std::vector<Sheared>>& row(std::int64_t h) const { return rows_[h]; }

 private:
  std::int64_t top_;
  std::int64_t reach_;
  std::vector<std::vector<std::vector<Sheared>>> rows_;
};

class StripGrid {
 public:
  StripGrid() = default;
  StripGrid(std::int64_t top_row, std::int64_t lo, std::int64_t hi);

  std::int64_t top_row() const noexcept { return top_; }
  std::int64_t lo() const noexcept { return lo_; }
  std::int64_t hi() const noexcept { return hi_; }
  std::int64_t width() const noexcept { return hi_ - lo_ + 1; }

  bool get(std::int64_t h, std::int64_t s) const {
    if (h < 0) return true;
    if (h > top_ || s < lo_ || s > hi_) return false;
    return cells_[static_cast<std::size_t>(h * width() + (s - lo_))] != 0;
  }
  // Returns true if the site was newly infected. The site must be in the window.
  bool set(std::int64_t h, std::int64_t s);

  bool any() const noexcept { return count_ > 0; }
  std::size_t count() const noexcept { return count_; }
  std::int64_t min_s() const noexcept { return min_s_; }
  std::int64_t max_s() const noexcept { return max_s_; }
  bool column_empty(std::int64_t s) const;

  void resize(std::int64_t new_lo, std::int64_t new_hi);
  std::vector<Sheared> infected() const;

 private:
  std::int64_t top_ = 0;
  std::int64_t lo_ = 0;
  std::int64_t hi_ = -1;
  std::vector<std::uint8_t> cells_;
  std::size_t count_ = 0;
  std::int64_t min_s_ = 0;
  std::int64_t max_s_ = 0;
};

struct EngineResult {
  bool converged;
  std::int64_t sweeps;
};

// Chaotic (in-place, alternating direction) iteration to the least fixpoint
// inside the window. One sweep does at least the work of one synchronous round.
EngineResult run_engine(const StripModel& model, StripGrid& grid, std::int64_t step_budget);

struct StripCertificate {
  enum class Kind { TranslateRepetition, Escape };
  Kind kind = Kind::TranslateRepetition;
  // TranslateRepetition: the closure of `pattern` inside the replay window
  // contains pattern shifted by `shift` columns.
  std::vector<Sheared> pattern;
  std::int64_t shift = 0;
  std::int64_t replay_lo = 0;
  std::int64_t replay_hi = 0;
  // Escape: an infected site farther than `bound` columns from the seeds.
  Sheared escape_site;
  std::int64_t bound = 0;
};

struct StripParams {
  std::int64_t margin = 1;
  std::int64_t max_half_width = 1 << 13;
  std::int64_t step_budget = 1 << 20;
  std::optional<std::int64_t> escape_bound;
  bool translate_certificates = true;
};

struct StripRun {
  ClosureStatus status = ClosureStatus::CertifiedFinite;
  StripGrid grid;
  std::int64_t sweeps = 0;
  std::optional<StripCertificate> certificate;
  std::int64_t seed_lo = 0;
  std::int64_t seed_hi = 0;
};

// Parameters of a half-plane closure for a family of diameter D.
StripParams half_plane_params(std::int64_t diameter, std::int64_t top_row, const SearchBudget& budget);

// Seeds must lie in rows [0, model.top_row()].
StripRun run_strip(const StripModel& model, std::span<const Sheared> seeds, const StripParams& params);

// Windowed closure of `seeds` in columns [lo, hi]; a subset of the true closure.
StripGrid window_closure(const StripModel& model, std::span<const Sheared> seeds, std::int64_t lo,
                         std::int64_t hi, std::int64_t step_budget);

bool replay_translate(const StripModel& model, const StripCertificate& cert, std::int64_t step_budget);

}  // namespace bootperc::detail
