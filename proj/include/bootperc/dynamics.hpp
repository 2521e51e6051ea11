#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bootperc/budget.hpp"
#include "bootperc/family.hpp"
#include "bootperc/geometry.hpp"

namespace bootperc {

// Inclusive coordinate box; sites outside count as healthy.
struct Rectangle {
  std::int64_t x0, x1, y0, y1;
};

// (Z/nZ)^2.
struct Torus {
  std::int64_t n;
};

// Rows 0..height above l_u and columns [s_lo, s_hi] along l_u, in the sheared
// coordinates of u (see Frame). All rows below 0 are infected.
struct HalfPlaneStrip {
  Direction u;
  std::int64_t height;
  std::int64_t s_lo;
  std::int64_t s_hi;
};

// Window [lo, hi] of a one-dimensional process; site s is stored as (s, 0).
struct LineWindow {
  std::int64_t lo;
  std::int64_t hi;
};

using Region = std::variant<Rectangle, Torus, HalfPlaneStrip, LineWindow>;

struct InfectionState {
  Region region;
  std::vector<LatticePoint> infected;  // sorted
  std::int64_t generation = 0;

  bool contains(const LatticePoint& p) const;
};

enum class ClosureStatus { CertifiedFinite, CertifiedInfinite, BudgetExhausted };

std::string to_string(ClosureStatus s);

// The closure of `pattern` inside columns [replay_lo, replay_hi] of the strip
// with top row `top_row` contains pattern + offset; the closure of the seed
// computed in [source_lo, source_hi] contains the pattern. Columns are
// perpendicular coordinates along l_u.
struct TranslateRepetition {
  LatticePoint offset;
  std::vector<LatticePoint> pattern;
  std::int64_t top_row = 0;
  std::int64_t replay_lo = 0;
  std::int64_t replay_hi = 0;
  std::int64_t source_lo = 0;
  std::int64_t source_hi = 0;
};

// An infected site more than `bound` columns beyond the seed's extent.
struct EscapeBeyondBound {
  LatticePoint site;
  std::int64_t bound = 0;
  std::int64_t top_row = 0;
  std::int64_t source_lo = 0;
  std::int64_t source_hi = 0;
};

using Certificate = std::variant<TranslateRepetition, EscapeBeyondBound>;

struct ClosureOutcome {
  ClosureStatus status = ClosureStatus::CertifiedFinite;
  InfectionState state;  // final, or partial when the budget ran out
  std::optional<Certificate> certificate;
  // Column range of the seed and of everything infected (strip and line only).
  std::int64_t seed_lo = 0;
  std::int64_t seed_hi = 0;
  std::int64_t span_lo = 0;
  std::int64_t span_hi = 0;
};

// Least fixpoint on a Rectangle or Torus; generation counts synchronous
// rounds that changed something. Throws PreconditionError for other regions
// or seeds outside a rectangle.
InfectionState closure_finite(const UpdateFamily& family, const Region& region,
                              std::span<const LatticePoint> seeds);

struct OneDFamily {
  std::vector<std::vector<std::int64_t>> rules;  // sorted, deduplicated
  std::int64_t diameter = 0;                     // 2 * max |site|
  // Squared length of the lattice step along l_u: one unit of the induced
  // line is sqrt(spacing_squared) in the plane.
  std::int64_t spacing_squared = 1;
};

// Rules U with U inside H_u union l_u, restricted to l_u and written in the
// coordinate along l_u. Throws StateError if u is unstable.
OneDFamily induced_1d(const UpdateFamily& family, const Direction& u);

enum class BoundMode { Adaptive, PaperBound };

struct LineBudget {
  std::int64_t max_half_width = 1 << 16;
  std::int64_t step_budget = 1 << 20;
};

ClosureOutcome closure_1d(const OneDFamily& family, std::span<const std::int64_t> seeds, BoundMode mode,
                          const LineBudget& budget = {});

// [H_u union Z] minus H_u. Requires u to be an isolated stable direction
// (StateError otherwise) and every site of Z to satisfy <z,u> >= 0
// (PreconditionError otherwise).
ClosureOutcome half_plane_closure(const UpdateFamily& family, const Direction& u,
                                  std::span<const LatticePoint> seeds, const SearchBudget& budget);

// Independent re-check of a certificate against the seed it was issued for.
bool replay_certificate(const UpdateFamily& family, const Direction& u, std::span<const LatticePoint> seeds,
                        const Certificate& cert, std::int64_t step_budget = 1 << 20);
bool replay_certificate_1d(const OneDFamily& family, std::span<const std::int64_t> seeds,
                           const Certificate& cert, std::int64_t step_budget = 1 << 20);

// Text bitmap, '#' infected and '.' healthy, highest row first.
std::string dump_bitmap(const InfectionState& state);

}  // namespace bootperc
