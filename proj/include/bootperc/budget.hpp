#pragma once

#include <cstdint>

namespace bootperc {

// Limits and envelope for half-plane closures and the witness search.
// Zero in a bound field means "derive from the family".
struct SearchBudget {
  std::int64_t max_k = 0;              // largest witness size tried; 0 -> D
  std::int64_t window_half_width = 1 << 13;  // cap on strip half-width (columns)
  std::int64_t height_bound = 0;       // max <z,u> of a candidate site; 0 -> D
  std::int64_t gap_u = 0;              // max height gap between sorted sites; 0 -> height_bound
  // Cap on the perpendicular gap between consecutive candidate sites. The
  // search derives the gap it needs from measured closure extents; if that
  // exceeds this cap the level is enumerated up to the cap and marked
  // incomplete.
  std::int64_t gap_perp = 4096;
  std::int64_t step_budget = 1 << 20;  // engine sweeps per closure
  std::uint64_t candidate_budget = 50'000'000;  // total closures in one search
  unsigned threads = 0;                // 0 -> hardware concurrency
  bool use_paper_bounds = false;

  // Budget whose envelope follows the decidability proof's explicit bounds for
  // a family of diameter D: height D^4, gaps D^4 and D^11 2^D, 5^D steps.
  // Values saturate instead of overflowing; only tiny D are practical.
  static SearchBudget paper(std::int64_t diameter);
};

// Saturating a^b in int64.
std::int64_t saturating_pow(std::int64_t base, unsigned exp);
std::int64_t saturating_mul(std::int64_t a, std::int64_t b);
std::int64_t saturating_add(std::int64_t a, std::int64_t b);

// Escape radius used with the explicit worst-case bounds: a finite closure of a seed
// set whose highest row is `top_row` stays within D + D^3 2^D + D^5 2^D top_row
// of the seed's perpendicular extent.
std::int64_t paper_escape_bound(std::int64_t diameter, std::int64_t top_row);

// One-dimensional distance bound D^2 2^D for a finite closure.
std::int64_t paper_1d_bound(std::int64_t diameter);

}  // namespace bootperc
