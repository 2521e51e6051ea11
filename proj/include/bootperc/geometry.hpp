#pragma once

// Exact direction geometry on the unit circle. A direction is a primitive
// integer vector; arcs and arc sets are built from such endpoints, so every
// comparison is an integer sign test.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bootperc/errors.hpp"

namespace bootperc {

// Largest coordinate magnitude accepted anywhere in the library. Products of
// two coordinates then fit comfortably in 64 bits, and angle comparisons are
// carried out in 128-bit arithmetic.
inline constexpr std::int64_t kCoordinateLimit = std::int64_t{1} << 30;

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

struct LatticePoint {
  std::int64_t x{0};
  std::int64_t y{0};

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

LatticePoint operator+(const LatticePoint& a, const LatticePoint& b);
LatticePoint operator-(const LatticePoint& a, const LatticePoint& b);
LatticePoint operator-(const LatticePoint& a);
LatticePoint operator*(std::int64_t k, const LatticePoint& a);

std::int64_t dot(const LatticePoint& a, const LatticePoint& b);
std::int64_t cross(const LatticePoint& a, const LatticePoint& b);
std::int64_t linf_norm(const LatticePoint& a);

std::string to_string(const LatticePoint& p);
std::ostream& operator<<(std::ostream& os, const LatticePoint& p);

// A rational direction: the primitive integer vector of a ray from the origin.
class Direction {
 public:
  // Reduces (x, y) by gcd. Throws PreconditionError on (0, 0).
  static Direction of(std::int64_t x, std::int64_t y);
  static Direction of(const LatticePoint& p) { return of(p.x, p.y); }

  std::int64_t px() const noexcept { return px_; }
  std::int64_t py() const noexcept { return py_; }
  LatticePoint vector() const noexcept { return {px_, py_}; }

  Direction antipode() const noexcept { return Direction(-px_, -py_); }
  Direction rotated_ccw() const noexcept { return Direction(-py_, px_); }
  Direction rotated_cw() const noexcept { return Direction(py_, -px_); }

  friend bool operator==(const Direction&, const Direction&) = default;
  // Counterclockwise order anchored at (1,0).
  friend std::strong_ordering operator<=>(const Direction& a,
                                          const Direction& b);

 private:
  Direction(std::int64_t x, std::int64_t y) : px_(x), py_(y) {}
  std::int64_t px_;
  std::int64_t py_;
};

std::strong_ordering ccw_compare(const Direction& a, const Direction& b);

// Order of a and b along the counterclockwise sweep starting at `anchor`
// (the anchor itself comes first).
std::strong_ordering ccw_compare_from(const Direction& anchor,
                                      const Direction& a, const Direction& b);

// True iff d lies strictly inside the counterclockwise sweep lo -> hi.
// When lo == hi the sweep is the full turn minus lo.
bool strictly_between(const Direction& lo, const Direction& d,
                      const Direction& hi);

std::string to_string(const Direction& d);
std::ostream& operator<<(std::ostream& os, const Direction& d);

enum class Orientation { CounterClockwise, Clockwise };

// A connected subset of the circle: the directions swept counterclockwise
// from lo to hi, with independently open or closed ends.
class Arc {
 public:
  enum class Kind { Empty, Full, Point, Punctured, Proper };

  static Arc empty() { return Arc(Kind::Empty); }
  static Arc full() { return Arc(Kind::Full); }
  static Arc point(const Direction& d);
  // Full circle minus one direction.
  static Arc punctured(const Direction& d);
  // lo == hi normalizes to a point if both ends are closed, to empty otherwise.
  static Arc make(const Direction& lo, bool lo_open, const Direction& hi,
                  bool hi_open);
  static Arc open(const Direction& lo, const Direction& hi) {
    return make(lo, true, hi, true);
  }
  static Arc closed(const Direction& lo, const Direction& hi) {
    return make(lo, false, hi, false);
  }

  Kind kind() const noexcept { return kind_; }
  bool is_empty() const noexcept { return kind_ == Kind::Empty; }
  // Only meaningful for Point, Punctured and Proper arcs.
  const Direction& lo() const noexcept { return lo_; }
  const Direction& hi() const noexcept { return hi_; }
  bool lo_open() const noexcept { return lo_open_; }
  bool hi_open() const noexcept { return hi_open_; }

  bool contains(const Direction& d) const;

  friend bool operator==(const Arc&, const Arc&) = default;

 private:
  explicit Arc(Kind k) : kind_(k) {}

  Kind kind_;
  Direction lo_ = Direction::of(1, 0);
  Direction hi_ = Direction::of(1, 0);
  bool lo_open_ = false;
  bool hi_open_ = false;
};

std::string to_string(const Arc& a);
std::ostream& operator<<(std::ostream& os, const Arc& a);

// Open arc of angular length pi starting at `endpoint` (counterclockwise side)
// or ending at it (clockwise side).
Arc semicircle(const Direction& endpoint, Orientation side);

// A finite union of arcs held in canonical form: sorted breakpoints with the
// membership of each breakpoint and of each open gap between consecutive
// breakpoints. No breakpoint is redundant, so equality is structural.
class ArcSet {
 public:
  ArcSet() = default;
  static ArcSet full();
  static ArcSet of(const Arc& a);

  ArcSet unite(const ArcSet& other) const;
  ArcSet intersect(const ArcSet& other) const;
  ArcSet complement() const;

  bool contains(const Direction& d) const;
  bool is_empty() const noexcept { return points_.empty() && !all_; }
  bool is_full() const noexcept { return points_.empty() && all_; }

  // Maximal arcs, ordered counterclockwise by their lower endpoint.
  std::vector<Arc> arcs() const;
  std::vector<Direction> isolated_points() const;
  const std::vector<Direction>& breakpoints() const noexcept { return points_; }

  friend bool operator==(const ArcSet&, const ArcSet&) = default;

 private:
  template <class Op>
  static ArcSet combine(const ArcSet& a, const ArcSet& b, Op op);
  bool state_at(const Direction& d) const;
  bool state_after(const Direction& d) const;
  void canonicalize();

  std::vector<Direction> points_;
  std::vector<char> point_in_;
  // gap_in_[i] covers the open sweep points_[i] -> points_[i+1] (cyclically).
  std::vector<char> gap_in_;
  bool all_ = false;
};

ArcSet arcset_union(std::span<const Arc> arcs);
ArcSet arcset_complement(const ArcSet& s);

std::string to_string(const ArcSet& s);

// Directions u with <x,u> < 0 for every site x of the rule, i.e. the rule lies
// in the open half-plane H_u. The result is an open arc, possibly empty.
// Throws InvalidRule if `sites` is empty or contains the origin.
Arc unstable_arc_of_rule(std::span<const LatticePoint> sites);

}  // namespace bootperc
