#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bootperc/budget.hpp"
#include "bootperc/dynamics.hpp"
#include "bootperc/family.hpp"
#include "bootperc/geometry.hpp"

namespace bootperc {

class DifficultyValue {
 public:
  enum class Kind { Finite, Infinite };

  static DifficultyValue finite(std::int64_t k) { return {Kind::Finite, k}; }
  static DifficultyValue zero() { return finite(0); }
  static DifficultyValue infinite() { return {Kind::Infinite, 0}; }

  bool is_infinite() const noexcept { return kind_ == Kind::Infinite; }
  std::int64_t value() const noexcept { return value_; }

  friend bool operator==(const DifficultyValue&, const DifficultyValue&) = default;
  friend bool operator<(const DifficultyValue& a, const DifficultyValue& b) {
    if (a.is_infinite()) return false;
    return b.is_infinite() || a.value_ < b.value_;
  }

 private:
  DifficultyValue(Kind k, std::int64_t v) : kind_(k), value_(v) {}
  Kind kind_;
  std::int64_t value_;
};

std::string to_string(const DifficultyValue& v);

enum class DifficultyStatus { Exact, UpperBoundOnly, Indeterminate };

std::string to_string(DifficultyStatus s);

// One witness size k of the exhaustive search.
struct LevelRecord {
  std::int64_t k = 0;
  std::uint64_t candidates = 0;
  std::uint64_t finite = 0;
  std::uint64_t infinite = 0;
  std::uint64_t exhausted = 0;  // closures that ran out of budget
  std::int64_t gap_perp = 0;    // perpendicular gap enumerated at this level
  bool gap_capped = false;      // needed gap exceeded the budget cap
  bool truncated = false;       // candidate budget ran out mid-level
  std::int64_t max_extension = 0;  // farthest finite closure beyond its seed columns

  // Every canonical candidate of size k was enumerated and certified finite.
  bool complete() const noexcept { return !gap_capped && !truncated && exhausted == 0 && infinite == 0; }
};

// Envelope under which the lower levels were exhausted.
struct ExhaustionRecord {
  std::int64_t height_bound = 0;
  std::int64_t gap_u = 0;
  std::int64_t gap_perp_cap = 0;
  std::int64_t window_half_width = 0;
  std::int64_t step_budget = 0;
  std::int64_t max_k = 0;
  bool paper_bounds = false;
  std::vector<LevelRecord> levels;
};

struct DifficultyResult {
  Direction u = Direction::of(1, 0);
  DifficultyValue value = DifficultyValue::zero();
  DifficultyStatus status = DifficultyStatus::Exact;
  // Largest k such that all seeds smaller than k were certified finite (plus one).
  std::int64_t lower_bound = 0;
  std::optional<std::vector<LatticePoint>> witness;
  std::optional<Certificate> certificate;
  ExhaustionRecord exhaustion;
  std::uint64_t closures = 0;
};

// 0 for unstable u, infinity for non-isolated stable u, otherwise the
// certificate-backed search. Throws StateError unless the family is critical.
DifficultyResult direction_difficulty(const UpdateFamily& family, const Direction& u,
                                      const SearchBudget& budget = {});

struct SemicircleBound {
  Arc semicircle;
  std::vector<Direction> directions;  // isolated stable directions inside
  DifficultyValue lower = DifficultyValue::zero();
  std::optional<DifficultyValue> upper;  // absent if some direction has no witness
};

struct FamilyDifficultyResult {
  DifficultyValue value = DifficultyValue::zero();
  DifficultyStatus status = DifficultyStatus::Exact;
  DifficultyValue lower = DifficultyValue::zero();
  std::optional<Arc> semicircle;  // one attaining the upper bound
  std::vector<SemicircleBound> semicircles;
  std::vector<DifficultyResult> directions;  // isolated stable directions, ccw order
};

// alpha = min over candidate semicircles C of max over u in C of alpha(u),
// propagated as intervals so that status is Exact only when both ends meet.
FamilyDifficultyResult family_difficulty(const UpdateFamily& family, const SearchBudget& budget = {});

struct WitnessCheck {
  bool ok = false;
  std::optional<Certificate> certificate;
  ClosureOutcome outcome;
};

// True iff the closure of seeds above H_u is certified infinite and the
// certificate replays.
WitnessCheck verify_witness(const UpdateFamily& family, const Direction& u, std::span<const LatticePoint> seeds,
                            const SearchBudget& budget = {});

}  // namespace bootperc
