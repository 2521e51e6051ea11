#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bootperc/budget.hpp"
#include "bootperc/dynamics.hpp"
#include "bootperc/family.hpp"

namespace bootperc {

// Universe {1..universe} and a list of subsets.
struct SetCoverInstance {
  std::int64_t universe = 0;
  std::vector<std::vector<std::int64_t>> sets;
};

// Empty when the instance is usable: at least 4 sets, universe of at least 4,
// nonempty sets inside the universe whose union covers it.
std::vector<std::string> validation_issues(const SetCoverInstance& inst);
void validate(const SetCoverInstance& inst);  // throws ValidationError

// Text format: the universe size on the first line, then one set per line as
// space-separated integers. '#' starts a comment.
SetCoverInstance parse_set_cover(std::string_view text);
SetCoverInstance read_set_cover_file(const std::string& path);
std::string serialize(const SetCoverInstance& inst);

// W = {(x,0) : 1 <= x <= |S|^2} U {(l|S|,1) : 1 <= l <= |S|}.
std::vector<LatticePoint> w_shape(std::int64_t set_count);

// U_0, U_1 and every U^k_{i,j}.
UpdateFamily reduce(const SetCoverInstance& inst);

struct ReductionCounts {
  std::uint64_t rules = 0;        // 2 + |S|^2 sum |S_i|, from the rule index ranges
  std::uint64_t prose_rules = 0;  // |S|^3 sum |S_i|, the count quoted in words
  std::uint64_t total_sites = 0;  // 4N|S|^2 + |S|^2 sum |S_i| (N|S|^2 + |S|^2 + |S| + 1)
  std::uint64_t u0_size = 0;      // 2N|S|^2
  std::uint64_t uijk_size = 0;    // N|S|^2 + |S|^2 + |S| + 1
};

ReductionCounts reduction_counts(const SetCoverInstance& inst);

// Indices (0-based) of a minimum cover, by enumeration in increasing size.
std::vector<std::size_t> optimal_cover(const SetCoverInstance& inst);
std::int64_t solve_set_cover_bruteforce(const SetCoverInstance& inst);

// |S|^2 + |S| + m.
std::int64_t predicted_alpha(const SetCoverInstance& inst);

// W U {(i|S|, 2) : i in chosen}, with chosen given as 0-based set indices.
std::vector<LatticePoint> reduction_seed(const SetCoverInstance& inst, std::span<const std::size_t> chosen);

struct UpperBoundReport {
  bool verified = false;  // closure certified infinite and the certificate replays
  ClosureStatus status = ClosureStatus::BudgetExhausted;
  std::vector<std::size_t> cover;
  std::vector<LatticePoint> seed;
  std::optional<Certificate> certificate;
};

// Budget suited to the reduction families: margin grows with D, so the
// window cap is raised accordingly.
SearchBudget reduction_budget(const SetCoverInstance& inst);

// Z_0 from an optimal cover, closed above H_(0,1).
UpperBoundReport verify_reduction_upper_bound(const SetCoverInstance& inst, const SearchBudget& budget);
UpperBoundReport verify_reduction_upper_bound(const SetCoverInstance& inst);

// Same seed construction from an optimal cover with its last set removed,
// which is not a cover; `verified` is never set.
UpperBoundReport run_reduction_control(const SetCoverInstance& inst, const SearchBudget& budget);

// |(q + W) \ W| > |S| for every q != 0.
bool check_w_rigidity(std::int64_t set_count);
bool check_w_rigidity(const SetCoverInstance& inst);

}  // namespace bootperc
