#include "bootperc/budget.hpp"

#include <algorithm>
#include <limits>

namespace bootperc {

namespace {
constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
}

std::int64_t saturating_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) return ((a < 0) != (b < 0)) ? std::numeric_limits<std::int64_t>::min() : kMax;
  return r;
}

std::int64_t saturating_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) return a < 0 ? std::numeric_limits<std::int64_t>::min() : kMax;
  return r;
}

std::int64_t saturating_pow(std::int64_t base, unsigned exp) {
  std::int64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

std::int64_t paper_escape_bound(std::int64_t d, std::int64_t top_row) {
  const auto e = static_cast<unsigned>(std::max<std::int64_t>(d, 0));
  const std::int64_t two_d = saturating_pow(2, e);
  const std::int64_t a = saturating_mul(saturating_pow(d, 3), two_d);
  const std::int64_t b = saturating_mul(saturating_mul(saturating_pow(d, 5), two_d), top_row);
  return saturating_add(d, saturating_add(a, b));
}

std::int64_t paper_1d_bound(std::int64_t d) {
  return saturating_mul(saturating_pow(d, 2), saturating_pow(2, static_cast<unsigned>(std::max<std::int64_t>(d, 0))));
}

SearchBudget SearchBudget::paper(std::int64_t d) {
  SearchBudget b;
  const auto e = static_cast<unsigned>(std::max<std::int64_t>(d, 0));
  b.max_k = d;
  b.height_bound = saturating_pow(d, 4);
  b.gap_u = b.height_bound;
  b.gap_perp = saturating_mul(saturating_pow(d, 11), saturating_pow(2, e));
  b.step_budget = saturating_pow(5, e);
  b.window_half_width = std::min<std::int64_t>(paper_escape_bound(d, b.height_bound), std::int64_t{1} << 16);
  b.use_paper_bounds = true;
  return b;
}

}  // namespace bootperc
