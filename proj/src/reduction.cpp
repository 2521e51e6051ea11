#include "bootperc/reduction.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "bootperc/difficulty.hpp"
#include "bootperc/errors.hpp"

namespace bootperc {

std::vector<std::string> validation_issues(const SetCoverInstance& inst) {
  std::vector<std::string> issues;
  if (inst.universe < 4) issues.push_back("universe size must be at least 4");
  if (inst.universe > 62) issues.push_back("universe size above 62 is not supported");
  if (inst.sets.size() < 4) issues.push_back("need at least 4 sets");
  std::set<std::int64_t> covered;
  for (std::size_t i = 0; i < inst.sets.size(); ++i) {
    if (inst.sets[i].empty()) issues.push_back("set " + std::to_string(i + 1) + " is empty");
    for (auto e : inst.sets[i]) {
      if (e < 1 || e > inst.universe)
        issues.push_back("set " + std::to_string(i + 1) + " has element " + std::to_string(e) +
                         " outside the universe");
      else
        covered.insert(e);
    }
  }
  if (inst.universe >= 1 && static_cast<std::int64_t>(covered.size()) != inst.universe)
    issues.push_back("the sets do not cover the universe");
  return issues;
}

void validate(const SetCoverInstance& inst) {
  auto issues = validation_issues(inst);
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

namespace {

std::int64_t parse_int(std::string_view tok, std::size_t line, std::size_t col) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, col, "malformed integer '" + std::string(tok) + "'");
  return v;
}

}  // namespace

SetCoverInstance parse_set_cover(std::string_view text) {
  SetCoverInstance inst;
  bool have_n = false;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::int64_t> nums;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      nums.push_back(parse_int(line.substr(start, i - start), line_no, start + 1));
    }
    if (!nums.empty()) {
      if (!have_n) {
        if (nums.size() != 1) throw ParseError(line_no, 1, "first line must hold only the universe size");
        inst.universe = nums.front();
        have_n = true;
      } else {
        std::sort(nums.begin(), nums.end());
        nums.erase(std::unique(nums.begin(), nums.end()), nums.end());
        inst.sets.push_back(std::move(nums));
      }
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (!have_n) throw ParseError(1, 1, "missing universe size");
  return inst;
}

SetCoverInstance read_set_cover_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open set cover file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_set_cover(ss.str());
}

std::string serialize(const SetCoverInstance& inst) {
  std::ostringstream os;
  os << inst.universe << '\n';
  for (const auto& s : inst.sets) {
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? " " : "") << s[i];
    os << '\n';
  }
  return os.str();
}

std::vector<LatticePoint> w_shape(std::int64_t s) {
  std::vector<LatticePoint> w;
  for (std::int64_t x = 1; x <= s * s; ++x) w.push_back({x, 0});
  for (std::int64_t l = 1; l <= s; ++l) w.push_back({l * s, 1});
  return w;
}

UpdateFamily reduce(const SetCoverInstance& inst) {
  validate(inst);
  const std::int64_t s = static_cast<std::int64_t>(inst.sets.size());
  const std::int64_t n = inst.universe;
  const std::int64_t run = n * s * s;
  std::vector<Rule> rules;
  std::vector<LatticePoint> u0, u1, t;
  for (std::int64_t k = 1; k <= run; ++k) {
    u0.push_back({-k, 0});
    u0.push_back({0, -k});
    u1.push_back({k, 0});
    u1.push_back({0, -k});
    t.push_back({0, -k});
  }
  rules.emplace_back(u0);
  rules.emplace_back(u1);
  const auto w = w_shape(s);
  for (std::int64_t i = 1; i <= s; ++i) {
    for (auto j : inst.sets[static_cast<std::size_t>(i - 1)]) {
      for (std::int64_t k = 1; k <= s * s; ++k) {
        const LatticePoint shift{k + (n + j) * s * s, 0};
        std::vector<LatticePoint> sites = t;
        for (const auto& p : w) sites.push_back(p - shift);
        sites.push_back(LatticePoint{i * s, 2} - shift);
        rules.emplace_back(std::move(sites));
      }
    }
  }
  return UpdateFamily(std::move(rules));
}

ReductionCounts reduction_counts(const SetCoverInstance& inst) {
  const std::uint64_t s = inst.sets.size();
  const std::uint64_t n = static_cast<std::uint64_t>(inst.universe);
  std::uint64_t sum = 0;
  for (const auto& set : inst.sets) sum += set.size();
  ReductionCounts c;
  c.rules = 2 + s * s * sum;
  c.prose_rules = s * s * s * sum;
  c.u0_size = 2 * n * s * s;
  c.uijk_size = n * s * s + s * s + s + 1;
  c.total_sites = 2 * c.u0_size + s * s * sum * c.uijk_size;
  return c;
}

std::vector<std::size_t> optimal_cover(const SetCoverInstance& inst) {
  validate(inst);
  if (inst.sets.size() > 30) throw PreconditionError("brute-force set cover supports at most 30 sets");
  const std::uint64_t full = (std::uint64_t{1} << inst.universe) - 1;
  std::vector<std::uint64_t> masks;
  for (const auto& set : inst.sets) {
    std::uint64_t m = 0;
    for (auto e : set) m |= std::uint64_t{1} << (e - 1);
    masks.push_back(m);
  }
  const std::size_t n = masks.size();
  for (std::size_t c = 1; c <= n; ++c) {
    std::vector<char> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(c), 1);
    do {
      std::uint64_t m = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (pick[i]) m |= masks[i];
      if (m == full) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n; ++i)
          if (pick[i]) out.push_back(i);
        return out;
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  throw StateError("no cover found despite validation");
}

std::int64_t solve_set_cover_bruteforce(const SetCoverInstance& inst) {
  return static_cast<std::int64_t>(optimal_cover(inst).size());
}

std::int64_t predicted_alpha(const SetCoverInstance& inst) {
  const auto s = static_cast<std::int64_t>(inst.sets.size());
  return s * s + s + solve_set_cover_bruteforce(inst);
}

std::vector<LatticePoint> reduction_seed(const SetCoverInstance& inst, std::span<const std::size_t> chosen) {
  const auto s = static_cast<std::int64_t>(inst.sets.size());
  auto z = w_shape(s);
  for (auto i : chosen) z.push_back({(static_cast<std::int64_t>(i) + 1) * s, 2});
  return z;
}

SearchBudget reduction_budget(const SetCoverInstance& inst) {
  SearchBudget b;
  const auto s = static_cast<std::int64_t>(inst.sets.size());
  const std::int64_t d = 2 * (2 * inst.universe + 1) * s * s;
  b.window_half_width = std::max<std::int64_t>(b.window_half_width, 16 * d);
  return b;
}

namespace {

UpperBoundReport close_seed(const SetCoverInstance& inst, std::vector<std::size_t> chosen,
                            const SearchBudget& budget) {
  UpperBoundReport r;
  const auto family = reduce(inst);
  r.cover = std::move(chosen);
  r.seed = reduction_seed(inst, r.cover);
  const auto u = Direction::of(0, 1);
  auto check = verify_witness(family, u, r.seed, budget);
  r.status = check.outcome.status;
  r.certificate = check.certificate;
  r.verified = check.ok;
  return r;
}

}  // namespace

UpperBoundReport verify_reduction_upper_bound(const SetCoverInstance& inst, const SearchBudget& budget) {
  return close_seed(inst, optimal_cover(inst), budget);
}

UpperBoundReport verify_reduction_upper_bound(const SetCoverInstance& inst) {
  return verify_reduction_upper_bound(inst, reduction_budget(inst));
}

UpperBoundReport run_reduction_control(const SetCoverInstance& inst, const SearchBudget& budget) {
  auto cover = optimal_cover(inst);
  cover.pop_back();
  auto r = close_seed(inst, std::move(cover), budget);
  r.verified = false;
  return r;
}

bool check_w_rigidity(std::int64_t set_count) {
  const auto w = w_shape(set_count);
  const std::set<LatticePoint> ws(w.begin(), w.end());
  const std::int64_t ext = set_count * set_count;
  for (std::int64_t qx = -ext; qx <= ext; ++qx)
    for (std::int64_t qy = -1; qy <= 1; ++qy) {
      if (qx == 0 && qy == 0) continue;
      std::int64_t outside = 0;
      for (const auto& p : w)
        if (!ws.count(p + LatticePoint{qx, qy})) ++outside;
      if (outside <= set_count) return false;
    }
  return true;
}

bool check_w_rigidity(const SetCoverInstance& inst) {
  return check_w_rigidity(static_cast<std::int64_t>(inst.sets.size()));
}

}  // namespace bootperc
