#include "bootperc/family.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bootperc {

Rule::Rule(std::vector<LatticePoint> sites) : sites_(std::move(sites)) {
  if (sites_.empty()) throw InvalidRule("empty rule");
  for (const auto& s : sites_)
    if (s.x == 0 && s.y == 0) throw InvalidRule("rule contains the origin");
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

UpdateFamily::UpdateFamily(std::vector<Rule> rules) : rules_(std::move(rules)) {
  if (rules_.empty()) throw ValidationError({"update family has no rules"});
  std::sort(rules_.begin(), rules_.end());
  rules_.erase(std::unique(rules_.begin(), rules_.end()), rules_.end());
  for (const auto& r : rules_)
    for (const auto& s : r.sites()) diameter_ = std::max(diameter_, 2 * linf_norm(s));
}

std::size_t UpdateFamily::total_sites() const noexcept {
  std::size_t n = 0;
  for (const auto& r : rules_) n += r.size();
  return n;
}

double UpdateFamily::input_size() const noexcept {
  return std::log(static_cast<double>(diameter_)) * static_cast<double>(total_sites());
}

FamilyMetrics metrics(const UpdateFamily& family) {
  return {family.diameter(), family.input_size()};
}

ValidationReport validate(const RawFamily& raw) {
  ValidationReport report;
  if (raw.empty()) {
    report.errors.push_back({ValidationIssue::Kind::EmptyFamily, 0, "update family has no rules"});
    return report;
  }
  std::vector<Rule> rules;
  std::set<std::vector<LatticePoint>> seen;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& sites = raw[i];
    bool bad = false;
    if (sites.empty()) {
      report.errors.push_back({ValidationIssue::Kind::EmptyRule, i, "rule " + std::to_string(i) + " is empty"});
      continue;
    }
    for (const auto& s : sites) {
      if (s.x == 0 && s.y == 0) {
        report.errors.push_back({ValidationIssue::Kind::OriginInRule, i,
                                 "rule " + std::to_string(i) + " contains the origin"});
        bad = true;
        break;
      }
      if (std::abs(s.x) > kCoordinateLimit / 2 || std::abs(s.y) > kCoordinateLimit / 2) {
        report.errors.push_back({ValidationIssue::Kind::CoordinateRange, i,
                                 "rule " + std::to_string(i) + " has a coordinate out of range: " +
                                     to_string(s)});
        bad = true;
        break;
      }
    }
    if (bad) continue;
    Rule r(sites);
    if (r.size() != sites.size())
      report.warnings.push_back("rule " + std::to_string(i) + " has duplicate sites");
    if (!seen.insert(r.sites()).second)
      report.warnings.push_back("rule " + std::to_string(i) + " duplicates an earlier rule");
    rules.push_back(std::move(r));
  }
  if (report.errors.empty()) report.family.emplace(std::move(rules));
  return report;
}

UpdateFamily make_family(const RawFamily& raw) {
  auto report = validate(raw);
  if (!report.ok()) {
    std::vector<std::string> msgs;
    for (const auto& e : report.errors) msgs.push_back(e.message);
    throw ValidationError(std::move(msgs));
  }
  return std::move(*report.family);
}

namespace {

RawFamily two_neighbour_rules() {
  const std::vector<LatticePoint> nbrs{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  RawFamily raw;
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    for (std::size_t j = i + 1; j < nbrs.size(); ++j) raw.push_back({nbrs[i], nbrs[j]});
  return raw;
}

}  // namespace

UpdateFamily named_family(std::string_view name, std::optional<std::int64_t> k) {
  if (name == "east") return make_family({{{-1, 0}}, {{0, -1}}});
  if (name == "north_east") return make_family({{{-1, 0}, {0, -1}}});
  if (name == "modified_two_neighbour")
    return make_family({{{-1, 0}, {0, 1}}, {{0, -1}, {-1, 0}}, {{1, 0}, {0, -1}}, {{0, 1}, {1, 0}}});
  if (name == "toy")
    return make_family({{{-1, 0}, {-2, 0}, {0, -1}, {0, -2}},
                        {{-1, 0}, {-2, 0}, {0, 1}},
                        {{1, 0}, {2, 0}, {0, -1}, {0, -2}}});
  if (name == "two_neighbour") return make_family(two_neighbour_rules());
  if (name == "appendix_uk") {
    if (!k || *k < 2) throw PreconditionError("appendix_uk needs k >= 2");
    const std::int64_t kk = *k;
    return make_family({{{0, -1}, {kk, 0}, {kk - 1, 0}}, {{0, -1}, {-kk, 0}, {-kk + 1, 0}}});
  }
  throw PreconditionError("unknown family name: " + std::string(name));
}

UpdateFamily named_family_from_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) return named_family(spec, std::nullopt);
  const auto param = spec.substr(colon + 1);
  std::int64_t k = 0;
  auto [ptr, ec] = std::from_chars(param.data(), param.data() + param.size(), k);
  if (ec != std::errc() || ptr != param.data() + param.size())
    throw PreconditionError("bad family parameter: " + std::string(param));
  return named_family(spec.substr(0, colon), k);
}

std::vector<std::string> named_family_list() {
  return {"east", "north_east", "modified_two_neighbour", "toy", "two_neighbour", "appendix_uk:k"};
}

std::string serialize(const UpdateFamily& family) {
  std::ostringstream os;
  os << "# bootstrap percolation update family: " << family.size() << " rules, D = "
     << family.diameter() << "\n";
  for (const auto& r : family.rules()) {
    bool first = true;
    for (const auto& s : r.sites()) {
      if (!first) os << ' ';
      first = false;
      os << s.x << ',' << s.y;
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::int64_t parse_int(std::string_view tok, std::size_t line, std::size_t col) {
  std::int64_t v = 0;
  const char* begin = tok.data();
  if (!tok.empty() && tok.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, col, "malformed integer '" + std::string(tok) + "'");
  return v;
}

RawFamily parse_lines(std::string_view text) {
  RawFamily raw;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<LatticePoint> sites;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::string_view tok = line.substr(start, i - start);
      const std::size_t col = start + 1;
      if (tok.size() >= 2 && tok.front() == '(' && tok.back() == ')') tok = tok.substr(1, tok.size() - 2);
      const auto comma = tok.find(',');
      if (comma == std::string_view::npos)
        throw ParseError(line_no, col, "expected a site 'x,y', got '" + std::string(tok) + "'");
      sites.push_back({parse_int(tok.substr(0, comma), line_no, col),
                       parse_int(tok.substr(comma + 1), line_no, col + comma + 1)});
    }
    if (!sites.empty()) raw.push_back(std::move(sites));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return raw;
}

RawFamily parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [l, c] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(l, c, "invalid JSON family");
  }
  if (!j.is_object() || !j.contains("rules") || !j["rules"].is_array())
    throw ParseError(1, 1, "JSON family must be an object with a 'rules' array");
  RawFamily raw;
  for (const auto& rule : j["rules"]) {
    if (!rule.is_array()) throw ParseError(1, 1, "each rule must be an array of [x,y] pairs");
    std::vector<LatticePoint> sites;
    for (const auto& site : rule) {
      if (!site.is_array() || site.size() != 2 || !site[0].is_number_integer() ||
          !site[1].is_number_integer())
        throw ParseError(1, 1, "site must be an integer pair [x,y]");
      sites.push_back({site[0].get<std::int64_t>(), site[1].get<std::int64_t>()});
    }
    raw.push_back(std::move(sites));
  }
  return raw;
}

}  // namespace

ParsedFamily parse_family(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool is_json = first != std::string_view::npos && text[first] == '{';
  RawFamily raw = is_json ? parse_json(text) : parse_lines(text);
  auto report = validate(raw);
  if (!report.ok()) {
    std::vector<std::string> msgs;
    for (const auto& e : report.errors) msgs.push_back(e.message);
    throw ValidationError(std::move(msgs));
  }
  ParsedFamily out{std::move(*report.family), std::move(report.warnings), false};
  out.had_duplicates = !out.warnings.empty();
  return out;
}

ParsedFamily read_family_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open family file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_family(ss.str());
}

void write_family_file(const std::string& path, const UpdateFamily& family) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write family file: " + path);
  out << serialize(family);
}

std::array<LatticeSymmetry, 8> lattice_symmetries() {
  return {{{1, 0, 0, 1},
           {0, -1, 1, 0},
           {-1, 0, 0, -1},
           {0, 1, -1, 0},
           {1, 0, 0, -1},
           {-1, 0, 0, 1},
           {0, 1, 1, 0},
           {0, -1, -1, 0}}};
}

UpdateFamily transformed(const UpdateFamily& family, const LatticeSymmetry& g) {
  std::vector<Rule> rules;
  for (const auto& r : family.rules()) {
    std::vector<LatticePoint> sites;
    for (const auto& s : r.sites()) sites.push_back(g.apply(s));
    rules.emplace_back(std::move(sites));
  }
  return UpdateFamily(std::move(rules));
}

std::uint64_t family_digest(const UpdateFamily& family) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : serialize(family)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace bootperc
