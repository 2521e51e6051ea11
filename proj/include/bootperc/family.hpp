#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bootperc/geometry.hpp"

namespace bootperc {

// A finite set of nonzero lattice offsets, deduplicated and sorted.
class Rule {
 public:
  // Throws InvalidRule on an empty site list or a site at the origin.
  explicit Rule(std::vector<LatticePoint> sites);

  const std::vector<LatticePoint>& sites() const noexcept { return sites_; }
  std::size_t size() const noexcept { return sites_.size(); }

  friend auto operator<=>(const Rule&, const Rule&) = default;

 private:
  std::vector<LatticePoint> sites_;
};

class UpdateFamily {
 public:
  // Sorts and deduplicates. Throws ValidationError on an empty family.
  explicit UpdateFamily(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  std::size_t total_sites() const noexcept;

  // Twice the largest l-infinity norm of a rule site.
  std::int64_t diameter() const noexcept { return diameter_; }
  // log(D) * sum |U|, natural logarithm.
  double input_size() const noexcept;

  friend bool operator==(const UpdateFamily& a, const UpdateFamily& b) {
    return a.rules_ == b.rules_;
  }

 private:
  std::vector<Rule> rules_;
  std::int64_t diameter_ = 0;
};

struct FamilyMetrics {
  std::int64_t diameter;
  double input_size;
};

FamilyMetrics metrics(const UpdateFamily& family);

using RawFamily = std::vector<std::vector<LatticePoint>>;

struct ValidationIssue {
  enum class Kind { EmptyFamily, EmptyRule, OriginInRule, CoordinateRange };
  Kind kind;
  std::size_t rule_index;
  std::string message;
};

struct ValidationReport {
  std::optional<UpdateFamily> family;
  std::vector<ValidationIssue> errors;
  std::vector<std::string> warnings;  // duplicate rules or sites

  bool ok() const noexcept { return family.has_value(); }
};

ValidationReport validate(const RawFamily& raw);
// Same as validate() but throws ValidationError on failure.
UpdateFamily make_family(const RawFamily& raw);

// Names: east, north_east, modified_two_neighbour, toy, two_neighbour,
// appendix_uk (needs k >= 2). Throws PreconditionError otherwise.
UpdateFamily named_family(std::string_view name, std::optional<std::int64_t> k = std::nullopt);
// "name" or "name:k".
UpdateFamily named_family_from_spec(std::string_view spec_with_param);
std::vector<std::string> named_family_list();

// One rule per line, sites as `x,y` separated by spaces, `#` comments.
std::string serialize(const UpdateFamily& family);

struct ParsedFamily {
  UpdateFamily family;
  std::vector<std::string> warnings;
  bool had_duplicates = false;
};

// Accepts the line format or a JSON object {"rules": [[[x,y], ...], ...]}.
// Throws ParseError on malformed text and ValidationError on invalid rules.
ParsedFamily parse_family(std::string_view text);

ParsedFamily read_family_file(const std::string& path);
void write_family_file(const std::string& path, const UpdateFamily& family);

// Integer matrix [[a, b], [c, d]] acting on column vectors.
struct LatticeSymmetry {
  std::int64_t a, b, c, d;

  LatticePoint apply(const LatticePoint& p) const {
    return {a * p.x + b * p.y, c * p.x + d * p.y};
  }
  Direction apply(const Direction& u) const { return Direction::of(apply(u.vector())); }
};

// The dihedral group of the square lattice (rotations and reflections).
std::array<LatticeSymmetry, 8> lattice_symmetries();

UpdateFamily transformed(const UpdateFamily& family, const LatticeSymmetry& g);

// 64-bit FNV-1a of the canonical serialization.
std::uint64_t family_digest(const UpdateFamily& family);

}  // namespace bootperc
