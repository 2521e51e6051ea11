#include "bootperc/certificate.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bootperc/errors.hpp"
#include "bootperc/stability.hpp"
#include "json.hpp"

namespace bootperc {

using nlohmann::json;

namespace {

json point_json(const LatticePoint& p) { return json::array({p.x, p.y}); }

json points_json(std::span<const LatticePoint> pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(point_json(p));
  return a;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json certificate_json(const Certificate& c) {
  if (const auto* t = std::get_if<TranslateRepetition>(&c)) {
    return {{"kind", "translate_repetition"},     {"offset", point_json(t->offset)},
            {"pattern", points_json(t->pattern)}, {"top_row", t->top_row},
            {"replay_window", {t->replay_lo, t->replay_hi}},
            {"source_window", {t->source_lo, t->source_hi}}};
  }
  const auto& e = std::get<EscapeBeyondBound>(c);
  return {{"kind", "escape"},
          {"site", point_json(e.site)},
          {"bound", e.bound},
          {"top_row", e.top_row},
          {"source_window", {e.source_lo, e.source_hi}}};
}

json value_json(const DifficultyValue& v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

json exhaustion_json(const ExhaustionRecord& ex) {
  json levels = json::array();
  for (const auto& l : ex.levels)
    levels.push_back({{"k", l.k},
                      {"candidates", l.candidates},
                      {"finite", l.finite},
                      {"infinite", l.infinite},
                      {"budget_exhausted", l.exhausted},
                      {"gap_perp", l.gap_perp},
                      {"gap_capped", l.gap_capped},
                      {"truncated", l.truncated},
                      {"max_extension", l.max_extension},
                      {"complete", l.complete()}});
  return {{"height_bound", ex.height_bound}, {"gap_u", ex.gap_u},
          {"gap_perp_cap", ex.gap_perp_cap}, {"window_half_width", ex.window_half_width},
          {"step_budget", ex.step_budget},   {"max_k", ex.max_k},
          {"paper_bounds", ex.paper_bounds}, {"levels", levels}};
}

LatticePoint parse_point(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw ParseError(1, 1, "expected an integer pair");
  return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

std::vector<LatticePoint> parse_points(const json& j) {
  if (!j.is_array()) throw ParseError(1, 1, "expected an array of integer pairs");
  std::vector<LatticePoint> out;
  for (const auto& p : j) out.push_back(parse_point(p));
  return out;
}

std::pair<std::int64_t, std::int64_t> parse_window(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError(1, 1, "expected a window [lo, hi]");
  return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

Certificate parse_certificate(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "translate_repetition") {
    TranslateRepetition t;
    t.offset = parse_point(j.at("offset"));
    t.pattern = parse_points(j.at("pattern"));
    t.top_row = j.at("top_row").get<std::int64_t>();
    std::tie(t.replay_lo, t.replay_hi) = parse_window(j.at("replay_window"));
    std::tie(t.source_lo, t.source_hi) = parse_window(j.at("source_window"));
    return t;
  }
  if (kind == "escape") {
    EscapeBeyondBound e;
    e.site = parse_point(j.at("site"));
    e.bound = j.at("bound").get<std::int64_t>();
    e.top_row = j.at("top_row").get<std::int64_t>();
    std::tie(e.source_lo, e.source_hi) = parse_window(j.at("source_window"));
    return e;
  }
  throw ParseError(1, 1, "unknown certificate kind '" + kind + "'");
}

}  // namespace

std::string write_certificate(const UpdateFamily& family, std::span<const DifficultyResult> results,
                              const FamilyDifficultyResult* family_result) {
  json rules = json::array();
  for (const auto& r : family.rules()) rules.push_back(points_json(r.sites()));
  json entries = json::array();
  for (const auto& r : results) {
    json e = {{"direction", {r.u.px(), r.u.py()}},
              {"value", value_json(r.value)},
              {"status", to_string(r.status)},
              {"lower_bound", r.lower_bound},
              {"closures", r.closures}};
    if (r.witness) e["witness"] = points_json(*r.witness);
    if (r.certificate) e["certificate"] = certificate_json(*r.certificate);
    if (!r.exhaustion.levels.empty()) e["exhaustion"] = exhaustion_json(r.exhaustion);
    entries.push_back(std::move(e));
  }
  json doc = {{"format", std::string(kCertificateFormat)},
              {"family_digest", hex64(family_digest(family))},
              {"rules", rules},
              {"entries", entries}};
  if (family_result) {
    json f = {{"value", value_json(family_result->value)},
              {"lower", value_json(family_result->lower)},
              {"status", to_string(family_result->status)}};
    if (family_result->semicircle) f["semicircle"] = to_string(*family_result->semicircle);
    doc["family"] = f;
  }
  return doc.dump(2) + "\n";
}

void write_certificate_file(const std::string& path, const UpdateFamily& family,
                            std::span<const DifficultyResult> results, const FamilyDifficultyResult* family_result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write certificate file: " + path);
  out << write_certificate(family, results, family_result);
}

CertificateCheck verify_certificate(const UpdateFamily& family, std::string_view text, std::int64_t step_budget) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(1, e.byte, "invalid certificate JSON");
  }
  CertificateCheck out;
  auto fail = [&](std::string msg) {
    out.messages.push_back("FAIL " + std::move(msg));
    return false;
  };
  bool ok = true;
  try {
    if (doc.value("format", std::string()) != kCertificateFormat)
      ok = fail("unsupported certificate format");
    if (doc.value("family_digest", std::string()) != hex64(family_digest(family)))
      ok = fail("family digest does not match the supplied family");
    const auto profile = stability_profile(family);
    for (const auto& e : doc.at("entries")) {
      ++out.entries;
      const auto dir = e.at("direction");
      const auto u = Direction::of(dir.at(0).get<std::int64_t>(), dir.at(1).get<std::int64_t>());
      const std::string tag = "direction " + to_string(u) + ": ";
      const auto& v = e.at("value");
      if (v.is_string()) {
        if (v.get<std::string>() != "inf") {
          ok = fail(tag + "bad value");
        } else if (!profile.is_stable(u) || profile.is_isolated(u)) {
          ok = fail(tag + "infinite value but the direction is not non-isolated stable");
        } else {
          out.messages.push_back("ok   " + tag + "non-isolated stable, value inf");
        }
        continue;
      }
      const auto k = v.get<std::int64_t>();
      if (k == 0) {
        if (profile.is_stable(u))
          ok = fail(tag + "value 0 but the direction is stable");
        else
          out.messages.push_back("ok   " + tag + "unstable, value 0");
        continue;
      }
      if (!e.contains("witness")) {
        out.messages.push_back("note " + tag + "no witness recorded (status " +
                               e.value("status", std::string("?")) + ")");
        continue;
      }
      const auto witness = parse_points(e.at("witness"));
      if (static_cast<std::int64_t>(witness.size()) != k) {
        ok = fail(tag + "witness size differs from the value");
        continue;
      }
      if (!profile.is_isolated(u)) {
        ok = fail(tag + "witness given for a direction that is not isolated stable");
        continue;
      }
      bool replayed = false;
      if (e.contains("certificate")) {
        replayed = replay_certificate(family, u, witness, parse_certificate(e.at("certificate")), step_budget);
      } else {
        SearchBudget b;
        b.step_budget = step_budget;
        replayed = verify_witness(family, u, witness, b).ok;
      }
      if (!replayed) {
        ok = fail(tag + "witness certificate does not replay");
        continue;
      }
      ++out.witnesses_replayed;
      std::string msg = "ok   " + tag + "witness of size " + std::to_string(k) + " replays";
      if (e.contains("exhaustion"))
        msg += "; lower levels exhausted per recorded envelope (not re-enumerated)";
      out.messages.push_back(msg);
    }
  } catch (const json::exception& ex) {
    throw ParseError(1, 1, std::string("malformed certificate: ") + ex.what());
  }
  out.ok = ok;
  return out;
}

CertificateCheck verify_certificate_file(const UpdateFamily& family, const std::string& path,
                                         std::int64_t step_budget) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open certificate file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return verify_certificate(family, ss.str(), step_budget);
}

}  // namespace bootperc
