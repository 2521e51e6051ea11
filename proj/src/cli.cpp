#include "bootperc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "bootperc/certificate.hpp"
#include "bootperc/difficulty.hpp"
#include "bootperc/dynamics.hpp"
#include "bootperc/errors.hpp"
#include "bootperc/family.hpp"
#include "bootperc/montecarlo.hpp"
#include "bootperc/reduction.hpp"
#include "bootperc/stability.hpp"
#include "json.hpp"

namespace bootperc::cli {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json point(const LatticePoint& p) { return json::array({p.x, p.y}); }
json direction(const Direction& u) { return json::array({u.px(), u.py()}); }

json points(std::span<const LatticePoint> ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(point(p));
  return a;
}

json value_json(const DifficultyValue& v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

LatticePoint parse_pair(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    std::size_t a = 0, b = 0;
    const auto x = std::stoll(text.substr(0, comma), &a);
    const auto y = std::stoll(text.substr(comma + 1), &b);
    if (a != comma || b != text.size() - comma - 1) throw std::invalid_argument("trailing");
    return {x, y};
  } catch (const std::exception&) {
    throw PreconditionError(std::string("expected ") + what + " as 'x,y', got '" + text + "'");
  }
}

struct BudgetFlags {
  std::optional<std::int64_t> max_k, height_bound, gap_u, gap_perp, window, steps;
  std::optional<std::uint64_t> candidates;
  unsigned threads = 0;
  bool paper = false;

  void attach(CLI::App* app) {
    app->add_option("--max-k", max_k, "largest witness size tried (default D)");
    app->add_option("--height-bound", height_bound, "max height of a candidate site (default D)");
    app->add_option("--gap-u", gap_u, "max height gap between sorted candidate sites");
    app->add_option("--gap-perp", gap_perp, "cap on the perpendicular gap between candidate sites");
    app->add_option("--window", window, "cap on the strip half-width");
    app->add_option("--steps", steps, "engine sweeps per closure");
    app->add_option("--candidates", candidates, "total closures allowed in one search");
    app->add_option("--threads", threads, "worker threads (default: all cores)");
    app->add_flag("--paper-bounds", paper, "use the explicit bounds of the decidability proof");
  }

  SearchBudget build(std::int64_t diameter) const {
    SearchBudget b = paper ? SearchBudget::paper(diameter) : SearchBudget{};
    if (max_k) b.max_k = *max_k;
    if (height_bound) b.height_bound = *height_bound;
    if (gap_u) b.gap_u = *gap_u;
    if (gap_perp) b.gap_perp = *gap_perp;
    if (window) b.window_half_width = *window;
    if (steps) b.step_budget = *steps;
    if (candidates) b.candidate_budget = *candidates;
    b.threads = threads;
    return b;
  }
};

json budget_json(const SearchBudget& b) {
  return {{"max_k", b.max_k},
          {"window_half_width", b.window_half_width},
          {"height_bound", b.height_bound},
          {"gap_u", b.gap_u},
          {"gap_perp", b.gap_perp},
          {"step_budget", b.step_budget},
          {"candidate_budget", b.candidate_budget},
          {"use_paper_bounds", b.use_paper_bounds}};
}

json direction_json(const DifficultyResult& r) {
  json j = {{"direction", direction(r.u)},
            {"value", value_json(r.value)},
            {"status", to_string(r.status)},
            {"lower_bound", r.lower_bound},
            {"closures", r.closures}};
  if (r.witness) j["witness"] = points(*r.witness);
  if (!r.exhaustion.levels.empty()) {
    json levels = json::array();
    for (const auto& l : r.exhaustion.levels)
      levels.push_back({{"k", l.k},
                        {"candidates", l.candidates},
                        {"finite", l.finite},
                        {"budget_exhausted", l.exhausted},
                        {"gap_perp", l.gap_perp},
                        {"complete", l.complete()}});
    j["levels"] = levels;
  }
  return j;
}

ParsedFamily load_family(const std::string& path, json& report) {
  auto parsed = read_family_file(path);
  report["input_digest"] = hex64(family_digest(parsed.family));
  if (!parsed.warnings.empty()) report["warnings"] = parsed.warnings;
  return parsed;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool timing = true;
};

void emit(Context& ctx, const std::string& command, json stable, double seconds) {
  json doc = {{"command", command}, {"stable", std::move(stable)}};
  if (ctx.timing) doc["timing"] = {{"wall_seconds", seconds}};
  ctx.out << doc.dump(2) << "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bootstrap percolation: classification, difficulty search, reductions and simulation",
               "bootperc"};
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx{out, err};
  app.add_flag("--no-timing", [&](std::int64_t) { ctx.timing = false; }, "omit the timing section");

  std::string family_path, cert_path, out_path, csv_path, dump_path, dir_text, grid_text, set_path, gen_name;
  std::vector<std::string> seed_sites;
  bool require_exact = false, want_dump = false, verify = false, list = false;
  std::optional<std::int64_t> torus;
  std::optional<double> random_p;
  std::int64_t n = 32;
  std::uint64_t trials = 100, seed = 1;
  double tol = 1e-3;
  BudgetFlags bf;
  unsigned threads = 0;

  auto* classify_cmd = app.add_subcommand("classify", "classify a family");
  classify_cmd->add_option("family", family_path, "family file")->required();

  auto* stable_cmd = app.add_subcommand("stable", "stable set and isolated directions");
  stable_cmd->add_option("family", family_path, "family file")->required();

  auto* diff_cmd = app.add_subcommand("difficulty", "certified difficulty search");
  diff_cmd->add_option("family", family_path, "family file")->required();
  diff_cmd->add_option("--direction", dir_text, "single direction px,py");
  diff_cmd->add_option("--cert", cert_path, "write a certificate file");
  diff_cmd->add_flag("--require-exact", require_exact, "exit with code 3 unless the result is Exact");
  bf.attach(diff_cmd);

  auto* sim_cmd = app.add_subcommand("simulate", "closure on a grid, torus or half-plane strip");
  sim_cmd->add_option("family", family_path, "family file")->required();
  auto* grid_opt = sim_cmd->add_option("--grid", grid_text, "rectangle WxH with corner (0,0)");
  auto* torus_opt = sim_cmd->add_option("--torus", torus, "torus size N");
  auto* half_opt = sim_cmd->add_option("--half-plane", dir_text, "direction px,py: closure above H_u");
  grid_opt->excludes(torus_opt)->excludes(half_opt);
  torus_opt->excludes(half_opt);
  sim_cmd->add_option("--seed-sites", seed_sites, "initially infected sites x,y");
  sim_cmd->add_option("--random", random_p, "Bernoulli(p) initial set on the torus");
  sim_cmd->add_option("--seed", seed, "random seed");
  sim_cmd->add_flag("--dump", want_dump, "include the bitmap in the report");
  sim_cmd->add_option("--dump-file", dump_path, "write the bitmap to a file");

  auto* pc_cmd = app.add_subcommand("pc", "estimate the critical probability on the n x n torus");
  pc_cmd->add_option("family", family_path, "family file")->required();
  pc_cmd->add_option("--n", n, "torus size")->check(CLI::Range(2, 1 << 14));
  pc_cmd->add_option("--trials", trials, "trials per probe")->check(CLI::PositiveNumber);
  pc_cmd->add_option("--tol", tol, "bisection tolerance");
  pc_cmd->add_option("--seed", seed, "random seed");
  pc_cmd->add_option("--csv", csv_path, "write the probe curve as CSV");
  pc_cmd->add_option("--threads", threads, "worker threads");

  auto* reduce_cmd = app.add_subcommand("reduce", "Set Cover instance to update family");
  reduce_cmd->add_option("setcover", set_path, "set cover file")->required();
  reduce_cmd->add_option("-o,--output", out_path, "family file to write")->required();
  reduce_cmd->add_flag("--verify", verify, "simulate the witness upper bound and the control");

  auto* gen_cmd = app.add_subcommand("gen", "write a named family");
  gen_cmd->add_option("name", gen_name, "family name, e.g. toy or appendix_uk:3");
  gen_cmd->add_option("-o,--output", out_path, "family file to write");
  gen_cmd->add_flag("--list", list, "list the named families");

  auto* vc_cmd = app.add_subcommand("verify-cert", "re-check a certificate file");
  vc_cmd->add_option("family", family_path, "family file")->required();
  vc_cmd->add_option("certificate", cert_path, "certificate file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  try {
    json s;
    if (classify_cmd->parsed()) {
      const auto fam = load_family(family_path, s);
      const auto m = metrics(fam.family);
      s["rules"] = fam.family.size();
      s["diameter"] = m.diameter;
      s["input_size"] = m.input_size;
      s["classification"] = to_string(classify(fam.family));
      emit(ctx, "classify", s, elapsed());
      return kOk;
    }
    if (stable_cmd->parsed()) {
      const auto fam = load_family(family_path, s);
      const auto p = stability_profile(fam.family);
      s["classification"] = to_string(p.classification);
      s["unstable"] = to_string(p.unstable);
      s["stable"] = to_string(p.stable);
      json iso = json::array();
      for (const auto& u : p.isolated) iso.push_back(direction(u));
      s["isolated"] = iso;
      json arcs = json::array();
      for (const auto& a : p.non_isolated.arcs()) arcs.push_back(to_string(a));
      s["non_isolated_arcs"] = arcs;
      emit(ctx, "stable", s, elapsed());
      return kOk;
    }
    if (diff_cmd->parsed()) {
      const auto fam = load_family(family_path, s);
      const auto budget = bf.build(fam.family.diameter());
      s["budget"] = budget_json(budget);
      DifficultyStatus status;
      if (!dir_text.empty()) {
        const auto u = Direction::of(parse_pair(dir_text, "a direction"));
        const auto r = direction_difficulty(fam.family, u, budget);
        s["result"] = direction_json(r);
        status = r.status;
        if (!cert_path.empty()) write_certificate_file(cert_path, fam.family, std::span(&r, 1));
      } else {
        const auto r = family_difficulty(fam.family, budget);
        json res = {{"value", value_json(r.value)},
                    {"status", to_string(r.status)},
                    {"lower", value_json(r.lower)}};
        if (r.semicircle) res["semicircle"] = to_string(*r.semicircle);
        json dirs = json::array();
        for (const auto& d : r.directions) dirs.push_back(direction_json(d));
        res["directions"] = dirs;
        json semis = json::array();
        for (const auto& c : r.semicircles) {
          json dj = json::array();
          for (const auto& u : c.directions) dj.push_back(direction(u));
          semis.push_back({{"semicircle", to_string(c.semicircle)},
                           {"directions", dj},
                           {"lower", value_json(c.lower)},
                           {"upper", c.upper ? value_json(*c.upper) : json(nullptr)}});
        }
        res["semicircles"] = semis;
        s["result"] = res;
        status = r.status;
        if (!cert_path.empty()) write_certificate_file(cert_path, fam.family, r.directions, &r);
      }
      emit(ctx, "difficulty", s, elapsed());
      return require_exact && status != DifficultyStatus::Exact ? kNotExact : kOk;
    }
    if (sim_cmd->parsed()) {
      const auto fam = load_family(family_path, s);
      std::vector<LatticePoint> a;
      for (const auto& t : seed_sites) a.push_back(parse_pair(t, "a site"));
      if (random_p) {
        if (!torus) throw PreconditionError("--random needs --torus");
        auto extra = bernoulli_sample(*torus, *random_p, trial_seed(seed, 0));
        a.insert(a.end(), extra.begin(), extra.end());
      }
      InfectionState state;
      if (!grid_text.empty()) {
        const auto x = grid_text.find('x');
        if (x == std::string::npos) throw PreconditionError("--grid expects WxH");
        const auto wh = parse_pair(grid_text.substr(0, x) + "," + grid_text.substr(x + 1), "a grid size");
        if (wh.x < 1 || wh.y < 1) throw PreconditionError("grid dimensions must be positive");
        state = closure_finite(fam.family, Rectangle{0, wh.x - 1, 0, wh.y - 1}, a);
      } else if (torus) {
        state = closure_finite(fam.family, Torus{*torus}, a);
      } else if (!dir_text.empty()) {
        const auto u = Direction::of(parse_pair(dir_text, "a direction"));
        const auto outcome = half_plane_closure(fam.family, u, a, SearchBudget{});
        s["status"] = to_string(outcome.status);
        state = outcome.state;
      } else {
        throw PreconditionError("simulate needs one of --grid, --torus, --half-plane");
      }
      s["infected_count"] = state.infected.size();
      s["generation"] = state.generation;
      s["infected"] = points(state.infected);
      const auto bitmap = dump_bitmap(state);
      if (want_dump) s["bitmap"] = bitmap;
      if (!dump_path.empty()) write_text(dump_path, bitmap);
      emit(ctx, "simulate", s, elapsed());
      return kOk;
    }
    if (pc_cmd->parsed()) {
      const auto fam = load_family(family_path, s);
      const auto est = estimate_pc(fam.family, n, trials, tol, seed, threads);
      s["n"] = est.n;
      s["trials_per_probe"] = est.trials_per_probe;
      s["seed"] = est.seed;
      s["p_lo"] = est.p_lo;
      s["p_hi"] = est.p_hi;
      s["estimate"] = est.estimate();
      s["probes"] = est.curve.size();
      if (!csv_path.empty()) write_text(csv_path, curve_csv(est));
      emit(ctx, "pc", s, elapsed());
      return kOk;
    }
    if (reduce_cmd->parsed()) {
      const auto inst = read_set_cover_file(set_path);
      const auto fam = reduce(inst);
      write_family_file(out_path, fam);
      const auto counts = reduction_counts(inst);
      const auto cover = optimal_cover(inst);
      s["input_digest"] = hex64(family_digest(fam));
      s["rules"] = fam.size();
      s["rules_by_index_ranges"] = counts.rules;
      s["rules_by_prose_count"] = counts.prose_rules;
      s["total_sites"] = fam.total_sites();
      s["diameter"] = fam.diameter();
      s["optimal_cover_size"] = cover.size();
      json cj = json::array();
      for (auto i : cover) cj.push_back(i + 1);
      s["optimal_cover"] = cj;
      s["predicted_alpha"] = predicted_alpha(inst);
      if (verify) {
        const auto budget = reduction_budget(inst);
        const auto ub = verify_reduction_upper_bound(inst, budget);
        const auto ctl = run_reduction_control(inst, budget);
        s["upper_bound_verified"] = ub.verified;
        s["upper_bound_status"] = to_string(ub.status);
        s["witness_size"] = ub.seed.size();
        s["control_status"] = to_string(ctl.status);
        s["w_rigidity"] = check_w_rigidity(inst);
      }
      emit(ctx, "reduce", s, elapsed());
      return kOk;
    }
    if (gen_cmd->parsed()) {
      if (list) {
        s["families"] = named_family_list();
        emit(ctx, "gen", s, elapsed());
        return kOk;
      }
      if (gen_name.empty() || out_path.empty()) throw PreconditionError("gen needs NAME and -o FILE");
      const auto fam = named_family_from_spec(gen_name);
      write_family_file(out_path, fam);
      s["name"] = gen_name;
      s["input_digest"] = hex64(family_digest(fam));
      s["rules"] = fam.size();
      s["diameter"] = fam.diameter();
      emit(ctx, "gen", s, elapsed());
      return kOk;
    }
    if (vc_cmd->parsed()) {
      const auto fam = load_family(family_path, s);
      const auto check = verify_certificate_file(fam.family, cert_path);
      s["ok"] = check.ok;
      s["entries"] = check.entries;
      s["witnesses_replayed"] = check.witnesses_replayed;
      s["messages"] = check.messages;
      emit(ctx, "verify-cert", s, elapsed());
      return check.ok ? kOk : kFailure;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const StateError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace bootperc::cli
