// Command-line front end: parse literals, dispatch to the library, emit
// reports as JSON or CSV. Exit codes: 0 success/pass, 1 fail, 2 usage
// error, 3 inconclusive.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynsense/analysis.hpp"
#include "dynsense/experiments.hpp"
#include "dynsense/text.hpp"
#include "dynsense/version.hpp"

namespace {

using dynsense::Dyadic;
using dynsense::UsageError;
using json = nlohmann::ordered_json;
namespace text = dynsense::text;
namespace sys = dynsense::systems;
namespace ana = dynsense::analysis;
namespace exp = dynsense::experiments;

struct GlobalOpts {
  unsigned bits = 64;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  bool no_timing = false;
};

/// Writes the report atomically (temp file + rename) when --out is given,
/// otherwise to stdout.
void emit(const GlobalOpts& g, const std::string& payload) {
  if (g.out.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << "\n";
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(g.out);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot open output file " + tmp.string());
    f << payload;
    if (!payload.empty() && payload.back() != '\n') f << "\n";
  }
  fs::rename(tmp, target);
}

Dyadic parse_delta(const GlobalOpts& g, const std::string& s, bool& rounded) {
  const auto d = text::parse_dyadic(s, g.bits);
  rounded = d.rounded;
  if (d.value.is_zero()) throw UsageError("delta must be positive");
  return d.value;
}

json profile_json(const dynsense::families::FamilyProfile& p,
                  const dynsense::families::WindowSet& s) {
  json j;
  j["set"] = text::format_window_set(s);
  j["cardinality"] = p.cardinality;
  j["max_block_length"] = p.max_block_length;
  if (p.syndetic_bound)
    j["syndetic_bound"] = *p.syndetic_bound;
  else
    j["syndetic_bound"] = nullptr;
  j["max_ip_length"] = p.max_ip_length;
  j["max_diff_length"] = p.max_diff_length;
  json w = json::object();
  if (p.block_witness) w["block"] = text::format_witness(*p.block_witness);
  if (p.syndetic_witness) w["syndetic"] = text::format_witness(*p.syndetic_witness);
  if (p.ip_witness) w["ip"] = text::format_witness(*p.ip_witness);
  if (p.diff_witness) w["diff"] = text::format_witness(*p.diff_witness);
  j["witnesses"] = w;
  json caps;
  caps["max_ip_length"] = p.caps.max_ip_length;
  caps["max_diff_length"] = p.caps.max_diff_length;
  j["caps"] = caps;
  return j;
}

std::string to_csv_rows(const json& j, const std::string& prefix = "") {
  std::string out;
  for (const auto& [key, value] : j.items()) {
    const std::string label = prefix.empty() ? key : prefix + ":" + key;
    if (value.is_object() || value.is_array()) {
      out += to_csv_rows(value, label);
    } else {
      out += label + "," +
             (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
    }
  }
  return out;
}

void emit_json_or_csv(const GlobalOpts& g, const json& j) {
  if (g.format == "csv")
    emit(g, to_csv_rows(j));
  else
    emit(g, j.dump(2));
}

int cmd_analyze_set(const GlobalOpts& g, const std::string& set_literal, int ip_cap,
                    int diff_cap) {
  const auto s = text::parse_window_set(set_literal);
  dynsense::families::SearchCaps caps;
  caps.max_ip_length = ip_cap;
  caps.max_diff_length = diff_cap;
  const auto profile = dynsense::families::classify_window(s, caps);
  emit_json_or_csv(g, profile_json(profile, s));
  return 0;
}

int cmd_orbit(const GlobalOpts& g, const std::string& system_lit,
              const std::string& point_lit, std::int64_t window) {
  const auto spec = text::parse_system_literal(system_lit, g.bits);
  std::string out;
  if (spec.kind == text::SystemSpec::Kind::rotation) {
    const sys::RotationSystem rot(spec.alpha);
    auto cur = rot.cursor(text::parse_circle_point(point_lit, g.bits));
    out += "n,x\n";
    for (std::int64_t n = 0; n < window; ++n, cur.advance())
      out += std::to_string(n) + "," + text::format_circle_point(cur.value()) + "\n";
  } else if (spec.kind == text::SystemSpec::Kind::skew) {
    const sys::SkewSystem sk(spec.alpha, spec.dim);
    auto cur = sk.cursor(text::parse_torus_point(point_lit, g.bits, spec.dim));
    out += "n";
    for (int j = 0; j < spec.dim; ++j) out += ",c" + std::to_string(j);
    out += "\n";
    for (std::int64_t n = 0; n < window; ++n, cur.advance()) {
      out += std::to_string(n);
      for (int j = 0; j < spec.dim; ++j)
        out += "," + text::format_circle_point(cur.value().coord(j));
      out += "\n";
    }
  } else {
    const sys::MorseShift shift;
    auto cur = shift.cursor(text::parse_symbolic_point(point_lit));
    out += "n,symbol\n";
    for (std::int64_t n = 0; n < window; ++n, cur.advance())
      out += std::to_string(n) + "," +
             std::to_string(sys::symbolic_eval(cur.value(), 0)) + "\n";
  }
  emit(g, out);
  return 0;
}

json divergence_json(const ana::DivergenceProfile& prof, bool delta_rounded) {
  json j;
  j["delta"] = text::format_dyadic(prof.delta);
  j["delta_rounded"] = delta_rounded;
  j["n_back"] = prof.n_back;
  j["n_forward"] = prof.n_forward;
  j["derived"] = text::format_window_set(prof.exceed);
  j["ambiguity_count"] = prof.ambiguity_count;
  json d = json::array();
  for (const auto& mv : prof.distances) d.push_back(text::format_metric_value(mv));
  j["distances"] = d;
  return j;
}

int cmd_diverge(const GlobalOpts& g, const std::string& system_lit,
                const std::string& x_lit, const std::string& y_lit,
                const std::string& delta_lit, std::int64_t window,
                std::int64_t back, std::int64_t scan_radius) {
  const auto spec = text::parse_system_literal(system_lit, g.bits);
  bool rounded = false;
  const Dyadic delta = parse_delta(g, delta_lit, rounded);
  ana::DivergenceProfile prof;
  if (spec.kind == text::SystemSpec::Kind::rotation) {
    const sys::RotationSystem rot(spec.alpha);
    prof = ana::divergence_profile(rot, text::parse_circle_point(x_lit, g.bits),
                                   text::parse_circle_point(y_lit, g.bits), delta,
                                   window, back);
  } else if (spec.kind == text::SystemSpec::Kind::skew) {
    const sys::SkewSystem sk(spec.alpha, spec.dim);
    prof = ana::divergence_profile(sk, text::parse_torus_point(x_lit, g.bits, spec.dim),
                                   text::parse_torus_point(y_lit, g.bits, spec.dim),
                                   delta, window, back);
  } else {
    const sys::MorseShift shift(scan_radius);
    prof = ana::divergence_profile(shift, text::parse_symbolic_point(x_lit),
                                   text::parse_symbolic_point(y_lit), delta, window,
                                   back);
  }
  emit_json_or_csv(g, divergence_json(prof, rounded));
  return 0;
}

int cmd_sense(const GlobalOpts& g, const std::string& system_lit,
              const std::string& nbhd_lit, const std::string& delta_lit,
              std::int64_t window, int grid, std::int64_t scan_radius) {
  const auto spec = text::parse_system_literal(system_lit, g.bits);
  bool rounded = false;
  const Dyadic delta = parse_delta(g, delta_lit, rounded);
  dynsense::families::WindowSet s;
  if (spec.kind == text::SystemSpec::Kind::rotation) {
    const sys::RotationSystem rot(spec.alpha);
    s = ana::sensitivity_set(rot, text::parse_circle_ball(nbhd_lit, g.bits), delta,
                             window, grid);
  } else if (spec.kind == text::SystemSpec::Kind::skew) {
    const sys::SkewSystem sk(spec.alpha, spec.dim);
    s = ana::sensitivity_set(sk, text::parse_torus_ball(nbhd_lit, g.bits, spec.dim),
                             delta, window, grid);
  } else {
    const sys::MorseShift shift(scan_radius);
    s = ana::sensitivity_set(shift, text::parse_cylinder(nbhd_lit), delta, window,
                             grid);
  }
  json j;
  j["delta"] = text::format_dyadic(delta);
  j["delta_rounded"] = rounded;
  j["window"] = window;
  j["set"] = text::format_window_set(s);
  j["max_block_length"] = dynsense::families::max_block_length(s);
  emit_json_or_csv(g, j);
  return 0;
}

template <class System>
int rp_search_run(const GlobalOpts& g, const System& system,
                  const typename System::Point& x, const typename System::Point& y,
                  int order, const Dyadic& delta, std::int64_t bound, int grid,
                  const std::function<std::string(const typename System::Point&)>&
                      format_point) {
  const auto witness = ana::rp_witness_search(system, x, y, order, delta, bound, grid);
  json j;
  j["order"] = order;
  j["delta"] = text::format_dyadic(delta);
  j["bound"] = bound;
  if (!witness) {
    j["witness"] = nullptr;
    j["note"] = "absence within budget is inconclusive";
    emit_json_or_csv(g, j);
    return 3;
  }
  json w;
  w["x_prime"] = format_point(witness->x_prime);
  w["y_prime"] = format_point(witness->y_prime);
  w["times"] = witness->times;
  json combos = json::array();
  for (const auto& [eps, mv] : witness->combos) {
    std::string bits;
    for (const int b : eps) bits.push_back(static_cast<char>('0' + b));
    combos.push_back({{"eps", bits}, {"distance", text::format_metric_value(mv)}});
  }
  w["combos"] = combos;
  j["witness"] = w;
  emit_json_or_csv(g, j);
  return 0;
}

int cmd_rp_search(const GlobalOpts& g, const std::string& system_lit,
                  const std::string& x_lit, const std::string& y_lit, int order,
                  const std::string& delta_lit, std::int64_t bound, int grid) {
  const auto spec = text::parse_system_literal(system_lit, g.bits);
  bool rounded = false;
  const Dyadic delta = parse_delta(g, delta_lit, rounded);
  if (spec.kind == text::SystemSpec::Kind::rotation) {
    const sys::RotationSystem rot(spec.alpha);
    return rp_search_run<sys::RotationSystem>(
        g, rot, text::parse_circle_point(x_lit, g.bits),
        text::parse_circle_point(y_lit, g.bits), order, delta, bound, grid,
        [](const sys::CircleCoord& p) { return text::format_circle_point(p); });
  }
  if (spec.kind == text::SystemSpec::Kind::skew) {
    const sys::SkewSystem sk(spec.alpha, spec.dim);
    return rp_search_run<sys::SkewSystem>(
        g, sk, text::parse_torus_point(x_lit, g.bits, spec.dim),
        text::parse_torus_point(y_lit, g.bits, spec.dim), order, delta, bound, grid,
        [](const sys::TorusPoint& p) { return text::format_torus_point(p); });
  }
  throw UsageError("rp-search supports rotation and skew systems");
}

int cmd_verify(const GlobalOpts& g, const std::string& name,
               const std::vector<std::string>& raw_params) {
  exp::Params params;
  for (const auto& kv : raw_params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw UsageError("--param expects key=value, got '" + kv + "'");
    params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }

  std::vector<exp::Report> reports;
  if (!name.empty()) {
    reports.push_back(exp::run_experiment(name, params, g.seed));
  } else {
    if (!params.empty())
      throw UsageError("--param requires naming a single experiment");
    for (const auto& n : exp::experiment_names())
      reports.push_back(exp::run_experiment(n, {}, g.seed));
  }

  std::string payload;
  if (g.format == "csv") {
    for (const auto& r : reports) payload += exp::report_csv(r, !g.no_timing);
  } else if (reports.size() == 1) {
    payload = exp::report_json(reports.front(), !g.no_timing);
  } else {
    payload = "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      payload += exp::report_json(reports[i], !g.no_timing);
      if (i + 1 < reports.size()) payload += ",";
      payload += "\n";
    }
    payload += "]";
  }
  emit(g, payload);

  bool any_fail = false;
  bool any_inconclusive = false;
  for (const auto& r : reports) {
    any_fail |= r.verdict == exp::Verdict::fail;
    any_inconclusive |= r.verdict == exp::Verdict::inconclusive;
    std::cerr << r.experiment << ": " << exp::verdict_name(r.verdict) << " ("
              << r.runtime_ms << " ms)\n";
  }
  if (any_fail) return 1;
  if (any_inconclusive) return 3;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact finite-window combinatorics and dynamics experiments"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--bits", g.bits, "coordinate precision bits")
      ->check(CLI::IsMember({32, 64, 128}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "seed for all randomness")->capture_default_str();
  app.add_option("--out", g.out, "write the report to this file (atomic)");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_flag("--no-timing", g.no_timing,
               "report runtime_ms as 0 for byte-reproducible output");

  // analyze-set
  std::string set_literal;
  int ip_cap = 12;
  int diff_cap = 10;
  auto* analyze = app.add_subcommand("analyze-set", "family profile of a window set");
  analyze->add_option("set", set_literal, "window set, e.g. 1,2,3@8")->required();
  analyze->add_option("--ip-cap", ip_cap, "finite-IP search cap")
      ->capture_default_str();
  analyze->add_option("--diff-cap", diff_cap, "finite-difference search cap")
      ->capture_default_str();

  // orbit
  std::string system_lit;
  std::string point_lit;
  std::int64_t window = 1024;
  auto* orbit = app.add_subcommand("orbit", "orbit series of a point");
  orbit->add_option("system", system_lit, "rotation:<a> | skew:<d>:<a> | morse")
      ->required();
  orbit->add_option("point", point_lit, "starting point")->required();
  orbit->add_option("-n,--window", window, "number of steps")->capture_default_str();

  // diverge
  std::string x_lit;
  std::string y_lit;
  std::string delta_lit;
  std::int64_t back = 0;
  std::int64_t scan_radius = 64;
  auto* diverge = app.add_subcommand("diverge", "divergence profile of an orbit pair");
  diverge->add_option("system", system_lit, "system literal")->required();
  diverge->add_option("x", x_lit, "first point")->required();
  diverge->add_option("y", y_lit, "second point")->required();
  diverge->add_option("--delta", delta_lit, "distance threshold")->required();
  diverge->add_option("-n,--window", window, "forward window")->capture_default_str();
  diverge->add_option("--back", back, "backward window (invertible systems)")
      ->capture_default_str();
  diverge->add_option("--scan-radius", scan_radius, "symbolic metric scan radius")
      ->capture_default_str();

  // sense
  std::string nbhd_lit;
  int grid = 8;
  auto* sense = app.add_subcommand("sense", "sensitivity time set of a neighborhood");
  sense->add_option("system", system_lit, "system literal")->required();
  sense->add_option("neighborhood", nbhd_lit,
                    "ball:<point>:<radius> or cyl:<start>:<pattern>")
      ->required();
  sense->add_option("--delta", delta_lit, "separation threshold")->required();
  sense->add_option("-n,--window", window, "window length")->capture_default_str();
  sense->add_option("--grid", grid, "samples per axis")->capture_default_str();
  sense->add_option("--scan-radius", scan_radius, "symbolic metric scan radius")
      ->capture_default_str();

  // rp-search
  int order = 1;
  std::int64_t bound = 64;
  auto* rp = app.add_subcommand("rp-search", "regional-proximality witness search");
  rp->add_option("system", system_lit, "system literal")->required();
  rp->add_option("x", x_lit, "first point")->required();
  rp->add_option("y", y_lit, "second point")->required();
  rp->add_option("-d,--order", order, "order (number of times)")->required();
  rp->add_option("--delta", delta_lit, "closeness threshold")->required();
  rp->add_option("--bound", bound, "time box bound")->capture_default_str();
  rp->add_option("--grid", grid, "samples per axis")->capture_default_str();

  // verify
  std::string experiment;
  std::vector<std::string> raw_params;
  auto* verify = app.add_subcommand("verify", "run a named experiment (or all)");
  verify->add_option("experiment", experiment, "experiment name; omit to run all");
  verify->add_option("--param", raw_params, "experiment parameter key=value");

  // list
  auto* list = app.add_subcommand("list", "list registered experiments");

  // global flags remain usable after the subcommand name
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) return cmd_analyze_set(g, set_literal, ip_cap, diff_cap);
    if (orbit->parsed()) return cmd_orbit(g, system_lit, point_lit, window);
    if (diverge->parsed())
      return cmd_diverge(g, system_lit, x_lit, y_lit, delta_lit, window, back,
                         scan_radius);
    if (sense->parsed())
      return cmd_sense(g, system_lit, nbhd_lit, delta_lit, window, grid, scan_radius);
    if (rp->parsed())
      return cmd_rp_search(g, system_lit, x_lit, y_lit, order, delta_lit, bound, grid);
    if (verify->parsed()) return cmd_verify(g, experiment, raw_params);
    if (list->parsed()) {
      std::string names;
      for (const auto& n : exp::experiment_names()) names += n + "\n";
      emit(g, names);
      return 0;
    }
  } catch (const dynsense::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dynsense::ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dynsense::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
