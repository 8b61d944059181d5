#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kummer/verify.hpp"

using namespace kummer;
using nlohmann::json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << j.dump(2) << "\n";
}

struct Common {
  std::string curve_path;
  std::string config_path;
  std::string period_cache;
  double precision = 1e-12;
  json config = json::object();

  void load_config() {
    if (!config_path.empty()) config = read_json(config_path);
  }

  CurveSpec curve() const {
    if (!curve_path.empty()) return curve_from_json(read_json(curve_path));
    if (config.contains("curve")) {
      const json& c = config["curve"];
      return c.is_string() ? curve_from_json(read_json(c.get<std::string>())) : curve_from_json(c);
    }
    return default_curve();
  }

  PeriodData periods(const CurveSpec& c) const {
    std::string cache = period_cache.empty() ? config.value("period_cache", std::string()) : period_cache;
    if (cache.empty()) return compute_periods(c, precision);
    return load_or_compute_periods(c, precision, cache);
  }
};

void add_common(CLI::App* sub, Common& com) {
  sub->add_option("--curve", com.curve_path, "curve JSON {\"f\": [...], \"eta_index\": k}");
  sub->add_option("--config", com.config_path, "JSON config file");
  sub->add_option("--period-cache", com.period_cache, "period cache file");
}

json matrix_json(const MatXc& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < M.cols(); ++j) r.push_back(complex_to_json(M(i, j)));
    rows.push_back(r);
  }
  return rows;
}

int cmd_curve(const Common& com) {
  CurveSpec c = com.curve();
  json j = to_json(c);
  j["hash"] = curve_hash(c);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_periods(const Common& com, const std::string& out) {
  CurveSpec c = com.curve();
  write_json(out, to_json(com.periods(c)));
  return 0;
}

int cmd_coble(const Common& com, const std::string& out) {
  CurveSpec c = com.curve();
  PeriodData pd = com.periods(c);
  EmbeddingContext ctx(c, pd);
  const auto& C = ctx.coble();
  json j;
  j["curve_hash"] = curve_hash(c);
  j["form"] = to_json(C.fit.form);
  j["nullspace_gap"] = C.fit.gap;
  j["samples"] = C.sampling.samples;
  j["seed"] = C.sampling.seed;
  write_json(out, j);
  return 0;
}

int cmd_export(const Common& com, const std::string& out) {
  CurveSpec c = com.curve();
  PeriodData pd = com.periods(c);
  EmbeddingContext ctx(c, pd);
  json j;
  j["curve"] = to_json(c);
  j["periods"] = to_json(pd);
  j["coble"] = to_json(ctx.coble().fit.form);
  j["kummer_quartic"] = to_json(ctx.kummer_quartic().fit.form);
  json heis = json::array();
  for (int i = 0; i < 4; ++i) {
    int e[4] = {0, 0, 0, 0};
    e[i] = 1;
    json g;
    g["torsion"] = {e[0], e[1], e[2], e[3]};
    g["matrix"] = matrix_json(ctx.heisenberg(e[0], e[1], e[2], e[3]).M);
    heis.push_back(g);
  }
  j["heisenberg"] = heis;
  write_json(out, j);
  return 0;
}

struct VerifyArgs {
  std::string group = "all";
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::string json_out;
  std::vector<std::string> tols;
  bool quiet = false;
};

VerifyConfig make_config(const Common& com, const VerifyArgs& va) {
  VerifyConfig cfg;
  const json& c = com.config;
  if (c.contains("seed")) cfg.seed = c["seed"].get<std::uint64_t>();
  if (c.contains("samples")) cfg.samples = c["samples"].get<int>();
  if (c.contains("tolerances"))
    for (const auto& [k, v] : c["tolerances"].items()) cfg.tolerances[k] = v.get<double>();
  if (va.seed) cfg.seed = *va.seed;
  if (va.samples) cfg.samples = *va.samples;
  for (const auto& t : va.tols) {
    auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects name=value, got " + t);
    try {
      cfg.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("bad tolerance value in " + t);
    }
  }
  for (const auto& [name, v] : cfg.tolerances) {
    bool known = false;
    for (const auto& s : check_registry()) known = known || s.name == name;
    if (!known) throw UsageError("unknown check " + name);
  }
  return cfg;
}

int cmd_verify(const Common& com, const VerifyArgs& va) {
  if (!is_check_group(va.group)) throw UsageError("unknown group " + va.group);
  VerifyConfig cfg = make_config(com, va);
  CurveSpec c = com.curve();
  PeriodData pd = com.periods(c);
  EmbeddingOptions opts;
  opts.seed = cfg.seed;
  EmbeddingContext ctx(c, pd, opts);
  VerifyReport rep = run_checks(ctx, va.group, cfg);
  if (!va.quiet)
    for (const auto& r : rep.records)
      std::printf("%-4s %-38s n=%-4d worst=%.3e threshold=%.1e  %.2fs\n", r.pass ? "ok" : "FAIL", r.name.c_str(),
                  r.samples, r.worst_gap, r.threshold, r.wall_time);
  if (!va.json_out.empty()) write_json(va.json_out, to_json(rep));
  if (rep.all_pass()) return 0;
  for (const auto& r : rep.records)
    if (!r.pass) std::fprintf(stderr, "failed: %s (%s)\n", r.name.c_str(), r.note.c_str());
  return kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks on level-3 theta embeddings of genus-2 Jacobians"};
  app.require_subcommand(1);
  Common com;
  std::string out = "-";
  VerifyArgs va;

  auto* curve = app.add_subcommand("curve", "print the normalized curve");
  add_common(curve, com);

  auto* periods = app.add_subcommand("periods", "compute the period matrix");
  add_common(periods, com);
  periods->add_option("--precision", com.precision, "target precision");
  periods->add_option("--out", out, "output file, - for stdout");

  auto* coble = app.add_subcommand("coble", "fit the Coble cubic");
  add_common(coble, com);
  auto* coble_export = coble->add_subcommand("export", "write the cubic coefficients");
  coble_export->add_option("--out", out, "output file, - for stdout");

  auto* verify = app.add_subcommand("verify", "run a group of checks");
  add_common(verify, com);
  verify->add_option("group", va.group, "check group or all")->required();
  verify->add_option("--seed", va.seed, "random seed");
  verify->add_option("--samples", va.samples, "samples per check, overriding defaults");
  verify->add_option("--json", va.json_out, "write the report as JSON");
  verify->add_option("--tol", va.tols, "threshold override name=value")->take_all();
  verify->add_flag("--quiet", va.quiet, "suppress per-check lines");

  auto* exp = app.add_subcommand("export", "write curve, periods, fitted forms and Heisenberg matrices");
  add_common(exp, com);
  exp->add_option("--out", out, "output file, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    com.load_config();
    if (curve->parsed()) return cmd_curve(com);
    if (periods->parsed()) return cmd_periods(com, out);
    if (coble->parsed()) return cmd_coble(com, out);
    if (verify->parsed()) return cmd_verify(com, va);
    if (exp->parsed()) return cmd_export(com, out);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "error %s: %s\n", errc_name(e.code()), e.what());
    return kExitFail;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
  return kExitUsage;
}
