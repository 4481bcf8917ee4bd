#include "kplab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kplab/capacity.hpp"
#include "kplab/config_space.hpp"
#include "kplab/costa.hpp"
#include "kplab/errors.hpp"
#include "kplab/flow.hpp"
#include "kplab/gauss_mixture.hpp"
#include "kplab/geo_volume.hpp"
#include "kplab/kp_verify.hpp"
#include "kplab/minty.hpp"
#include "kplab/report.hpp"
#include "kplab/rng.hpp"
#include "kplab/suite.hpp"

namespace kplab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "1.0.0";
constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Config plumbing
// ---------------------------------------------------------------------------

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> policy;
  std::optional<std::int64_t> samples;
  std::optional<double> tol;
};

struct CommandContext {
  std::string command;
  json config;
  CommonFlags flags;
  fs::path out_dir;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point t0;
};

json load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config file " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error("config parse error in " + path + ": " + e.what());
  }
}

void check_fields(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw Error(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed)
      if (it.key() == a) { known = true; break; }
    if (!known) {
      std::string msg =
          "unknown field \"" + it.key() + "\" in " + where + "; allowed:";
      for (const char* a : allowed) msg += std::string(" ") + a;
      throw Error(msg);
    }
  }
}

const json& require_field(const json& obj, const char* key,
                          const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw Error("missing required field \"" + std::string(key) + "\" in " + where);
  return *it;
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error(where + " must be a number");
  return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw Error(where + " must be an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_seed(const json& v, const std::string& where) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0))
    throw Error(where + " must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

// Entropy orders: positive numbers, or the string "inf" for the sup order.
double as_order(const json& v, const std::string& where) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "infinity") return kInf;
    throw Error(where + ": unrecognized order \"" + s + "\" (use a number or \"inf\")");
  }
  return as_double(v, where);
}

std::vector<double> as_order_list(const json& v, const std::string& where) {
  std::vector<double> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(as_order(v[i], where + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(as_order(v, where));
  }
  if (out.empty()) throw Error(where + " must not be empty");
  return out;
}

std::vector<double> as_double_list(const json& v, const std::string& where) {
  std::vector<double> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(as_double(v[i], where + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(as_double(v, where));
  }
  if (out.empty()) throw Error(where + " must not be empty");
  return out;
}

std::vector<std::vector<double>> as_rows(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty())
    throw Error(where + " must be a non-empty array of coordinate rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string rw = where + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) throw Error(rw + " must be an array of numbers");
    std::vector<double> row;
    for (std::size_t j = 0; j < v[i].size(); ++j)
      row.push_back(as_double(v[i][j], rw + "[" + std::to_string(j) + "]"));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd as_matrix(const json& v, const std::string& where) {
  const auto rows = as_rows(v, where);
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw Error(where + " rows must all have the same length");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::VectorXd as_vector(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty())
    throw Error(where + " must be a non-empty array of numbers");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out(i) = as_double(v[i], where + "[" + std::to_string(i) + "]");
  return out;
}

PointConfiguration parse_configuration(const json& j, const std::string& where) {
  check_fields(j, where, {"dim", "points", "weights"});
  const int dim =
      static_cast<int>(as_int(require_field(j, "dim", where), where + ".dim"));
  const auto points = as_rows(require_field(j, "points", where), where + ".points");
  std::vector<double> weights;
  if (j.contains("weights")) {
    for (const double w :
         as_double_list(j["weights"], where + ".weights"))
      weights.push_back(w);
  } else {
    weights.assign(points.size(), 1.0 / static_cast<double>(points.size()));
  }
  return validate_configuration(dim, points, weights);
}

ContractionMethod parse_method(const json& v, const std::string& where) {
  if (!v.is_string()) throw Error(where + " must be a string");
  const std::string s = v.get<std::string>();
  if (s == "scaling") return ContractionMethod::Scaling;
  if (s == "projection") return ContractionMethod::Projection;
  if (s == "composition") return ContractionMethod::Composition;
  if (s == "folding") return ContractionMethod::Folding;
  throw Error(where + ": unknown contraction method \"" + s +
              "\" (scaling, projection, composition, folding)");
}

ContractionPair parse_pair(const json& cfg, const PointConfiguration& source,
                           std::uint64_t fallback_seed) {
  const bool has_target = cfg.contains("target");
  const bool has_contraction = cfg.contains("contraction");
  if (has_target == has_contraction)
    throw Error("specify exactly one of \"target\" or \"contraction\"");
  if (has_target) {
    return make_contraction_pair(source,
                                 parse_configuration(cfg["target"], "target"));
  }
  const json& c = cfg["contraction"];
  check_fields(c, "contraction", {"method", "seed"});
  const ContractionMethod method =
      parse_method(require_field(c, "method", "contraction"), "contraction.method");
  const std::uint64_t seed = c.contains("seed")
                                 ? as_seed(c["seed"], "contraction.seed")
                                 : fallback_seed;
  return random_contraction(source, method, seed);
}

QuadratureSpec parse_grid(const json& cfg) {
  QuadratureSpec spec;
  if (cfg.contains("grid_points")) {
    spec.points_per_axis =
        static_cast<int>(as_int(cfg["grid_points"], "grid_points"));
    if (spec.points_per_axis < 3) throw Error("grid_points must be at least 3");
  }
  if (cfg.contains("grid_padding")) {
    spec.padding_sigmas = as_double(cfg["grid_padding"], "grid_padding");
    if (!(spec.padding_sigmas > 0.0)) throw Error("grid_padding must be positive");
  }
  return spec;
}

PolicyKind parse_policy_kind(const std::string& s) {
  if (s == "auto") return PolicyKind::Auto;
  if (s == "quadrature") return PolicyKind::Quadrature;
  if (s == "mc") return PolicyKind::MonteCarlo;
  throw Error("unknown policy \"" + s + "\" (auto, quadrature, mc)");
}

EstimatorPolicy parse_policy(const CommandContext& ctx) {
  EstimatorPolicy policy;
  policy.seed = ctx.seed;
  policy.grid = parse_grid(ctx.config);
  if (ctx.config.contains("policy"))
    policy.kind = parse_policy_kind(ctx.config["policy"].get<std::string>());
  if (ctx.flags.policy) policy.kind = parse_policy_kind(*ctx.flags.policy);
  if (ctx.config.contains("samples"))
    policy.mc_samples = as_int(ctx.config["samples"], "samples");
  if (ctx.flags.samples) policy.mc_samples = *ctx.flags.samples;
  return policy;
}

double resolve_tol(const CommandContext& ctx, double fallback) {
  if (ctx.flags.tol) return *ctx.flags.tol;
  if (ctx.config.contains("tol")) return as_double(ctx.config["tol"], "tol");
  return fallback;
}

CommandContext make_context(const std::string& command,
                            const std::string& config_path,
                            const CommonFlags& flags) {
  CommandContext ctx;
  ctx.command = command;
  ctx.t0 = std::chrono::steady_clock::now();
  ctx.config = config_path.empty() ? json::object() : load_config_file(config_path);
  if (!ctx.config.is_object())
    throw Error("top-level config must be a JSON object");
  ctx.flags = flags;
  if (flags.seed)
    ctx.seed = *flags.seed;
  else if (ctx.config.contains("seed"))
    ctx.seed = as_seed(ctx.config["seed"], "seed");
  std::string out = "kplab-out";
  if (ctx.config.contains("out")) {
    if (!ctx.config["out"].is_string()) throw Error("out must be a string");
    out = ctx.config["out"].get<std::string>();
  }
  if (flags.out) out = *flags.out;
  ctx.out_dir = out;
  return ctx;
}

void emit_table(CommandContext& ctx, const CsvTable& table, const char* name) {
  table.write(ctx.out_dir / name);
  ctx.outputs.push_back(name);
  std::cout << "wrote " << (ctx.out_dir / name).string() << " (" << table.rows()
            << " rows)\n";
}

void write_manifest(const CommandContext& ctx) {
  json manifest;
  manifest["command"] = ctx.command;
  manifest["config"] = ctx.config;
  manifest["seed"] = ctx.seed;
  json flags = json::object();
  if (ctx.flags.seed) flags["seed"] = *ctx.flags.seed;
  if (ctx.flags.out) flags["out"] = *ctx.flags.out;
  if (ctx.flags.policy) flags["policy"] = *ctx.flags.policy;
  if (ctx.flags.samples) flags["samples"] = *ctx.flags.samples;
  if (ctx.flags.tol) flags["tol"] = *ctx.flags.tol;
  manifest["flags"] = flags;
  manifest["versions"] = {
      {"tool", kVersion},
      {"compiler", __VERSION__},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)}};
  manifest["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.t0)
          .count();
  manifest["outputs"] = ctx.outputs;
  fs::create_directories(ctx.out_dir);
  std::ofstream f(ctx.out_dir / "manifest.json", std::ios::binary);
  if (!f) throw Error("cannot write manifest to " + ctx.out_dir.string());
  f << manifest.dump(2) << "\n";
}

constexpr std::initializer_list<const char*> kCommonKeys = {
    "seed", "out", "policy", "samples", "grid_points", "grid_padding", "tol"};

std::vector<const char*> with_common(std::initializer_list<const char*> extra) {
  std::vector<const char*> keys(kCommonKeys);
  keys.insert(keys.end(), extra.begin(), extra.end());
  return keys;
}

void check_command_fields(const json& cfg,
                          std::initializer_list<const char*> extra) {
  const auto keys = with_common(extra);
  if (!cfg.is_object()) throw Error("config must be a JSON object");
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    bool known = false;
    for (const char* a : keys)
      if (it.key() == a) { known = true; break; }
    if (!known) {
      std::string msg = "unknown field \"" + it.key() + "\" in config; allowed:";
      for (const char* a : keys) msg += std::string(" ") + a;
      throw Error(msg);
    }
  }
}

// ---------------------------------------------------------------------------
// Command handlers
// ---------------------------------------------------------------------------

int handle_entropy(CommandContext& ctx) {
  check_command_fields(ctx.config, {"config", "orders", "noise"});
  const PointConfiguration config =
      parse_configuration(require_field(ctx.config, "config", "config"), "config");
  const std::vector<double> orders =
      ctx.config.contains("orders")
          ? as_order_list(ctx.config["orders"], "orders")
          : std::vector<double>{1.0};
  const std::vector<double> noises =
      ctx.config.contains("noise") ? as_double_list(ctx.config["noise"], "noise")
                                   : std::vector<double>{1.0};
  CsvTable table({"alpha", "s", "value", "std_err", "method", "metadata",
                  "seed", "note"});
  int errors = 0, rows = 0;
  std::uint64_t row_index = 0;
  for (const double s : noises) {
    if (!(s > 0.0)) throw Error("noise variances must be positive");
    const GaussianMixture m = GaussianMixture::isotropic(config, s);
    for (const double alpha : orders) {
      EstimatorPolicy policy = parse_policy(ctx);
      policy.seed = derive_seed(ctx.seed, "entropy-row", row_index++);
      ++rows;
      try {
        const EntropyEstimate est = estimate_entropy(m, alpha, policy);
        table.add_row({csv_num(alpha), csv_num(s), csv_num(est.value),
                       csv_num(est.std_err), method_name(est.method),
                       est.metadata, std::to_string(est.seed), ""});
      } catch (const Error& e) {
        ++errors;
        table.add_row({csv_num(alpha), csv_num(s), csv_num(std::nan("")),
                       csv_num(0.0), "error", "", "0", e.what()});
      }
    }
  }
  emit_table(ctx, table, "entropy.csv");
  std::cout << "entropy rows: " << rows << ", errors: " << errors << "\n";
  return (rows > 0 && errors == rows) ? 1 : 0;
}

int handle_kp_verify(CommandContext& ctx) {
  check_command_fields(ctx.config,
                       {"source", "target", "contraction", "orders", "noise"});
  const PointConfiguration source =
      parse_configuration(require_field(ctx.config, "source", "config"), "source");
  const ContractionPair pair =
      parse_pair(ctx.config, source, derive_seed(ctx.seed, "contraction", 0));
  const std::vector<double> orders =
      ctx.config.contains("orders")
          ? as_order_list(ctx.config["orders"], "orders")
          : std::vector<double>{0.5, 1.0, 2.0, 3.0, kInf};
  const std::vector<double> noises =
      ctx.config.contains("noise") ? as_double_list(ctx.config["noise"], "noise")
                                   : std::vector<double>{0.25, 1.0, 4.0};
  const EstimatorPolicy policy = parse_policy(ctx);
  const double tol = resolve_tol(ctx, 1e-6);
  const KpReport report =
      verify_kp_entropy(pair, orders, noises, policy, "cli", tol);
  CsvTable table({"alpha", "s", "h_source", "h_target", "gap", "std_err",
                  "method", "verdict", "note"});
  int holds = 0, noise_rows = 0, violations = 0, skipped = 0;
  for (const KpRow& row : report.rows) {
    switch (row.verdict) {
      case Verdict::Holds: ++holds; break;
      case Verdict::HoldsWithinNoise: ++noise_rows; break;
      case Verdict::Violation: ++violations; break;
      case Verdict::Skipped: ++skipped; break;
    }
    table.add_row({csv_num(row.order), csv_num(row.noise),
                   csv_num(row.source.value), csv_num(row.target.value),
                   csv_num(row.gap), csv_num(row.combined_std_err),
                   method_name(row.source.method), verdict_name(row.verdict),
                   row.note});
  }
  emit_table(ctx, table, "kp_verify.csv");
  std::cout << "Lipschitz bound " << report.lipschitz_bound << "; rows "
            << report.rows.size() << ": holds " << holds << ", within-noise "
            << noise_rows << ", violations " << violations << ", skipped "
            << skipped << "\n";
  return violations > 0 ? 2 : 0;
}

int handle_flow(CommandContext& ctx) {
  check_command_fields(ctx.config, {"source", "target", "contraction",
                                    "functionals", "noise", "t_points"});
  const PointConfiguration source =
      parse_configuration(require_field(ctx.config, "source", "config"), "source");
  const ContractionPair pair =
      parse_pair(ctx.config, source, derive_seed(ctx.seed, "contraction", 0));
  const BezdekConnellyLift lift(pair);
  const double s = ctx.config.contains("noise")
                       ? as_double(ctx.config["noise"], "noise")
                       : 1.0;
  if (!(s > 0.0)) throw Error("noise must be positive");
  int t_points = 21;
  if (ctx.config.contains("t_points"))
    t_points = static_cast<int>(as_int(ctx.config["t_points"], "t_points"));
  if (t_points < 2) throw Error("t_points must be at least 2");
  std::vector<double> t_grid(t_points);
  for (int j = 0; j < t_points; ++j)
    t_grid[j] = static_cast<double>(j) / (t_points - 1);

  std::vector<ConvexFunctionalSpec> functionals;
  std::vector<std::string> labels;
  if (ctx.config.contains("functionals")) {
    const json& fns = ctx.config["functionals"];
    if (!fns.is_array() || fns.empty())
      throw Error("functionals must be a non-empty array");
    for (std::size_t i = 0; i < fns.size(); ++i) {
      const std::string where = "functionals[" + std::to_string(i) + "]";
      check_fields(fns[i], where, {"kind", "param"});
      const json& kind_v = require_field(fns[i], "kind", where);
      if (!kind_v.is_string()) throw Error(where + ".kind must be a string");
      const std::string kind = kind_v.get<std::string>();
      if (kind == "power") {
        const double p = fns[i].contains("param")
                             ? as_double(fns[i]["param"], where + ".param")
                             : 2.0;
        functionals.push_back(ConvexFunctionalSpec::power(p));
        labels.push_back("power(" + csv_num(p) + ")");
      } else if (kind == "xlogx") {
        functionals.push_back(ConvexFunctionalSpec::xlogx());
        labels.push_back("xlogx");
      } else if (kind == "hockey-stick") {
        const double c = as_double(require_field(fns[i], "param", where),
                                   where + ".param");
        functionals.push_back(ConvexFunctionalSpec::hockey_stick(c));
        labels.push_back("hockey-stick(" + csv_num(c) + ")");
      } else {
        throw Error(where + ": unknown functional kind \"" + kind +
                    "\" (power, xlogx, hockey-stick)");
      }
    }
  } else {
    functionals = {ConvexFunctionalSpec::power(2.0),
                   ConvexFunctionalSpec::xlogx()};
    labels = {"power(2)", "xlogx"};
  }

  const double floor_tol = resolve_tol(ctx, 1e-8);
  CsvTable table({"functional", "t", "value", "std_err", "step", "verdict"});
  int violations = 0;
  for (std::size_t fi = 0; fi < functionals.size(); ++fi) {
    EstimatorPolicy policy = parse_policy(ctx);
    policy.seed = derive_seed(ctx.seed, "flow-functional", fi);
    const auto series =
        functional_along_flow(lift, functionals[fi], s, t_grid, policy);
    for (std::size_t j = 0; j < series.size(); ++j) {
      std::string verdict = "-";
      double step = 0.0;
      if (j > 0) {
        step = series[j].value - series[j - 1].value;
        const double step_se =
            std::hypot(series[j].std_err, series[j - 1].std_err);
        const double allowance = std::max(floor_tol, 3.0 * step_se);
        if (step < -allowance) {
          verdict = verdict_name(Verdict::Violation);
          ++violations;
        } else {
          verdict = verdict_name(step >= 0.0 ? Verdict::Holds
                                             : Verdict::HoldsWithinNoise);
        }
      }
      table.add_row({labels[fi], csv_num(series[j].t), csv_num(series[j].value),
                     csv_num(series[j].std_err), csv_num(step), verdict});
    }
  }
  emit_table(ctx, table, "flow.csv");

  // Velocity diagnostics along the same grid.
  CsvTable vel({"t", "max_pairwise_inner", "max_divergence"});
  double worst_inner = -kInf, worst_div = -kInf;
  for (const double t : t_grid) {
    const double inner = velocity_monotonicity_max(lift, {t});
    const GaussianMixture state = smoothed_state(lift, t, s);
    double max_div = -kInf;
    const std::uint64_t pt_seed =
        derive_seed(ctx.seed, "flow-divergence", static_cast<std::uint64_t>(t * 1e6));
    for (int p = 0; p < 20; ++p) {
      const Eigen::VectorXd x = state.sample(pt_seed, p);
      max_div = std::max(max_div, convolved_divergence(lift, t, x, s));
    }
    worst_inner = std::max(worst_inner, inner);
    worst_div = std::max(worst_div, max_div);
    vel.add_row({csv_num(t), csv_num(inner), csv_num(max_div)});
  }
  emit_table(ctx, vel, "flow_velocity.csv");
  std::cout << "functional steps checked: "
            << functionals.size() * (t_grid.size() - 1) << ", violations "
            << violations << "; max pairwise inner " << worst_inner
            << ", max divergence " << worst_div << "\n";
  return violations > 0 ? 2 : 0;
}

int handle_minty(CommandContext& ctx) {
  check_command_fields(ctx.config, {"xs", "ys", "x0"});
  const Eigen::MatrixXd xs = as_matrix(require_field(ctx.config, "xs", "config"), "xs");
  const Eigen::MatrixXd ys = as_matrix(require_field(ctx.config, "ys", "config"), "ys");
  const Eigen::VectorXd x0 = as_vector(require_field(ctx.config, "x0", "config"), "x0");
  if (xs.rows() != ys.rows() || xs.cols() != ys.cols())
    throw Error("xs and ys must have the same shape");
  if (x0.size() != xs.cols())
    throw Error("x0 must have the same dimension as the xs rows");
  const MonotonePairs pairs(xs, ys);
  const Eigen::VectorXd y0 = extend_monotone(pairs, x0);
  const double tol = resolve_tol(ctx, 1e-9);
  CsvTable table({"kind", "index", "value"});
  for (int j = 0; j < y0.size(); ++j)
    table.add_row({"extension", std::to_string(j), csv_num(y0(j))});
  double min_inner = kInf;
  for (int i = 0; i < xs.rows(); ++i) {
    const double inner =
        (x0 - xs.row(i).transpose()).dot(y0 - ys.row(i).transpose());
    min_inner = std::min(min_inner, inner);
    table.add_row({"constraint", std::to_string(i), csv_num(inner)});
  }
  emit_table(ctx, table, "minty.csv");
  std::cout << "extension found; minimum constraint inner product " << min_inner
            << "\n";
  if (min_inner < -tol) {
    std::cerr << "error: extension violates a constraint beyond tolerance "
              << tol << "\n";
    return 1;
  }
  return 0;
}

int handle_costa(CommandContext& ctx) {
  check_command_fields(ctx.config, {"config", "bandwidth", "map", "s_grid",
                                    "s_lo", "s_hi", "s_points", "beta_points"});
  const PointConfiguration base =
      parse_configuration(require_field(ctx.config, "config", "config"), "config");
  const double s0 = ctx.config.contains("bandwidth")
                        ? as_double(ctx.config["bandwidth"], "bandwidth")
                        : 0.0;
  std::optional<Eigen::MatrixXd> map;
  if (ctx.config.contains("map")) map = as_matrix(ctx.config["map"], "map");
  const SmoothedConfig x = map ? SmoothedConfig(base, s0, *map)
                               : SmoothedConfig(base, s0);

  std::vector<double> s_grid;
  if (ctx.config.contains("s_grid")) {
    if (ctx.config.contains("s_lo") || ctx.config.contains("s_hi") ||
        ctx.config.contains("s_points"))
      throw Error("use either s_grid or s_lo/s_hi/s_points, not both");
    s_grid = as_double_list(ctx.config["s_grid"], "s_grid");
  } else {
    const double lo = ctx.config.contains("s_lo")
                          ? as_double(ctx.config["s_lo"], "s_lo")
                          : 0.5;
    const double hi = ctx.config.contains("s_hi")
                          ? as_double(ctx.config["s_hi"], "s_hi")
                          : 4.0;
    const int pts = ctx.config.contains("s_points")
                        ? static_cast<int>(as_int(ctx.config["s_points"], "s_points"))
                        : 8;
    if (pts < 3) throw Error("s_points must be at least 3");
    if (!(hi > lo)) throw Error("s_hi must exceed s_lo");
    for (int j = 0; j < pts; ++j)
      s_grid.push_back(lo + (hi - lo) * j / (pts - 1));
  }
  int beta_points = 11;
  if (ctx.config.contains("beta_points"))
    beta_points = static_cast<int>(as_int(ctx.config["beta_points"], "beta_points"));
  if (beta_points < 2) throw Error("beta_points must be at least 2");

  const EstimatorPolicy policy = parse_policy(ctx);
  const double floor_tol = resolve_tol(ctx, 1e-9);
  CsvTable table({"series", "grid_value", "value", "std_err", "verdict"});
  int violations = 0;

  const CostaReport report = costa_concavity_report(x, s_grid, policy);
  for (std::size_t j = 0; j < s_grid.size(); ++j)
    table.add_row({"entropy_power", csv_num(s_grid[j]),
                   csv_num(report.entropy_power[j]),
                   csv_num(report.entropy_power_std_err[j]), "-"});
  for (std::size_t j = 0; j < report.second_difference.size(); ++j) {
    const double d2 = report.second_difference[j];
    const double allowance =
        std::max(floor_tol, 3.0 * report.second_difference_std_err[j]);
    std::string verdict;
    if (d2 > allowance) {
      verdict = verdict_name(Verdict::Violation);
      ++violations;
    } else {
      verdict = verdict_name(d2 <= 0.0 ? Verdict::Holds
                                       : Verdict::HoldsWithinNoise);
    }
    table.add_row({"second_difference", csv_num(s_grid[j + 1]), csv_num(d2),
                   csv_num(report.second_difference_std_err[j]), verdict});
  }

  if (s0 > 0.0) {
    std::vector<double> beta_grid(beta_points);
    for (int j = 0; j < beta_points; ++j)
      beta_grid[j] = static_cast<double>(j) / (beta_points - 1);
    const ABetaSeries series = a_beta_series(x, beta_grid, policy);
    for (std::size_t j = 0; j < series.beta.size(); ++j) {
      std::string verdict = "-";
      if (j > 0) {
        const double step = series.value[j] - series.value[j - 1];
        const double step_se =
            std::hypot(series.std_err[j], series.std_err[j - 1]);
        const double allowance = std::max(floor_tol, 3.0 * step_se);
        if (step < -allowance) {
          verdict = verdict_name(Verdict::Violation);
          ++violations;
        } else {
          verdict = verdict_name(step >= 0.0 ? Verdict::Holds
                                             : Verdict::HoldsWithinNoise);
        }
      }
      table.add_row({"a_beta", csv_num(series.beta[j]), csv_num(series.value[j]),
                     csv_num(series.std_err[j]), verdict});
    }
  }

  if (map) {
    const UnifiedInequalityResult res = unified_inequality_check(x, policy);
    if (res.verdict == Verdict::Violation) ++violations;
    table.add_row({"unified_gap", csv_num(res.lipschitz), csv_num(res.gap),
                   csv_num(res.std_err), verdict_name(res.verdict)});
  }

  emit_table(ctx, table, "costa.csv");
  std::cout << "series checks done; violations " << violations << "\n";
  return violations > 0 ? 2 : 0;
}

int handle_capacity(CommandContext& ctx) {
  check_command_fields(ctx.config, {"alphabet", "noise", "max_iter", "target",
                                    "contraction"});
  const PointConfiguration alphabet =
      parse_configuration(require_field(ctx.config, "alphabet", "config"),
                          "alphabet");
  const double s = ctx.config.contains("noise")
                       ? as_double(ctx.config["noise"], "noise")
                       : 1.0;
  if (!(s > 0.0)) throw Error("noise must be positive");
  const double tol = resolve_tol(ctx, 1e-4);
  int max_iter = 500;
  if (ctx.config.contains("max_iter"))
    max_iter = static_cast<int>(as_int(ctx.config["max_iter"], "max_iter"));
  const EstimatorPolicy policy = parse_policy(ctx);

  CsvTable history({"role", "iteration", "mutual_information", "bracket_width"});
  CsvTable summary({"role", "capacity", "lower", "upper", "converged",
                    "gap", "verdict"});
  int code = 0;
  const auto add_history = [&history](const char* role, const CapacityResult& r) {
    for (const CapacityIteration& it : r.history)
      history.add_row({role, std::to_string(it.iteration),
                       csv_num(it.mutual_information),
                       csv_num(it.bracket_width)});
  };

  if (ctx.config.contains("target") || ctx.config.contains("contraction")) {
    const ContractionPair pair =
        parse_pair(ctx.config, alphabet, derive_seed(ctx.seed, "contraction", 0));
    const CapacityComparison cmp = capacity_contraction_check(
        pair, s, tol, policy.grid, policy.mc_samples, ctx.seed);
    add_history("source", cmp.source);
    add_history("target", cmp.target);
    summary.add_row({"source", csv_num(cmp.source.capacity),
                     csv_num(cmp.source.lower), csv_num(cmp.source.upper),
                     cmp.source.converged ? "1" : "0", "", "-"});
    summary.add_row({"target", csv_num(cmp.target.capacity),
                     csv_num(cmp.target.lower), csv_num(cmp.target.upper),
                     cmp.target.converged ? "1" : "0", "", "-"});
    summary.add_row({"comparison", "", "", "", "", csv_num(cmp.gap),
                     verdict_name(cmp.verdict)});
    std::cout << "capacity source " << cmp.source.capacity << ", target "
              << cmp.target.capacity << ", gap " << cmp.gap << " ("
              << verdict_name(cmp.verdict) << ")\n";
    if (cmp.verdict == Verdict::Violation) code = 2;
  } else {
    const CapacityResult res = blahut_arimoto(
        alphabet, s, tol, max_iter, policy.grid, policy.mc_samples, ctx.seed);
    add_history("alphabet", res);
    summary.add_row({"alphabet", csv_num(res.capacity), csv_num(res.lower),
                     csv_num(res.upper), res.converged ? "1" : "0", "", "-"});
    std::cout << "capacity " << res.capacity << " nats (bracket ["
              << res.lower << ", " << res.upper << "], "
              << (res.converged ? "converged" : "iteration limit") << ")\n";
  }
  emit_table(ctx, history, "capacity_history.csv");
  emit_table(ctx, summary, "capacity.csv");
  return code;
}

int handle_volume(CommandContext& ctx) {
  check_command_fields(ctx.config,
                       {"centers", "radius", "target", "contraction"});
  const Eigen::MatrixXd centers =
      as_matrix(require_field(ctx.config, "centers", "config"), "centers");
  const double radius =
      as_double(require_field(ctx.config, "radius", "config"), "radius");
  std::int64_t samples = 200000;
  if (ctx.config.contains("samples"))
    samples = as_int(ctx.config["samples"], "samples");
  if (ctx.flags.samples) samples = *ctx.flags.samples;

  CsvTable table({"role", "volume", "std_err", "gap", "verdict"});
  int code = 0;
  if (ctx.config.contains("target") || ctx.config.contains("contraction")) {
    const PointConfiguration source = PointConfiguration::uniform(
        static_cast<int>(centers.cols()), centers);
    const ContractionPair pair =
        parse_pair(ctx.config, source, derive_seed(ctx.seed, "contraction", 0));
    const GeoCheck check = kp_geometric_check(pair, radius, samples, ctx.seed);
    table.add_row({"source", csv_num(check.source.volume),
                   csv_num(check.source.std_err), "", "-"});
    table.add_row({"target", csv_num(check.target.volume),
                   csv_num(check.target.std_err), "", "-"});
    table.add_row({"comparison", "", csv_num(check.combined_std_err),
                   csv_num(check.gap), geo_verdict_name(check.verdict)});
    std::cout << "union volumes " << check.source.volume << " vs "
              << check.target.volume << "; gap " << check.gap << " ("
              << geo_verdict_name(check.verdict) << "); "
              << check.statement_status << "\n";
    if (check.verdict == GeoVerdict::Inconsistent) code = 2;
  } else {
    const BallUnion u(centers, radius);
    const VolumeEstimate est =
        union_volume_mc(u, samples, derive_seed(ctx.seed, "volume", 0));
    table.add_row({"union", csv_num(est.volume), csv_num(est.std_err), "", "-"});
    std::cout << "union volume " << est.volume << " +/- " << est.std_err
              << " (" << samples << " samples)\n";
  }
  emit_table(ctx, table, "volume.csv");
  return code;
}

int handle_suite(CommandContext& ctx) {
  check_fields(ctx.config, "config", {"seed", "out"});
  const SuiteResult result = run_suite(ctx.seed, ctx.out_dir);
  for (const CriterionResult& c : result.criteria) {
    std::cout << "check " << c.number << " " << c.name << ": "
              << (c.passed ? "PASS" : "FAIL") << " — " << c.detail << " ("
              << c.seconds << "s)\n";
    // Suite CSVs are written by run_suite itself; record them for the manifest.
  }
  ctx.outputs = {"oracle_agreement.csv", "entropy_contraction.csv",
                 "flow_monotonicity.csv", "flow_divergence.csv",
                 "velocity_monotonicity.csv", "monotone_extension.csv",
                 "concavity.csv", "unified_inequality.csv", "capacity.csv",
                 "geometry.csv", "summary.csv"};
  std::cout << (result.all_passed() ? "suite: all checks passed"
                                    : "suite: FAILURES present")
            << "\n";
  return result.all_passed() ? 0 : 2;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{
      "Deterministic verification of entropy, capacity and volume "
      "monotonicity under contractive maps"};
  app.name("kplab");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  struct SubArgs {
    std::string config;
    CommonFlags flags;
  };
  std::map<std::string, SubArgs> args;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"entropy", "Renyi entropies of a noisy configuration"},
      {"kp-verify", "entropy comparison across a contraction"},
      {"flow", "monotone functionals along the contracting flow"},
      {"minty", "monotone extension of finite data"},
      {"costa", "entropy-power concavity and the unified inequality"},
      {"capacity", "channel capacity and its contraction comparison"},
      {"volume", "union-of-balls volume comparison"},
      {"suite", "full verification battery"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    SubArgs& a = args[name];
    auto* cfg = sub->add_option("config", a.config, "JSON experiment config");
    cfg->check(CLI::ExistingFile);
    if (std::string(name) != "suite") cfg->required();
    sub->add_option("--seed", a.flags.seed, "master seed (overrides config)");
    sub->add_option("--out", a.flags.out, "output directory (overrides config)");
    sub->add_option("--policy", a.flags.policy,
                    "estimator policy: quadrature|mc|auto")
        ->check(CLI::IsMember({"quadrature", "mc", "auto"}));
    sub->add_option("--samples", a.flags.samples,
                    "Monte Carlo sample count (overrides config)");
    sub->add_option("--tol", a.flags.tol, "decision tolerance (overrides config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const SubArgs& a = args[name];
  try {
    CommandContext ctx = make_context(name, a.config, a.flags);
    int code = 0;
    if (name == "entropy") code = handle_entropy(ctx);
    else if (name == "kp-verify") code = handle_kp_verify(ctx);
    else if (name == "flow") code = handle_flow(ctx);
    else if (name == "minty") code = handle_minty(ctx);
    else if (name == "costa") code = handle_costa(ctx);
    else if (name == "capacity") code = handle_capacity(ctx);
    else if (name == "volume") code = handle_volume(ctx);
    else if (name == "suite") code = handle_suite(ctx);
    else throw Error("unknown command " + name);
    write_manifest(ctx);
    return code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace kplab
