// balanced-embed: command-line front end for the balanced library.
//
// Subcommands: moment, balance, continuity, stability, chow-weight,
// make-example.  Reports are JSON (stdout unless --out is given), the
// continuity trace is CSV plus a JSON companion.  Exit codes: 0 success,
// 1 solver breakdown (outputs still written), 2 malformed input or usage,
// 3 unreadable file.

#include "balanced/integration.hpp"
#include "balanced/io.hpp"
#include "balanced/linearization.hpp"
#include "balanced/moment.hpp"
#include "balanced/projective.hpp"
#include "balanced/solver.hpp"
#include "balanced/stability.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace {

using namespace balanced;

std::string iso_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit_report(const std::optional<std::string>& out, const Json& report) {
  if (out) {
    write_json_file(*out, report);
  } else {
    std::cout << report.dump(2) << "\n";
  }
}

LambdaConvention parse_convention(const std::string& name) {
  return name == "scaled-volume" ? LambdaConvention::scaled_volume
                                 : LambdaConvention::trace_free;
}

struct GridOptions {
  int radial = 32;
  int angular = 64;
};

void add_grid_options(CLI::App* cmd, GridOptions& g) {
  cmd->add_option("--radial-order", g.radial,
                  "Radial quadrature order per parameter chart")
      ->check(CLI::Range(1, 512))
      ->capture_default_str();
  cmd->add_option("--angular-order", g.angular,
                  "Angular quadrature order per parameter chart")
      ->check(CLI::Range(4, 4096))
      ->capture_default_str();
}

void add_convention_option(CLI::App* cmd, std::string& name) {
  cmd->add_option("--lambda-convention", name,
                  "Centering constant: trace-free or scaled-volume")
      ->check(CLI::IsMember({"trace-free", "scaled-volume"}))
      ->capture_default_str();
}

void add_solver_options(CLI::App* cmd, SolverConfig& s) {
  cmd->add_option("--tol", s.residual_tol,
                  "Residual tolerance, relative to the total mass")
      ->check(CLI::Range(1e-14, 1e-2))
      ->capture_default_str();
  cmd->add_option("--max-iters", s.max_newton_iters,
                  "Newton iteration cap per solve")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  cmd->add_option("--fd-step", s.step_fd,
                  "Finite-difference step for the linearized operator")
      ->check(CLI::Range(1e-9, 1e-2))
      ->capture_default_str();
}

GroupElement load_group_element(const std::optional<std::string>& path,
                                int size) {
  if (!path) return GroupElement::identity(size);
  const GroupElement g(matrix_from_json(read_json_file(*path)));
  if (g.size() != size) {
    throw configuration_error("group element size does not match the scheme");
  }
  return g;
}

PointScheme load_aux_points(const std::string& path, int n) {
  Scheme aux = read_scheme_file(path);
  auto* pts = std::get_if<PointScheme>(&aux);
  if (!pts) {
    throw configuration_error("auxiliary scheme must be a point scheme");
  }
  if (pts->dim() != n) {
    throw configuration_error("auxiliary scheme lives in a different space");
  }
  return std::move(*pts);
}

Json weights_row_to_json(const Eigen::VectorXd& w) {
  Json row = Json::array();
  for (Eigen::Index i = 0; i < w.size(); ++i) row.push_back(w(i));
  return row;
}

// ---- moment ----------------------------------------------------------------

struct MomentOptions {
  std::string input;
  std::optional<std::string> aux;
  std::optional<std::string> g_path;
  double t = 0.0;
  GridOptions grid;
  std::string convention = "trace-free";
  std::optional<std::string> out;
};

int run_moment(const MomentOptions& opt) {
  const Scheme X = read_scheme_file(opt.input);
  const int n = scheme_dim(X);
  std::optional<PointScheme> D;
  if (opt.aux) D = load_aux_points(*opt.aux, n);
  const GroupElement g = load_group_element(opt.g_path, n + 1);
  const QuadratureGrid grid = make_grid(opt.grid.radial, opt.grid.angular);
  const LambdaConvention conv = parse_convention(opt.convention);

  const MomentMatrix mm = moment_matrix(scheme_transformed(g, X), grid);
  const Residual res = residual_t(g, X, D, opt.t, grid, conv);

  Json report;
  report["command"] = "moment";
  report["timestamp"] = iso_timestamp();
  report["input"] = opt.input;
  report["n"] = n;
  report["t"] = opt.t;
  report["lambda_convention"] = opt.convention;
  report["volume"] = mm.mass;
  if (D) report["aux_mass"] = D->mass();
  report["lambda"] = lambda_t(X, D, opt.t, grid, conv);
  report["moment"] = matrix_to_json(mm.matrix.entries());
  report["residual"] = residual_to_json(res);
  emit_report(opt.out, report);
  return 0;
}

// ---- balance ---------------------------------------------------------------

struct BalanceOptions {
  std::string input;
  std::optional<std::string> g0_path;
  GridOptions grid;
  SolverConfig solver;
  std::string convention = "trace-free";
  std::optional<std::string> out;
};

int run_balance(BalanceOptions opt) {
  const Scheme X = read_scheme_file(opt.input);
  const int n = scheme_dim(X);
  const GroupElement g0 = load_group_element(opt.g0_path, n + 1);
  const QuadratureGrid grid = make_grid(opt.grid.radial, opt.grid.angular);
  opt.solver.convention = parse_convention(opt.convention);

  const NewtonResult result =
      newton_solve_at_t(g0, X, std::nullopt, 0.0, opt.solver, grid);
  const GroupElement normal = gauge_normalize(result.g);
  const BalanceReport check =
      balanced_check(result.g, X, grid, opt.solver.residual_tol);

  Json report;
  report["command"] = "balance";
  report["timestamp"] = iso_timestamp();
  report["input"] = opt.input;
  report["n"] = n;
  report["status"] = to_string(result.status);
  report["iterations"] = result.iterations;
  report["balanced"] = check.balanced;
  report["volume"] = check.volume;
  report["tolerance_abs"] = check.tolerance_abs;
  report["min_operator_eig"] = result.min_eig;
  report["residual"] = residual_to_json(result.residual);
  report["g"] = matrix_to_json(result.g.matrix());
  report["g_gauge"] = matrix_to_json(normal.matrix());
  report["cond_g"] = result.g.condition_number();
  emit_report(opt.out, report);
  return result.status == SolveStatus::converged ? 0 : 1;
}

// ---- continuity ------------------------------------------------------------

struct ContinuityOptions {
  std::string input;
  std::optional<std::string> aux;
  bool allow_detached = false;
  // The path settles on orbit points whose parametrization is skewed; the
  // moment integrals there need more radial resolution than the symmetric
  // fixtures served by the other commands.
  GridOptions grid{64, 128};
  SolverConfig solver;
  std::string convention = "trace-free";
  ContinuitySchedule schedule;
  std::uint64_t seed = 20240915;
  int sample_budget = 64;
  std::string out_csv = "continuity_trace.csv";
  std::optional<std::string> json_out;
};

int run_continuity(ContinuityOptions opt) {
  const Scheme X = read_scheme_file(opt.input);
  const int n = scheme_dim(X);
  const QuadratureGrid grid = make_grid(opt.grid.radial, opt.grid.angular);
  opt.solver.convention = parse_convention(opt.convention);

  std::optional<PointScheme> D;
  bool detached = false;
  double worst_distance = 0.0;
  if (opt.aux) {
    D = load_aux_points(*opt.aux, n);
    for (const auto& p : D->points()) {
      double dist = 1.0;
      if (const auto* curve = std::get_if<CurveScheme>(&X)) {
        dist = curve_membership_distance(*curve, p);
      } else {
        for (const auto& q : std::get<PointScheme>(X).points()) {
          dist = std::min(dist, chordal_distance(p, q));
        }
      }
      worst_distance = std::max(worst_distance, dist);
    }
    if (worst_distance > 1e-6) {
      if (!opt.allow_detached) {
        throw configuration_error(
            "auxiliary points do not lie on the scheme (max chordal "
            "distance " +
            std::to_string(worst_distance) +
            "); pass --allow-detached to run anyway");
      }
      detached = true;
    }
  } else if (const auto* curve = std::get_if<CurveScheme>(&X)) {
    const std::vector<ProjPoint> pool =
        sample_curve_points(*curve, opt.sample_budget, opt.seed);
    std::size_t next = 0;
    D = find_general_position_subset(
        [&]() -> ProjPoint {
          if (next >= pool.size()) {
            throw degenerate_source_error(
                "sample budget exhausted before a general-position divisor "
                "was found");
          }
          return pool[next++];
        },
        n, opt.sample_budget);
  } else {
    throw configuration_error(
        "continuity on a point scheme needs --aux with the divisor");
  }

  ContinuityTrace trace;
  std::string anchor_error;
  try {
    trace = continuity_run(X, *D, opt.solver, opt.schedule, grid);
  } catch (const no_balanced_model_error& e) {
    anchor_error = e.what();
  }
  write_trace_csv(opt.out_csv, trace);

  const bool ok = anchor_error.empty() && trace.reached_end;
  Json report;
  report["command"] = "continuity";
  report["timestamp"] = iso_timestamp();
  report["input"] = opt.input;
  report["n"] = n;
  report["seed"] = opt.seed;
  report["schedule"] = Json{{"t_start", opt.schedule.t_start},
                            {"t_end", opt.schedule.t_end},
                            {"gamma", opt.schedule.gamma},
                            {"max_halvings", opt.schedule.max_halvings},
                            {"t_floor", opt.schedule.t_floor}};
  report["aux"] = scheme_to_json(Scheme(*D));
  report["aux_detached"] = detached;
  report["aux_max_distance"] = worst_distance;
  report["reached_end"] = ok;
  if (!anchor_error.empty()) report["anchor_error"] = anchor_error;
  if (!trace.records.empty()) {
    const TraceRecord& last = trace.records.back();
    report["final"] = Json{{"t", last.t},
                           {"residual", last.residual},
                           {"status", to_string(last.status)},
                           {"g", matrix_to_json(last.g)},
                           {"g_gauge",
                            matrix_to_json(
                                gauge_normalize(GroupElement(last.g)).matrix())}};
  }
  report["trace"] = trace_to_json(trace);

  const std::string json_path =
      opt.json_out ? *opt.json_out
                   : std::filesystem::path(opt.out_csv)
                         .replace_extension(".json")
                         .string();
  write_json_file(json_path, report);
  return ok ? 0 : 1;
}

// ---- stability -------------------------------------------------------------

struct StabilityOptions {
  std::string input;
  int samples = 64;
  std::uint64_t seed = 20240915;
  std::optional<std::string> out;
};

int run_stability(const StabilityOptions& opt) {
  Scheme X = read_scheme_file(opt.input);
  auto* pts = std::get_if<PointScheme>(&X);
  if (!pts) {
    throw configuration_error("stability verdicts apply to point schemes");
  }
  const StabilityVerdict counting = point_set_stable(*pts);
  const StabilityVerdict chow =
      chow_stability_sampled(*pts, opt.samples, opt.seed);

  Json report;
  report["command"] = "stability";
  report["timestamp"] = iso_timestamp();
  report["input"] = opt.input;
  report["n"] = pts->dim();
  report["mass"] = pts->mass();
  report["samples"] = opt.samples;
  report["seed"] = opt.seed;
  report["counting"] = verdict_to_json(counting);
  report["chow"] = verdict_to_json(chow);
  report["agree"] = counting.status == chow.status;
  emit_report(opt.out, report);
  return 0;
}

// ---- chow-weight -----------------------------------------------------------

struct ChowWeightOptions {
  std::string input;
  std::string weights_path;
  double s_start = 0.5;
  double s_ratio = 0.7;
  int s_count = 7;
  // Row scaling by s^lambda squeezes the parametrization; past roughly
  // s = 0.05 the pullback density develops spikes this radial order can
  // no longer resolve, so a deeper schedule needs a finer grid too.
  GridOptions grid{128, 256};
  std::optional<std::string> out;
};

std::vector<WeightVector> load_weights(const std::string& path, int n) {
  const Json j = read_json_file(path);
  if (!j.is_object() || !j.contains("weights") || !j["weights"].is_array() ||
      j["weights"].empty()) {
    throw configuration_error(
        "weights file needs a nonempty 'weights' array of rows");
  }
  std::vector<WeightVector> out;
  for (const Json& row : j["weights"]) {
    if (!row.is_array() || static_cast<int>(row.size()) != n + 1) {
      throw configuration_error("each weight row needs n+1 numbers");
    }
    Eigen::VectorXd v(n + 1);
    for (int i = 0; i <= n; ++i) {
      if (!row[i].is_number()) {
        throw configuration_error("weight entries must be numbers");
      }
      v(i) = row[i].get<double>();
    }
    out.emplace_back(std::move(v));
  }
  return out;
}

int run_chow_weight(const ChowWeightOptions& opt) {
  const Scheme X = read_scheme_file(opt.input);
  const int n = scheme_dim(X);
  const std::vector<WeightVector> lambdas = load_weights(opt.weights_path, n);

  Json report;
  report["command"] = "chow-weight";
  report["timestamp"] = iso_timestamp();
  report["input"] = opt.input;
  report["n"] = n;
  Json table = Json::array();

  if (const auto* pts = std::get_if<PointScheme>(&X)) {
    for (const WeightVector& lambda : lambdas) {
      Json row;
      row["weights"] = weights_row_to_json(lambda.weights());
      row["w"] = chow_weight_points(*pts, lambda);
      table.push_back(std::move(row));
    }
  } else {
    const auto& curve = std::get<CurveScheme>(X);
    const QuadratureGrid grid = make_grid(opt.grid.radial, opt.grid.angular);
    std::vector<double> s_values(opt.s_count);
    for (int k = 0; k < opt.s_count; ++k) {
      s_values[k] = opt.s_start * std::pow(opt.s_ratio, k);
    }
    report["s_values"] = s_values;
    for (const WeightVector& lambda : lambdas) {
      const CurveWeightEstimate est =
          chow_weight_curve_estimate(curve, lambda, s_values, grid);
      Json row;
      row["weights"] = weights_row_to_json(lambda.weights());
      row["w"] = est.estimate;
      row["converged"] = est.converged;
      row["invariant_branch"] = est.invariant_branch;
      row["convergence_ratio"] = est.convergence_ratio;
      row["values"] = est.values;
      table.push_back(std::move(row));
    }
  }
  report["table"] = std::move(table);
  emit_report(opt.out, report);
  return 0;
}

// ---- make-example ----------------------------------------------------------

struct MakeExampleOptions {
  int n = 2;
  std::string out_dir = ".";
};

int run_make_example(const MakeExampleOptions& opt) {
  const std::filesystem::path dir(opt.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw io_error("cannot create output directory: " + dir.string());
  }
  const int n = opt.n;
  std::vector<std::string> files;
  auto emit = [&](const std::string& name, const Json& j) {
    const std::string path = (dir / name).string();
    write_json_file(path, j);
    files.push_back(path);
  };

  emit("e_config.json", scheme_to_json(roots_of_unity_config(n)));

  Mat coeffs = Mat::Zero(n + 1, n + 1);
  double binom = 1.0;
  for (int i = 0; i <= n; ++i) {
    coeffs(i, i) = std::sqrt(binom);
    binom = binom * (n - i) / (i + 1.0);
  }
  emit("rational_normal_curve.json",
       scheme_to_json(CurveScheme(n, std::move(coeffs))));

  std::vector<ProjPoint> bad;
  std::vector<int> mults;
  if (n == 1) {
    // Majority multiplicity on one point.
    Vec e0 = Vec::Zero(2), e1 = Vec::Zero(2);
    e0(0) = 1.0;
    e1(1) = 1.0;
    bad = {ProjPoint(e0), ProjPoint(e1)};
    mults = {2, 1};
  } else {
    // n+1 of the n+2 points span the hyperplane z_n = 0, one too many.
    for (int i = 0; i < n; ++i) {
      Vec e = Vec::Zero(n + 1);
      e(i) = 1.0;
      bad.emplace_back(std::move(e));
    }
    Vec ones = Vec::Ones(n + 1);
    ones(n) = 0.0;
    bad.emplace_back(std::move(ones));
    Vec last = Vec::Zero(n + 1);
    last(n) = 1.0;
    bad.emplace_back(std::move(last));
    mults.assign(bad.size(), 1);
  }
  emit("unstable_points.json",
       scheme_to_json(PointScheme(std::move(bad), std::move(mults))));

  Json weights;
  weights["n"] = n;
  Json rows = Json::array();
  if (n == 1) {
    rows.push_back(Json::array({1.0, -1.0}));
  } else {
    Json first = Json::array(), second = Json::array(), third = Json::array();
    for (int i = 0; i <= n; ++i) {
      first.push_back(i == 0 ? 1.0 : (i == n ? -1.0 : 0.0));
      second.push_back(i == 0 ? static_cast<double>(n) : -1.0);
      third.push_back(i == 0 ? 1.0 : (i == 1 ? -1.0 : 0.0));
    }
    rows.push_back(std::move(first));
    rows.push_back(std::move(second));
    rows.push_back(std::move(third));
  }
  weights["weights"] = std::move(rows);
  const std::string wpath = (dir / "weights.json").string();
  write_json_file(wpath, weights);
  files.push_back(wpath);

  Json report;
  report["command"] = "make-example";
  report["timestamp"] = iso_timestamp();
  report["n"] = n;
  report["files"] = files;
  std::cout << report.dump(2) << "\n";
  return 0;
}

// ---- dispatch --------------------------------------------------------------

void bind_optional(CLI::App* cmd, const std::string& flag,
                   std::optional<std::string>& target,
                   const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&target](const std::string& v) { target = v; }, help);
}

int dispatch(int argc, char** argv) {
  CLI::App app{
      "Moment maps and balanced embeddings of projective schemes: Newton "
      "solves, the continuity path in t, and stability of point "
      "configurations"};
  app.require_subcommand(1);

  MomentOptions moment_opt;
  CLI::App* moment_cmd = app.add_subcommand(
      "moment", "Moment matrix and centered residual of a scheme");
  moment_cmd->add_option("--input", moment_opt.input, "Scheme JSON file")
      ->required();
  bind_optional(moment_cmd, "--aux", moment_opt.aux,
                "Auxiliary point scheme weighted by t");
  bind_optional(moment_cmd, "--g", moment_opt.g_path,
                "Group element JSON ({re, im} matrix) applied first");
  moment_cmd->add_option("--t", moment_opt.t, "Coupling weight of the aux part")
      ->capture_default_str();
  add_grid_options(moment_cmd, moment_opt.grid);
  add_convention_option(moment_cmd, moment_opt.convention);
  bind_optional(moment_cmd, "--out", moment_opt.out,
                "Report path (stdout when absent)");

  BalanceOptions balance_opt;
  CLI::App* balance_cmd = app.add_subcommand(
      "balance", "Newton solve for a balanced embedding at t = 0");
  balance_cmd->add_option("--input", balance_opt.input, "Scheme JSON file")
      ->required();
  bind_optional(balance_cmd, "--g0", balance_opt.g0_path,
                "Initial group element JSON");
  add_grid_options(balance_cmd, balance_opt.grid);
  add_solver_options(balance_cmd, balance_opt.solver);
  add_convention_option(balance_cmd, balance_opt.convention);
  bind_optional(balance_cmd, "--out", balance_opt.out,
                "Report path (stdout when absent)");

  ContinuityOptions cont_opt;
  CLI::App* cont_cmd = app.add_subcommand(
      "continuity",
      "Walk the residual family from a balanced divisor toward t = 0");
  cont_cmd->add_option("--input", cont_opt.input, "Scheme JSON file")
      ->required();
  bind_optional(cont_cmd, "--aux", cont_opt.aux,
                "Divisor point scheme (sampled from the curve when absent)");
  cont_cmd->add_flag("--allow-detached", cont_opt.allow_detached,
                     "Accept auxiliary points that do not lie on the scheme");
  cont_cmd
      ->add_option("--t-start", cont_opt.schedule.t_start,
                   "Initial coupling (<= 0 picks 10 * volume/mass)")
      ->capture_default_str();
  cont_cmd->add_option("--t-end", cont_opt.schedule.t_end, "Final coupling")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cont_cmd->add_option("--gamma", cont_opt.schedule.gamma, "Step shrink factor")
      ->check(CLI::Range(1e-3, 0.999))
      ->capture_default_str();
  cont_cmd
      ->add_option("--max-halvings", cont_opt.schedule.max_halvings,
                   "Bisections of a rejected t-step before giving up")
      ->check(CLI::Range(0, 40))
      ->capture_default_str();
  cont_cmd
      ->add_option("--t-floor", cont_opt.schedule.t_floor,
                   "Snap distance to t-end for the final step")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cont_cmd->add_option("--seed", cont_opt.seed, "Divisor sampling seed")
      ->capture_default_str();
  cont_cmd
      ->add_option("--sample-budget", cont_opt.sample_budget,
                   "Curve samples drawn while building the divisor")
      ->check(CLI::Range(4, 100000))
      ->capture_default_str();
  add_grid_options(cont_cmd, cont_opt.grid);
  add_solver_options(cont_cmd, cont_opt.solver);
  add_convention_option(cont_cmd, cont_opt.convention);
  cont_cmd->add_option("--out", cont_opt.out_csv, "Trace CSV path")
      ->capture_default_str();
  bind_optional(cont_cmd, "--json-out", cont_opt.json_out,
                "Trace report path (default: CSV path with .json)");

  StabilityOptions stab_opt;
  CLI::App* stab_cmd = app.add_subcommand(
      "stability",
      "Counting and one-parameter-subgroup verdicts for a point scheme");
  stab_cmd->add_option("--input", stab_opt.input, "Scheme JSON file")
      ->required();
  stab_cmd->add_option("--samples", stab_opt.samples,
                       "Random subgroup frames to sweep")
      ->check(CLI::Range(0, 100000))
      ->capture_default_str();
  stab_cmd->add_option("--seed", stab_opt.seed, "Frame sampling seed")
      ->capture_default_str();
  bind_optional(stab_cmd, "--out", stab_opt.out,
                "Report path (stdout when absent)");

  ChowWeightOptions chow_opt;
  CLI::App* chow_cmd = app.add_subcommand(
      "chow-weight",
      "Weights of diagonal one-parameter subgroups against a scheme");
  chow_cmd->add_option("--input", chow_opt.input, "Scheme JSON file")
      ->required();
  chow_cmd
      ->add_option("--weights", chow_opt.weights_path,
                   "JSON file with a 'weights' array of rows")
      ->required();
  chow_cmd->add_option("--s-start", chow_opt.s_start,
                       "Largest s in the curve extrapolation schedule")
      ->check(CLI::Range(1e-3, 1.0))
      ->capture_default_str();
  chow_cmd->add_option("--s-ratio", chow_opt.s_ratio,
                       "Geometric ratio of the s schedule")
      ->check(CLI::Range(0.1, 0.95))
      ->capture_default_str();
  chow_cmd->add_option("--s-count", chow_opt.s_count,
                       "Length of the s schedule")
      ->check(CLI::Range(3, 40))
      ->capture_default_str();
  add_grid_options(chow_cmd, chow_opt.grid);
  bind_optional(chow_cmd, "--out", chow_opt.out,
                "Report path (stdout when absent)");

  MakeExampleOptions make_opt;
  CLI::App* make_cmd = app.add_subcommand(
      "make-example", "Write reference fixtures for dimension n");
  make_cmd->add_option("--n", make_opt.n, "Projective dimension")
      ->check(CLI::Range(1, 8))
      ->capture_default_str();
  make_cmd->add_option("--out-dir", make_opt.out_dir, "Target directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*moment_cmd) return run_moment(moment_opt);
  if (*balance_cmd) return run_balance(std::move(balance_opt));
  if (*cont_cmd) return run_continuity(std::move(cont_opt));
  if (*stab_cmd) return run_stability(stab_opt);
  if (*chow_cmd) return run_chow_weight(chow_opt);
  return run_make_example(make_opt);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const no_balanced_model_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
