#include "balanced/io.hpp"

#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace balanced;
namespace bt = balanced::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "balanced-io-tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Runs the CLI with the scratch dir as working directory; returns the exit
// code, with stdout captured to the given file name.
int run_cli(const std::string& args, const std::string& stdout_file = "") {
  std::string cmd = "cd " + scratch_dir().string() + " && " +
                    std::string(BALANCED_EMBED_PATH) + " " + args;
  cmd += stdout_file.empty() ? " > /dev/null 2>&1"
                             : " > " + stdout_file + " 2> cli_err.txt";
  const int raw = std::system(cmd.c_str());
  REQUIRE(raw != -1);
  return WEXITSTATUS(raw);
}

std::string strip_timestamp(Json j) {
  j.erase("timestamp");
  return j.dump(2);
}

}  // namespace

TEST_CASE("complex and matrix values round-trip through JSON") {
  std::mt19937_64 gen(81);
  const Cplx z = bt::random_cplx(gen);
  REQUIRE(complex_from_json(complex_to_json(z)) == z);

  const Mat m = bt::random_matrix(3, 2, gen);
  const Mat back = matrix_from_json(matrix_to_json(m));
  REQUIRE((m - back).norm() == 0.0);
}

TEST_CASE("schemes round-trip through JSON") {
  std::mt19937_64 gen(82);

  std::vector<ProjPoint> pts;
  for (int i = 0; i < 4; ++i) pts.push_back(bt::random_point(2, gen));
  const PointScheme d(pts, {1, 2, 1, 3});
  const Scheme back = scheme_from_json(scheme_to_json(Scheme(d)));
  const auto* back_pts = std::get_if<PointScheme>(&back);
  REQUIRE(back_pts != nullptr);
  REQUIRE(back_pts->mass() == d.mass());
  for (int i = 0; i < 4; ++i) {
    REQUIRE(chordal_distance(back_pts->points()[i], pts[i]) < 1e-12);
  }

  const CurveScheme curve(2, bt::random_matrix(3, 3, gen));
  const Scheme back_c = scheme_from_json(scheme_to_json(Scheme(curve)));
  const auto* bc = std::get_if<CurveScheme>(&back_c);
  REQUIRE(bc != nullptr);
  REQUIRE(bc->degree() == 2);
  REQUIRE((bc->coefficients() - curve.coefficients()).norm() == 0.0);
}

TEST_CASE("file errors are distinguished from format errors") {
  const fs::path missing = scratch_dir() / "does-not-exist.json";
  REQUIRE_THROWS_AS(read_json_file(missing.string()), io_error);

  const fs::path broken = scratch_dir() / "broken.json";
  spit(broken, "{ not json");
  REQUIRE_THROWS_AS(read_json_file(broken.string()), configuration_error);

  const fs::path wrong = scratch_dir() / "wrong.json";
  spit(wrong, R"({"n": 1, "type": "points", "points": [[[1,0],[0,0]]],)"
              R"( "multiplicities": [0]})");
  REQUIRE_THROWS_AS(read_scheme_file(wrong.string()), configuration_error);
}

TEST_CASE("trace CSV layout") {
  ContinuityTrace trace;
  TraceRecord rec;
  rec.t = 1.5;
  rec.g = Mat::Identity(2, 2);
  rec.residual = 1e-10;
  rec.newton_iters = 3;
  rec.min_eig = 0.25;
  rec.cond_g = 1.0;
  rec.status = SolveStatus::converged;
  trace.records.push_back(rec);
  trace.reached_end = true;

  const fs::path csv = scratch_dir() / "trace.csv";
  write_trace_csv(csv.string(), trace);
  const std::string text = slurp(csv);
  REQUIRE(text.rfind("t,residual,iters,min_eig,cond_g,status\n", 0) == 0);
  REQUIRE(text.find("converged") != std::string::npos);
  REQUIRE(text.find("1.5") != std::string::npos);
}

TEST_CASE("generated example files round-trip byte for byte") {
  REQUIRE(run_cli("make-example --n 2 --out-dir examples_a") == 0);
  const fs::path dir = scratch_dir() / "examples_a";
  for (const char* name : {"e_config.json", "rational_normal_curve.json",
                           "unstable_points.json"}) {
    const fs::path p = dir / name;
    const std::string original = slurp(p);
    const Scheme scheme = read_scheme_file(p.string());
    const fs::path copy = dir / (std::string("copy_") + name);
    write_json_file(copy.string(), scheme_to_json(scheme));
    REQUIRE(slurp(copy) == original);
  }
  REQUIRE(fs::exists(dir / "weights.json"));
}

TEST_CASE("moment command reports the scalar matrix of the reference config") {
  REQUIRE(run_cli("make-example --n 2 --out-dir examples_b") == 0);
  REQUIRE(run_cli("moment --input examples_b/e_config.json --out moment.json") ==
          0);
  const Json report = read_json_file((scratch_dir() / "moment.json").string());
  REQUIRE(report["command"] == "moment");
  REQUIRE(report["n"] == 2);
  const Mat m = matrix_from_json(report["moment"]);
  const Mat target = (4.0 / 3.0) * Mat::Identity(3, 3);
  REQUIRE((m - target).cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE(report["residual"]["frobenius"].get<double>() < 1e-12);
}

TEST_CASE("reports are deterministic apart from the timestamp") {
  REQUIRE(run_cli("make-example --n 1 --out-dir examples_c") == 0);
  REQUIRE(run_cli("moment --input examples_c/e_config.json --out m1.json") == 0);
  REQUIRE(run_cli("moment --input examples_c/e_config.json --out m2.json") == 0);
  const Json a = read_json_file((scratch_dir() / "m1.json").string());
  const Json b = read_json_file((scratch_dir() / "m2.json").string());
  REQUIRE(a.contains("timestamp"));
  REQUIRE(strip_timestamp(a) == strip_timestamp(b));

  REQUIRE(run_cli("stability --input examples_c/unstable_points.json"
                  " --out s1.json") == 0);
  REQUIRE(run_cli("stability --input examples_c/unstable_points.json"
                  " --out s2.json") == 0);
  const Json sa = read_json_file((scratch_dir() / "s1.json").string());
  const Json sb = read_json_file((scratch_dir() / "s2.json").string());
  REQUIRE(strip_timestamp(sa) == strip_timestamp(sb));
  REQUIRE(sa["counting"]["status"] == "unstable");
}

TEST_CASE("balance command solves the example curve") {
  REQUIRE(run_cli("make-example --n 2 --out-dir examples_d") == 0);
  REQUIRE(run_cli("balance --input examples_d/rational_normal_curve.json"
                  " --out balance.json") == 0);
  const Json report = read_json_file((scratch_dir() / "balance.json").string());
  REQUIRE(report["status"] == "converged");
  REQUIRE(report["residual"]["frobenius"].get<double>() < 1e-7);
}

TEST_CASE("chow-weight command pins the reference values") {
  REQUIRE(run_cli("make-example --n 1 --out-dir examples_e") == 0);
  REQUIRE(run_cli("chow-weight --input examples_e/e_config.json"
                  " --weights examples_e/weights.json --out w.json") == 0);
  const Json report = read_json_file((scratch_dir() / "w.json").string());
  REQUIRE(report["table"].size() == 1);
  REQUIRE(report["table"][0]["w"].get<double>() == 3.0);

  REQUIRE(run_cli("chow-weight --input examples_e/unstable_points.json"
                  " --weights examples_e/weights.json --out wu.json") == 0);
  const Json bad = read_json_file((scratch_dir() / "wu.json").string());
  REQUIRE(bad["table"][0]["w"].get<double>() == -1.0);
}

TEST_CASE("exit codes follow the contract") {
  // Unreadable input file.
  REQUIRE(run_cli("moment --input nowhere.json") == 3);

  // Malformed JSON and malformed scheme content.
  spit(scratch_dir() / "garbage.json", "{{{{");
  REQUIRE(run_cli("moment --input garbage.json") == 2);
  spit(scratch_dir() / "halfright.json",
       R"({"n": 1, "type": "points", "points": [[[1,0],[0,0]]],)"
       R"( "multiplicities": [-1]})");
  REQUIRE(run_cli("moment --input halfright.json") == 2);

  // Usage errors.
  REQUIRE(run_cli("moment") == 2);
  REQUIRE(run_cli("no-such-command") == 2);
  REQUIRE(run_cli("--help", "help.txt") == 0);

  // Solver breakdown: the unstable quadruple has no balanced model.
  REQUIRE(run_cli("make-example --n 2 --out-dir examples_f") == 0);
  REQUIRE(run_cli("balance --input examples_f/unstable_points.json"
                  " --out failed.json") == 1);
  const Json report = read_json_file((scratch_dir() / "failed.json").string());
  REQUIRE(report["status"] != "converged");
}

TEST_CASE("continuity command produces a consistent trace") {
  // Points as the scheme with the same points as the divisor: the path is
  // well posed at every t and cheap, which keeps this a pure CLI test.
  REQUIRE(run_cli("make-example --n 2 --out-dir examples_g") == 0);
  REQUIRE(run_cli("continuity --input examples_g/e_config.json"
                  " --aux examples_g/e_config.json"
                  " --t-start 2.0 --out path.csv --json-out path.json") == 0);

  const Json report = read_json_file((scratch_dir() / "path.json").string());
  REQUIRE(report["reached_end"].get<bool>());
  REQUIRE(report["final"]["status"] == "converged");
  REQUIRE(report["final"]["t"].get<double>() == 0.0);

  const std::string csv = slurp(scratch_dir() / "path.csv");
  REQUIRE(csv.rfind("t,residual,iters,min_eig,cond_g,status\n", 0) == 0);

  // One CSV row per trace record, t strictly decreasing.
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  double prev_t = std::numeric_limits<double>::infinity();
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const double t = std::stod(line.substr(0, line.find(',')));
    REQUIRE(t < prev_t);
    prev_t = t;
    ++rows;
  }
  REQUIRE(rows == report["trace"]["records"].size());
}
