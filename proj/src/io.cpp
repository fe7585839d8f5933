#include "balanced/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace balanced {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw configuration_error("scheme file: " + message);
}

double number_at(const Json& j, const std::string& what) {
  require(j.is_number(), what + " must be a number");
  return j.get<double>();
}

}  // namespace

Json complex_to_json(const Cplx& z) { return Json::array({z.real(), z.imag()}); }

Cplx complex_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2, "complex entries are [re, im] pairs");
  return Cplx(number_at(j[0], "re"), number_at(j[1], "im"));
}

Json matrix_to_json(const Mat& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row_re = Json::array();
    Json row_im = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row_re.push_back(m(i, j).real());
      row_im.push_back(m(i, j).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Mat matrix_from_json(const Json& j) {
  require(j.is_object() && j.contains("re") && j.contains("im"),
          "matrix needs re and im arrays");
  const Json& re = j["re"];
  const Json& im = j["im"];
  require(re.is_array() && im.is_array() && re.size() == im.size() &&
              !re.empty(),
          "matrix arrays must be nonempty and of equal shape");
  const std::size_t rows = re.size();
  const std::size_t cols = re[0].size();
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    require(re[i].is_array() && re[i].size() == cols && im[i].is_array() &&
                im[i].size() == cols,
            "matrix rows must have equal length");
    for (std::size_t k = 0; k < cols; ++k) {
      m(i, k) = Cplx(number_at(re[i][k], "matrix entry"),
                     number_at(im[i][k], "matrix entry"));
    }
  }
  return m;
}

Json scheme_to_json(const Scheme& scheme) {
  Json j;
  j["n"] = scheme_dim(scheme);
  if (const auto* pts = std::get_if<PointScheme>(&scheme)) {
    j["type"] = "points";
    Json points = Json::array();
    for (const auto& p : pts->points()) {
      Json coords = Json::array();
      for (Eigen::Index i = 0; i < p.coords().size(); ++i) {
        coords.push_back(complex_to_json(p.coords()(i)));
      }
      points.push_back(std::move(coords));
    }
    j["points"] = std::move(points);
    j["multiplicities"] = pts->multiplicities();
    return j;
  }
  const auto& curve = std::get<CurveScheme>(scheme);
  j["type"] = "curve";
  j["degree"] = curve.degree();
  Json components = Json::array();
  for (Eigen::Index i = 0; i < curve.coefficients().rows(); ++i) {
    Json coeffs = Json::array();
    for (Eigen::Index k = 0; k < curve.coefficients().cols(); ++k) {
      coeffs.push_back(complex_to_json(curve.coefficients()(i, k)));
    }
    components.push_back(std::move(coeffs));
  }
  j["components"] = std::move(components);
  return j;
}

Scheme scheme_from_json(const Json& j) {
  require(j.is_object(), "top level must be an object");
  require(j.contains("n") && j["n"].is_number_integer(),
          "missing integer field n");
  require(j.contains("type") && j["type"].is_string(),
          "missing string field type");
  const int n = j["n"].get<int>();
  require(n >= 1, "n must be at least 1");
  const std::string type = j["type"].get<std::string>();

  if (type == "points") {
    require(j.contains("points") && j["points"].is_array() &&
                !j["points"].empty(),
            "points schemes need a nonempty points array");
    std::vector<ProjPoint> points;
    for (const Json& coords : j["points"]) {
      require(coords.is_array() && static_cast<int>(coords.size()) == n + 1,
              "each point needs n+1 coordinates");
      Vec v(n + 1);
      for (int i = 0; i <= n; ++i) v(i) = complex_from_json(coords[i]);
      points.emplace_back(std::move(v));
    }
    std::vector<int> mults(points.size(), 1);
    if (j.contains("multiplicities")) {
      const Json& jm = j["multiplicities"];
      require(jm.is_array() && jm.size() == points.size(),
              "multiplicities must match the point count");
      for (std::size_t i = 0; i < points.size(); ++i) {
        require(jm[i].is_number_integer() && jm[i].get<int>() >= 1,
                "multiplicities must be positive integers");
        mults[i] = jm[i].get<int>();
      }
    }
    return PointScheme(std::move(points), std::move(mults));
  }

  if (type == "curve") {
    require(j.contains("degree") && j["degree"].is_number_integer(),
            "curve schemes need an integer degree");
    const int degree = j["degree"].get<int>();
    require(degree >= 1, "curve degree must be at least 1");
    require(j.contains("components") && j["components"].is_array() &&
                static_cast<int>(j["components"].size()) == n + 1,
            "curve schemes need n+1 component coefficient lists");
    Mat coeffs(n + 1, degree + 1);
    for (int i = 0; i <= n; ++i) {
      const Json& row = j["components"][i];
      require(row.is_array() && static_cast<int>(row.size()) == degree + 1,
              "each component needs degree+1 coefficients");
      for (int k = 0; k <= degree; ++k) {
        coeffs(i, k) = complex_from_json(row[k]);
      }
    }
    return CurveScheme(degree, std::move(coeffs));
  }

  throw configuration_error("scheme file: type must be 'points' or 'curve'");
}

Scheme read_scheme_file(const std::string& path) {
  return scheme_from_json(read_json_file(path));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw io_error("cannot read file: " + path);
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw configuration_error(std::string("invalid JSON in ") + path + ": " +
                              e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw io_error("failed to write file: " + path);
}

Json verdict_to_json(const StabilityVerdict& verdict) {
  Json j;
  j["status"] = to_string(verdict.status);
  j["margin"] = verdict.margin;
  if (verdict.witness) {
    Json w;
    w["kind"] = verdict.witness->kind;
    w["support_subset"] = verdict.witness->support_subset;
    if (verdict.witness->weights.size() > 0) {
      Json weights = Json::array();
      for (Eigen::Index i = 0; i < verdict.witness->weights.size(); ++i) {
        weights.push_back(verdict.witness->weights(i));
      }
      w["weights"] = std::move(weights);
      w["frame"] = matrix_to_json(verdict.witness->frame);
      w["limit_equals_config"] = verdict.witness->limit_equals_config;
    }
    w["value"] = verdict.witness->value;
    j["witness"] = std::move(w);
  }
  return j;
}

Json residual_to_json(const Residual& residual) {
  Json j;
  j["matrix"] = matrix_to_json(residual.matrix.entries());
  j["frobenius"] = residual.frobenius;
  const Eigen::VectorXd eigs = residual.matrix.eigenvalues();
  j["eig_min"] = eigs.minCoeff();
  j["eig_max"] = eigs.maxCoeff();
  return j;
}

Json balance_report_to_json(const BalanceReport& report) {
  Json j;
  j["balanced"] = report.balanced;
  j["volume"] = report.volume;
  j["tolerance_abs"] = report.tolerance_abs;
  j["residual"] = residual_to_json(report.residual);
  return j;
}

void write_trace_csv(const std::string& path, const ContinuityTrace& trace) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open trace file for writing: " + path);
  out << "t,residual,iters,min_eig,cond_g,status\n";
  char line[256];
  for (const auto& rec : trace.records) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%d,%.17g,%.17g,%s\n", rec.t,
                  rec.residual, rec.newton_iters, rec.min_eig, rec.cond_g,
                  to_string(rec.status));
    out << line;
  }
  if (!out) throw io_error("failed to write trace file: " + path);
}

Json trace_to_json(const ContinuityTrace& trace) {
  Json j;
  j["reached_end"] = trace.reached_end;
  Json records = Json::array();
  for (const auto& rec : trace.records) {
    Json r;
    r["t"] = rec.t;
    r["residual"] = rec.residual;
    r["newton_iters"] = rec.newton_iters;
    r["min_eig"] = rec.min_eig;
    r["cond_g"] = rec.cond_g;
    r["status"] = to_string(rec.status);
    r["g"] = matrix_to_json(rec.g);
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  return j;
}

}  // namespace balanced
