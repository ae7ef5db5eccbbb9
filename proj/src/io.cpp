#include "bcr/io.hpp"

#include <cmath>
#include <fstream>

#include "bcr/errors.hpp"
#include "bcr/linalg.hpp"

namespace bcr {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void require_keys(const json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional,
                  const std::string& what) {
  for (const char* key : required) {
    if (!j.contains(key)) {
      throw ValidationError(what + ": missing key \"" + key + "\"");
    }
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : required) known = known || it.key() == key;
    for (const char* key : optional) known = known || it.key() == key;
    if (!known) {
      throw ValidationError(what + ": unknown key \"" + it.key() + "\"");
    }
  }
}

double finite_number(const json& j, const std::string& what) {
  if (!j.is_number()) {
    throw ValidationError(what + ": expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw ValidationError(what + ": non-finite number");
  }
  return v;
}

}  // namespace

DenseMatrix dense_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(what + ": expected a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw ValidationError(what + ": rows must be non-empty arrays");
  }
  const std::size_t cols = j[0].size();
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw ValidationError(what + ": row " + std::to_string(i) +
                            " has inconsistent length");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      m(i, k) = finite_number(j[i][k], what);
    }
  }
  return m;
}

json dense_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void ConfigOverrides::apply(SolverConfig& config) const {
  if (alpha) config.alpha = *alpha;
  if (beta) config.beta = *beta;
  if (max_iters) config.max_iters = *max_iters;
  if (tol) config.rel_obj_tol = *tol;
  if (x_update) {
    if (*x_update == "closed") {
      config.x_update = XUpdate::kClosedForm;
    } else if (*x_update == "gradient") {
      config.x_update = XUpdate::kGradient;
    } else {
      throw ValidationError("config.x_update must be \"closed\" or \"gradient\"");
    }
  }
  if (ge_mode) {
    if (*ge_mode == "exterior") {
      config.ge_mode = GeMode::kExteriorProjection;
    } else if (*ge_mode == "hinge") {
      config.ge_mode = GeMode::kHinge;
    } else {
      throw ValidationError("config.ge_mode must be \"exterior\" or \"hinge\"");
    }
  }
  if (seed) config.seed = *seed;
}

ProblemFile problem_from_json(const json& j) {
  require_keys(j, {"n", "rank", "objective", "constraints"}, {"config"},
               "problem");
  ProblemFile out;

  if (!j["n"].is_number_unsigned() || !j["rank"].is_number_unsigned()) {
    throw ValidationError("problem: \"n\" and \"rank\" must be non-negative integers");
  }
  const std::size_t n = j["n"].get<std::size_t>();
  const std::size_t rank = j["rank"].get<std::size_t>();

  const json& obj = j["objective"];
  require_keys(obj, {"kind"}, {"values"}, "objective");
  SymMatrix objective;
  const std::string kind = obj["kind"].get<std::string>();
  if (kind == "zero") {
    objective = SymMatrix(n);
  } else if (kind == "dense") {
    if (!obj.contains("values")) {
      throw ValidationError("objective: dense kind requires \"values\"");
    }
    objective = SymMatrix::from_dense(dense_from_json(obj["values"], "objective"));
    if (objective.size() != n) {
      throw ValidationError("objective: size does not match \"n\"");
    }
  } else {
    throw ValidationError("objective.kind must be \"zero\" or \"dense\"");
  }

  if (!j["constraints"].is_array() || j["constraints"].empty()) {
    throw ValidationError("problem: \"constraints\" must be a non-empty array");
  }
  std::vector<FactoredConstraint> factored;
  std::vector<RawConstraint> raws;
  std::vector<std::size_t> raw_slots;  // index in `factored` per raw matrix
  std::size_t idx = 0;
  for (const json& cj : j["constraints"]) {
    const std::string what = "constraint " + std::to_string(idx);
    require_keys(cj, {"sense", "b"}, {"matrix", "factor", "label"}, what);
    const bool has_matrix = cj.contains("matrix");
    const bool has_factor = cj.contains("factor");
    if (has_matrix == has_factor) {
      throw ValidationError(what + ": exactly one of \"matrix\"/\"factor\" required");
    }
    const double bound = finite_number(cj["b"], what + ".b");
    if (bound < 0.0) {
      throw NegativeBoundError(what + ": bound must be >= 0");
    }
    const ConstraintSense sense =
        sense_from_string(cj["sense"].get<std::string>());
    const std::string label =
        cj.contains("label") ? cj["label"].get<std::string>()
                             : "c" + std::to_string(idx);
    if (has_factor) {
      DenseMatrix f = dense_from_json(cj["factor"], what + ".factor");
      if (f.cols() != n) {
        throw ValidationError(what + ": factor must have n columns");
      }
      factored.push_back({std::move(f), bound, sense, label});
    } else {
      DenseMatrix m = dense_from_json(cj["matrix"], what + ".matrix");
      if (m.rows() != n) {
        throw ValidationError(what + ": matrix must be n-by-n");
      }
      raw_slots.push_back(factored.size());
      factored.push_back({DenseMatrix(), bound, sense, label});
      raws.push_back({SymMatrix::from_dense(m), bound, sense, label});
    }
    ++idx;
  }
  // Factor the raw matrices through the PSD square root.
  for (std::size_t k = 0; k < raws.size(); ++k) {
    try {
      factored[raw_slots[k]].factor = psd_sqrt_factor(raws[k].matrix);
    } catch (const NotPsdError& e) {
      throw NotPsdError("constraint \"" + raws[k].label + "\": " + e.what());
    }
  }

  out.problem = make_problem(std::move(objective), std::move(factored), n, rank);

  if (j.contains("config")) {
    const json& cfg = j["config"];
    require_keys(cfg, {},
                 {"alpha", "beta", "max_iters", "tol", "x_update", "ge_mode",
                  "seed"},
                 "config");
    if (cfg.contains("alpha")) out.config.alpha = finite_number(cfg["alpha"], "config.alpha");
    if (cfg.contains("beta")) out.config.beta = finite_number(cfg["beta"], "config.beta");
    if (cfg.contains("max_iters")) {
      if (!cfg["max_iters"].is_number_unsigned()) {
        throw ValidationError("config.max_iters must be a non-negative integer");
      }
      out.config.max_iters = cfg["max_iters"].get<std::size_t>();
    }
    if (cfg.contains("tol")) out.config.tol = finite_number(cfg["tol"], "config.tol");
    if (cfg.contains("x_update")) out.config.x_update = cfg["x_update"].get<std::string>();
    if (cfg.contains("ge_mode")) out.config.ge_mode = cfg["ge_mode"].get<std::string>();
    if (cfg.contains("seed")) {
      if (!cfg["seed"].is_number_unsigned()) {
        throw ValidationError("config.seed must be a non-negative integer");
      }
      out.config.seed = cfg["seed"].get<std::uint64_t>();
    }
  }
  return out;
}

ordered_json problem_to_json(const SdpProblem& problem) {
  ordered_json j;
  j["n"] = problem.dim;
  j["rank"] = problem.rank;
  if (problem.objective_is_zero()) {
    j["objective"] = {{"kind", "zero"}};
  } else {
    ordered_json obj;
    obj["kind"] = "dense";
    obj["values"] = dense_to_json(problem.objective.as_dense());
    j["objective"] = std::move(obj);
  }
  ordered_json constraints = ordered_json::array();
  for (const auto& c : problem.constraints) {
    ordered_json cj;
    cj["sense"] = to_string(c.sense);
    cj["b"] = c.bound;
    cj["factor"] = dense_to_json(c.factor);
    cj["label"] = c.label;
    constraints.push_back(std::move(cj));
  }
  j["constraints"] = std::move(constraints);
  return j;
}

ordered_json result_to_json(const SolveResult& result, bool include_timing) {
  ordered_json j;
  j["objective_trace"] = result.objective_trace;
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  if (include_timing) {
    j["runtime_ms"] = result.wall_time_ms;
  }
  j["X"] = dense_to_json(result.x);
  j["feasibility"] = result.feasibility;
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open \"" + path + "\"");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("failed to parse \"" + path + "\": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("cannot write \"" + path + "\"");
  }
  out << j.dump(1) << "\n";
}

}  // namespace bcr
