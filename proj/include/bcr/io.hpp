#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "bcr/model.hpp"
#include "bcr/oracle.hpp"

namespace bcr {

// Optional per-field overrides carried by a problem file's "config" object
// or by CLI flags; applied on top of a style default.
struct ConfigOverrides {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::size_t> max_iters;
  std::optional<double> tol;
  std::optional<std::string> x_update;  // "closed" | "gradient"
  std::optional<std::string> ge_mode;   // "exterior" | "hinge"
  std::optional<std::uint64_t> seed;

  void apply(SolverConfig& config) const;
};

struct ProblemFile {
  SdpProblem problem;
  ConfigOverrides config;
};

// Problem JSON schema:
//   {"n": int, "rank": int,
//    "objective": {"kind": "zero"} | {"kind": "dense", "values": [[...]]},
//    "constraints": [{"sense": "eq"|"le"|"ge", "b": num,
//                     "matrix": [[...]] XOR "factor": [[...]]}],
//    "config": {...}}   (optional)
// Unknown keys are rejected. Throws ValidationError.
ProblemFile problem_from_json(const nlohmann::json& j);
nlohmann::ordered_json problem_to_json(const SdpProblem& problem);

nlohmann::ordered_json result_to_json(const SolveResult& result,
                                      bool include_timing);
DenseMatrix dense_from_json(const nlohmann::json& j, const std::string& what);
nlohmann::json dense_to_json(const DenseMatrix& m);

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace bcr
