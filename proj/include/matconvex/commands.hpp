#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matconvex/report.hpp"

namespace matconvex {

/// Everything a command can be configured with. Fields a command does not
/// use are ignored and left out of its config echo.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::size_t trials = 200;
  Eigen::Index n = 2;

  // certify-function
  std::string function;
  std::string window;  // "a,b"; either end may be inf / -inf
  std::string mode = "convex";  // convex | monotone | all
  std::optional<double> secant;  // test the secant transform at this point instead
  std::size_t sites = 4;
  std::size_t atoms = 3;

  // check-entropy
  std::string state_path;
  std::string random_dims;  // "2x2x2"
  std::string check = "all";  // ssa | subadditivity | decomposition | lieb-ruskai | all

  // certify-representation / check-concavity
  std::string rep_path;
  std::string suite;  // parallel-sum | tensor-power | lieb | wyd | perspective | kubo-ando
  std::size_t k = 2;
  std::vector<double> p;
  int nodes = 64;
  bool curve = false;

  // run-suite
  std::vector<std::string> only;

  // tolerance overrides
  std::optional<double> certify_tol;
  std::optional<double> violate_tol;
  std::optional<double> slack_tol;
};

/// Parses "a,b" (bounds may be inf, -inf); throws ValidationError.
SpectrumWindow parse_window(const std::string& text);
/// Parses "2x3x2"; throws ValidationError.
std::vector<Eigen::Index> parse_dims(const std::string& text);

Report cmd_certify_function(const RunConfig& config);
Report cmd_check_entropy(const RunConfig& config);
Report cmd_certify_representation(const RunConfig& config);
Report cmd_check_concavity(const RunConfig& config);
Report cmd_run_suite(const RunConfig& config);

/// Dispatches on config.command.
Report run_command(const RunConfig& config);

}  // namespace matconvex
