#pragma once

#include <string>
#include <vector>

#include "speclab/abel_lidskii.hpp"
#include "speclab/config.hpp"
#include "speclab/jordan.hpp"
#include "speclab/types.hpp"

namespace speclab {

inline constexpr const char* kToolVersion = "speclab 0.1.0";

/// A built model: w is the invertible truncation the evolution acts through,
/// b = w^{-1} the compact side carrying the root system.
struct ModelBuild {
  std::string variant;
  ComplexMatrix w;
  ComplexMatrix b;
  RootSystem root_system;          // of b
  BiorthogonalSystem biorthogonal; // of b
  double sector_halfangle = 0.0;   // certified semi-angle when known, 0 for selfadjoint models
};

/// Builds the model declared under the config's model.* keys.
ModelBuild build_model(const Config& cfg);

ComplexVector initial_vector(const Config& cfg, int dim);

struct CauchyResult {
  std::vector<double> t_grid;
  std::vector<ComplexVector> u;
  std::vector<double> residuals;               // -1 where not computed (t = 0)
  std::vector<std::vector<double>> group_norms;
  ComplexVector f;
  BracketingPlan plan;
  double t0_extrapolation_error = 0.0;
  bool t0_ok = false;
  double max_residual = 0.0;
};

/// u(t) = sum_nu A_nu(phi, t) f on the t grid, with the evolution residual
/// ||du/dt + phi(W) u|| / ||u|| from a 5-point stencil and the matrix-function
/// route for phi(W).
CauchyResult solve_cauchy(const ModelBuild& model, const OperatorFunctionSpec& phi,
                          const std::vector<double>& t_grid, const ComplexVector& f,
                          const BracketingPlan& plan, int threads = 1);

struct ReportEnvelope {
  std::string inputs_digest;
  std::string tool_version;
  std::vector<std::pair<std::string, bool>> verdicts;
  std::vector<std::pair<std::string, double>> metrics;
  bool all_pass() const;
  std::string to_json() const;
};

/// Full pipeline: build -> diagnostics -> plan -> summation -> contour
/// cross-check -> solve; writes CSV tables and the JSON envelope under
/// out_dir. Reruns with the same config are byte-identical.
ReportEnvelope run_experiment(const Config& cfg, const std::string& out_dir);

}  // namespace speclab
