#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "chromapraise/mixed_model.hpp"

namespace chromapraise {

struct CoefRow {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double z = 0.0;
  double p = 1.0;
  ProfileInterval ci;
  double standardized = 0.0;
  bool binary = false;
};

struct CoefReport {
  std::vector<CoefRow> rows;
  double level = 0.95;
  double group_var = 0.0;
  double group_var_se = 0.0;
  double sigma_e2 = 0.0;
  double lambda = 0.0;
  double loglik = 0.0;
  double r2_marginal = 0.0;
  double r2_conditional = 0.0;
  int n_obs = 0;
  int n_groups = 0;
  Estimation method = Estimation::ML;
  std::string response;  ///< description of the response transform
};

/// "***" below 0.001, "**" below 0.01, "*" below 0.05.
std::string significance_stars(double p);

/// Two-sided normal p-value.
double normal_p_value(double z);

/// True when every value is 0 or 1.
bool is_binary(const Eigen::VectorXd& column);

/// Wald statistics, profile intervals and coefficients from a refit on
/// z-scored (sample standard deviation) non-binary predictors.
CoefReport coef_report(const DesignData& data, const ModelFit& fit, double level = 0.95);

/// Aligned text table in the layout of a statsmodels MixedLM summary.
std::string format_table(const CoefReport& report);

std::string coef_csv(const CoefReport& report);
std::string standardized_csv(const CoefReport& report);
nlohmann::ordered_json summary_json(const CoefReport& report);

/// Writes coefficients.csv, standardized.csv, summary.json and table.txt.
void write_report(const CoefReport& report, const std::filesystem::path& dir);

/// Rebuilds a report from coefficients.csv and summary.json in `dir`.
CoefReport read_report(const std::filesystem::path& dir);

}  // namespace chromapraise
