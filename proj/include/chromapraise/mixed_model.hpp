#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace chromapraise {

/// Response, fixed-effects design and grouping for a random-intercept model
///   y = X beta + Z u + e,  u ~ N(0, sigma_u2 I),  e ~ N(0, sigma_e2 I).
struct DesignData {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;                     ///< N x p, intercept column included by the caller
  std::vector<int> groups;               ///< group id per row, 0..J-1
  std::vector<std::string> names;        ///< p column names
  std::vector<std::string> group_names;  ///< J group names

  [[nodiscard]] int n_obs() const { return static_cast<int>(y.size()); }
  [[nodiscard]] int n_coef() const { return static_cast<int>(X.cols()); }
  [[nodiscard]] int n_groups() const { return static_cast<int>(group_names.size()); }

  /// Throws ArgumentError on shape problems, empty groups or N <= p.
  /// fit() additionally requires two groups.
  void validate() const;
};

/// Builds a design with groups numbered by sorted group name, so the result
/// does not depend on row order.
DesignData make_design(Eigen::VectorXd y, Eigen::MatrixXd X, const std::vector<std::string>& group_labels,
                       std::vector<std::string> names);

enum class Estimation { ML, REML };

struct ProfiledDeviance {
  double deviance = 0.0;
  Eigen::VectorXd beta;
  double sigma_e2 = 0.0;
};

/// Deviance with beta and sigma_e2 maximized out at variance ratio lambda = sigma_u2 / sigma_e2.
ProfiledDeviance profiled_deviance(const DesignData& data, double lambda, Estimation method = Estimation::ML);

struct ModelFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd se;
  Eigen::MatrixXd cov;  ///< covariance of beta
  double sigma_u2 = 0.0;
  double sigma_e2 = 0.0;
  double lambda = 0.0;
  double deviance = 0.0;
  double loglik = 0.0;
  Eigen::VectorXd group_effects;  ///< BLUPs in group_names order
  double sigma_f2 = 0.0;          ///< population variance of X beta
  double r2_marginal = 0.0;
  double r2_conditional = 0.0;
  double group_var_se = 0.0;      ///< from the expected information of (sigma_u2, sigma_e2)
  Estimation method = Estimation::ML;
  int evaluations = 0;
  std::vector<std::pair<double, double>> trace;  ///< (lambda, deviance) in evaluation order
};

inline constexpr double kLambdaMax = 1e4;
inline constexpr double kLambdaTol = 1e-8;

ModelFit fit(const DesignData& data, Estimation method = Estimation::ML);

/// Marginal and conditional R squared from the three variance components.
std::pair<double, double> r_squared(double sigma_f2, double sigma_u2, double sigma_e2);

struct ProfileInterval {
  double low = 0.0;
  double high = 0.0;
  bool open_low = false;   ///< profile never crossed the cutoff below the estimate
  bool open_high = false;
};

/// Profile-likelihood interval for coefficient j: the set of values whose ML
/// profiled deviance stays within the chi-square(1) quantile of the optimum.
ProfileInterval profile_ci(const DesignData& data, const ModelFit& fit, int j, double level = 0.95);

/// ML profiled deviance with beta_j held at `value`, minimized over the other
/// coefficients and lambda.
double profile_deviance(const DesignData& data, int j, double value);

/// Names of columns involved in an exact or numerical linear dependency; empty when full rank.
std::vector<std::string> rank_deficient_columns(const DesignData& data);

}  // namespace chromapraise
