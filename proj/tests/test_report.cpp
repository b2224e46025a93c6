#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "chromapraise/csv.hpp"
#include "chromapraise/errors.hpp"
#include "chromapraise/report.hpp"
#include "lmm_sim.hpp"

using namespace chromapraise;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
  fs::path p = fs::path(TEST_TMP_DIR) / "report" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Intercept, a unit-variance predictor with slope 0.5, a binary flag and a wide-scale column.
DesignData mixed_design(unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const int n = 300, groups = 15;
  Eigen::MatrixXd x(n, 4);
  Eigen::VectorXd y(n);
  std::vector<double> u(groups);
  for (double& v : u) v = 0.5 * z(rng);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = z(rng);
    x(i, 2) = i % 4 == 0 ? 1.0 : 0.0;
    x(i, 3) = 100.0 + 40.0 * z(rng);
    y[i] = 2.0 + 0.5 * x(i, 1) - 0.8 * x(i, 2) + 0.002 * x(i, 3) + u[static_cast<std::size_t>(i % groups)] + 0.4 * z(rng);
    labels.push_back(sim::group_name(i % groups));
  }
  return make_design(y, x, labels, {"Intercept", "x", "flag", "wide"});
}

double sample_sd(const Eigen::VectorXd& v) {
  return std::sqrt((v.array() - v.mean()).square().sum() / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST(Stars, Thresholds) {
  EXPECT_EQ(significance_stars(0.0009), "***");
  EXPECT_EQ(significance_stars(0.001), "**");
  EXPECT_EQ(significance_stars(0.0099), "**");
  EXPECT_EQ(significance_stars(0.01), "*");
  EXPECT_EQ(significance_stars(0.049), "*");
  EXPECT_EQ(significance_stars(0.05), "");
  EXPECT_EQ(significance_stars(0.7), "");
}

TEST(PValue, NormalTails) {
  EXPECT_DOUBLE_EQ(normal_p_value(0.0), 1.0);
  EXPECT_NEAR(normal_p_value(1.959963984540054), 0.05, 1e-12);
  EXPECT_NEAR(normal_p_value(-2.5758293035489), 0.01, 1e-12);
}

TEST(Binary, Detection) {
  EXPECT_TRUE(is_binary(Eigen::Vector3d(0, 1, 1)));
  EXPECT_TRUE(is_binary(Eigen::Vector3d(1, 1, 1)));
  EXPECT_FALSE(is_binary(Eigen::Vector3d(0, 1, 2)));
  EXPECT_FALSE(is_binary(Eigen::Vector3d(0, 0.5, 1)));
}

TEST(CoefReport, InterceptOnly) {
  const DesignData full = mixed_design(1);
  DesignData d = make_design(full.y, Eigen::MatrixXd::Ones(full.n_obs(), 1), [&] {
    std::vector<std::string> l;
    for (int g : full.groups) l.push_back(full.group_names[static_cast<std::size_t>(g)]);
    return l;
  }(), {"Intercept"});
  const ModelFit f = fit(d);
  const CoefReport r = coef_report(d, f);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_DOUBLE_EQ(r.rows[0].z, f.beta[0] / f.se[0]);
  EXPECT_EQ(r.rows[0].standardized, r.rows[0].estimate);
}

TEST(CoefReport, RowsAreConsistent) {
  const DesignData d = mixed_design(2);
  const ModelFit f = fit(d);
  const CoefReport r = coef_report(d, f);
  ASSERT_EQ(r.rows.size(), 4u);
  for (std::size_t c = 0; c < r.rows.size(); ++c) {
    const CoefRow& row = r.rows[c];
    EXPECT_EQ(row.name, d.names[c]);
    EXPECT_EQ(row.estimate, f.beta[static_cast<Eigen::Index>(c)]);
    EXPECT_DOUBLE_EQ(row.z, row.estimate / row.se);
    EXPECT_GE(row.p, 0.0);
    EXPECT_LE(row.p, 1.0);
    EXPECT_LE(row.ci.low, row.estimate);
    EXPECT_GE(row.ci.high, row.estimate);
  }
  EXPECT_FALSE(r.rows[1].binary);
  EXPECT_TRUE(r.rows[2].binary);
  EXPECT_EQ(r.group_var, f.sigma_u2);
  EXPECT_LE(r.r2_marginal, r.r2_conditional);
}

TEST(CoefReport, StandardizedIsRawTimesSampleSd) {
  const DesignData d = mixed_design(3);
  const CoefReport r = coef_report(d, fit(d));
  for (int c : {1, 3}) {
    const double sd = sample_sd(d.X.col(c));
    EXPECT_NEAR(r.rows[static_cast<std::size_t>(c)].standardized, r.rows[static_cast<std::size_t>(c)].estimate * sd,
                1e-8 * std::abs(r.rows[static_cast<std::size_t>(c)].standardized));
  }
  // unit-variance predictor: standardized close to raw
  EXPECT_NEAR(r.rows[1].standardized, r.rows[1].estimate, 0.1 * std::abs(r.rows[1].estimate));
  EXPECT_NEAR(r.rows[2].standardized, r.rows[2].estimate, 1e-8);
}

TEST(CoefReport, ScaleEquivariance) {
  const DesignData d = mixed_design(4);
  DesignData s = d;
  s.X.col(3) *= 0.01;
  const CoefReport a = coef_report(d, fit(d));
  const CoefReport b = coef_report(s, fit(s));
  EXPECT_NEAR(b.rows[3].estimate, a.rows[3].estimate * 100.0, 1e-8 * std::abs(b.rows[3].estimate));
  EXPECT_NEAR(b.rows[3].z, a.rows[3].z, 1e-8);
  EXPECT_NEAR(b.rows[3].p, a.rows[3].p, 1e-8);
  EXPECT_NEAR(b.rows[3].standardized, a.rows[3].standardized, 1e-8);
}

TEST(Table, Layout) {
  const DesignData d = mixed_design(5);
  CoefReport r = coef_report(d, fit(d));
  r.response = "log(price)";
  const std::string t = format_table(r);
  EXPECT_NE(t.find("Mixed Linear Model Regression Results"), std::string::npos);
  EXPECT_NE(t.find("Dependent Variable:"), std::string::npos);
  EXPECT_NE(t.find("log(price)"), std::string::npos);
  EXPECT_NE(t.find("Group Var"), std::string::npos);
  EXPECT_NE(t.find("[0.025"), std::string::npos);
  EXPECT_NE(t.find("0.975]"), std::string::npos);
  EXPECT_NE(t.find("Marginal and conditional R2 equal "), std::string::npos);
  EXPECT_NE(t.find(" respectively."), std::string::npos);
  EXPECT_NE(t.find("***"), std::string::npos);
  EXPECT_NE(t.find("Levels of significance"), std::string::npos);
}

TEST(Csv, CoefficientColumns) {
  const DesignData d = mixed_design(6);
  const CoefReport r = coef_report(d, fit(d));
  const CsvTable t = parse_csv(coef_csv(r));
  EXPECT_EQ(t.header, (std::vector<std::string>{"name", "coef", "std_err", "z", "p_value", "stars", "ci_low", "ci_high",
                                                "ci_open_low", "ci_open_high", "standardized", "binary"}));
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(parse_number(t.rows[1][1]), r.rows[1].estimate);
  EXPECT_EQ(t.rows[2][11], "1");
  const CsvTable s = parse_csv(standardized_csv(r));
  EXPECT_EQ(s.header, (std::vector<std::string>{"name", "standardized", "binary"}));
  EXPECT_EQ(s.rows.size(), 4u);
}

TEST(Json, Summary) {
  const DesignData d = mixed_design(7);
  const ModelFit f = fit(d);
  const auto j = summary_json(coef_report(d, f));
  EXPECT_EQ(j.at("method"), "ML");
  EXPECT_EQ(j.at("n_obs"), 300);
  EXPECT_EQ(j.at("n_groups"), 15);
  EXPECT_EQ(j.at("loglik").get<double>(), f.loglik);
  EXPECT_EQ(j.at("sigma_u2").get<double>(), f.sigma_u2);
  EXPECT_LE(j.at("r2_marginal").get<double>(), j.at("r2_conditional").get<double>());
}

TEST(Files, WriteReadRoundTrip) {
  const DesignData d = mixed_design(8);
  CoefReport r = coef_report(d, fit(d));
  r.response = "log(price)";
  const fs::path dir = tmp_dir("roundtrip");
  write_report(r, dir);
  for (const char* f : {"coefficients.csv", "standardized.csv", "summary.json", "table.txt"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const CoefReport back = read_report(dir);
  ASSERT_EQ(back.rows.size(), r.rows.size());
  for (std::size_t c = 0; c < r.rows.size(); ++c) {
    EXPECT_EQ(back.rows[c].estimate, r.rows[c].estimate);
    EXPECT_EQ(back.rows[c].ci.high, r.rows[c].ci.high);
    EXPECT_EQ(back.rows[c].standardized, r.rows[c].standardized);
  }
  EXPECT_EQ(back.loglik, r.loglik);
  EXPECT_EQ(format_table(back), format_table(r));
  EXPECT_EQ(read_text(dir / "table.txt"), format_table(r));
}

TEST(Files, MissingReport) { EXPECT_THROW(read_report(tmp_dir("empty")), IoError); }
