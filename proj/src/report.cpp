#include "chromapraise/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "chromapraise/csv.hpp"
#include "chromapraise/errors.hpp"

namespace chromapraise {

namespace {

std::string fixed(double v, int precision) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  std::string s = buf;
  if (s == "-0.000" || s == "-0.0000") s.erase(0, 1);
  return s;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string quantile_label(double q) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", q);
  return buf;
}

double number_or_nan(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j[key].get<double>();
}

}  // namespace

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

double normal_p_value(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

bool is_binary(const Eigen::VectorXd& column) {
  return ((column.array() == 0.0) || (column.array() == 1.0)).all();
}

CoefReport coef_report(const DesignData& data, const ModelFit& fit, double level) {
  CoefReport rep;
  rep.level = level;
  rep.group_var = fit.sigma_u2;
  rep.group_var_se = fit.group_var_se;
  rep.sigma_e2 = fit.sigma_e2;
  rep.lambda = fit.lambda;
  rep.loglik = fit.loglik;
  rep.r2_marginal = fit.r2_marginal;
  rep.r2_conditional = fit.r2_conditional;
  rep.n_obs = data.n_obs();
  rep.n_groups = data.n_groups();
  rep.method = fit.method;

  DesignData scaled = data;
  std::vector<bool> binary(static_cast<std::size_t>(data.n_coef()));
  for (int c = 0; c < data.n_coef(); ++c) {
    const Eigen::VectorXd col = data.X.col(c);
    binary[c] = is_binary(col);
    if (binary[c]) continue;
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() / (col.size() - 1));
    if (sd > 0.0) scaled.X.col(c) = (col.array() - mean) / sd;
  }
  const ModelFit refit = chromapraise::fit(scaled, fit.method);

  for (int c = 0; c < data.n_coef(); ++c) {
    CoefRow row;
    row.name = data.names[c];
    row.estimate = fit.beta[c];
    row.se = fit.se[c];
    row.z = row.se > 0.0 ? row.estimate / row.se : std::numeric_limits<double>::quiet_NaN();
    row.p = std::isnan(row.z) ? std::numeric_limits<double>::quiet_NaN() : normal_p_value(row.z);
    row.ci = profile_ci(data, fit, c, level);
    row.standardized = refit.beta[c];
    row.binary = binary[c];
    rep.rows.push_back(row);
  }
  return rep;
}

std::string format_table(const CoefReport& rep) {
  std::size_t name_w = 9;
  for (const auto& r : rep.rows) name_w = std::max(name_w, r.name.size());
  name_w += 2;
  const std::size_t col_w = 10;
  const std::size_t total = name_w + 6 * col_w + 5;
  const std::string rule_heavy(total, '=');
  const std::string rule_light(total, '-');
  const double lo_q = (1.0 - rep.level) / 2.0;

  auto kv = [&](const std::string& k1, const std::string& v1, const std::string& k2, const std::string& v2) {
    const std::size_t half = total / 2;
    std::string left = pad_right(k1, 20) + v1;
    std::string right = pad_right(k2, 22) + v2;
    return pad_right(left, half) + right + "\n";
  };

  std::string out;
  const std::string title = "Mixed Linear Model Regression Results";
  out += std::string((total > title.size() ? (total - title.size()) / 2 : 0), ' ') + title + "\n";
  out += rule_heavy + "\n";
  out += kv("Model:", "MixedLM", "Dependent Variable:", rep.response.empty() ? "y" : rep.response);
  out += kv("No. Observations:", std::to_string(rep.n_obs), "Method:", rep.method == Estimation::ML ? "ML" : "REML");
  out += kv("No. Groups:", std::to_string(rep.n_groups), "Scale:", fixed(rep.sigma_e2, 4));
  out += kv("Log-Likelihood:", fixed(rep.loglik, 4), "Lambda:", fixed(rep.lambda, 4));
  out += rule_light + "\n";
  out += pad_right("", name_w) + pad_left("Coef.", col_w) + pad_left("Std.Err.", col_w) + pad_left("z", col_w) +
         pad_left("P>|z|", col_w) + pad_left("[" + quantile_label(lo_q), col_w) +
         pad_left(quantile_label(1.0 - lo_q) + "]", col_w) + "\n";
  out += rule_light + "\n";
  for (const auto& r : rep.rows) {
    const std::string low = r.ci.open_low ? "-inf" : fixed(r.ci.low, 3);
    const std::string high = r.ci.open_high ? "inf" : fixed(r.ci.high, 3);
    std::string line = pad_right(r.name, name_w) + pad_left(fixed(r.estimate, 3), col_w) +
                       pad_left(fixed(r.se, 3), col_w) + pad_left(fixed(r.z, 3), col_w) +
                       pad_left(fixed(r.p, 3), col_w) + pad_left(low, col_w) + pad_left(high, col_w);
    const std::string stars = significance_stars(r.p);
    if (!stars.empty()) line += " " + stars;
    out += line + "\n";
  }
  out += pad_right("Group Var", name_w) + pad_left(fixed(rep.group_var, 3), col_w) +
         pad_left(fixed(rep.group_var_se, 3), col_w) + "\n";
  out += rule_heavy + "\n";
  out += "Marginal and conditional R2 equal " + fixed(rep.r2_marginal, 3) + " and " + fixed(rep.r2_conditional, 3) +
         " respectively.\n";
  out += "Levels of significance: * (0.05), ** (0.01), *** (0.001)\n";
  return out;
}

std::string coef_csv(const CoefReport& rep) {
  std::string out = csv_line({"name", "coef", "std_err", "z", "p_value", "stars", "ci_low", "ci_high", "ci_open_low",
                              "ci_open_high", "standardized", "binary"});
  for (const auto& r : rep.rows) {
    out += csv_line({r.name, format_number(r.estimate), format_number(r.se), format_number(r.z), format_number(r.p),
                     significance_stars(r.p), format_number(r.ci.low), format_number(r.ci.high),
                     r.ci.open_low ? "1" : "0", r.ci.open_high ? "1" : "0", format_number(r.standardized),
                     r.binary ? "1" : "0"});
  }
  return out;
}

std::string standardized_csv(const CoefReport& rep) {
  std::string out = csv_line({"name", "standardized", "binary"});
  for (const auto& r : rep.rows) {
    out += csv_line({r.name, format_number(r.standardized), r.binary ? "1" : "0"});
  }
  return out;
}

nlohmann::ordered_json summary_json(const CoefReport& rep) {
  nlohmann::ordered_json j;
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); };
  j["method"] = rep.method == Estimation::ML ? "ML" : "REML";
  j["response"] = rep.response;
  j["n_obs"] = rep.n_obs;
  j["n_groups"] = rep.n_groups;
  j["n_coef"] = rep.rows.size();
  j["loglik"] = num(rep.loglik);
  j["lambda"] = num(rep.lambda);
  j["sigma_u2"] = num(rep.group_var);
  j["sigma_u2_se"] = num(rep.group_var_se);
  j["sigma_e2"] = num(rep.sigma_e2);
  j["r2_marginal"] = num(rep.r2_marginal);
  j["r2_conditional"] = num(rep.r2_conditional);
  j["level"] = rep.level;
  return j;
}

void write_report(const CoefReport& rep, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / "coefficients.csv", coef_csv(rep));
  write_text(dir / "standardized.csv", standardized_csv(rep));
  write_text(dir / "summary.json", summary_json(rep).dump(2) + "\n");
  write_text(dir / "table.txt", format_table(rep));
}

CoefReport read_report(const std::filesystem::path& dir) {
  const CsvTable t = read_csv(dir / "coefficients.csv");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(dir / "summary.json"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("summary.json: ") + e.what());
  }
  CoefReport rep;
  const int c_name = t.require("name"), c_coef = t.require("coef"), c_se = t.require("std_err"),
            c_z = t.require("z"), c_p = t.require("p_value"), c_lo = t.require("ci_low"), c_hi = t.require("ci_high"),
            c_olo = t.require("ci_open_low"), c_ohi = t.require("ci_open_high"),
            c_std = t.require("standardized"), c_bin = t.require("binary");
  for (const auto& row : t.rows) {
    CoefRow r;
    r.name = row[c_name];
    r.estimate = parse_number(row[c_coef]);
    r.se = parse_number(row[c_se]);
    r.z = parse_number(row[c_z]);
    r.p = parse_number(row[c_p]);
    r.ci.low = parse_number(row[c_lo]);
    r.ci.high = parse_number(row[c_hi]);
    r.ci.open_low = row[c_olo] == "1";
    r.ci.open_high = row[c_ohi] == "1";
    r.standardized = parse_number(row[c_std]);
    r.binary = row[c_bin] == "1";
    rep.rows.push_back(r);
  }
  try {
    rep.method = j.at("method").get<std::string>() == "REML" ? Estimation::REML : Estimation::ML;
    rep.response = j.at("response").get<std::string>();
    rep.n_obs = j.at("n_obs").get<int>();
    rep.n_groups = j.at("n_groups").get<int>();
    rep.level = j.at("level").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("summary.json: ") + e.what());
  }
  rep.loglik = number_or_nan(j, "loglik");
  rep.lambda = number_or_nan(j, "lambda");
  rep.group_var = number_or_nan(j, "sigma_u2");
  rep.group_var_se = number_or_nan(j, "sigma_u2_se");
  rep.sigma_e2 = number_or_nan(j, "sigma_e2");
  rep.r2_marginal = number_or_nan(j, "r2_marginal");
  rep.r2_conditional = number_or_nan(j, "r2_conditional");
  return rep;
}

}  // namespace chromapraise
