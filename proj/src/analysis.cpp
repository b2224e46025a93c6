#include "chromapraise/analysis.hpp"

#include <cmath>

#include "chromapraise/errors.hpp"

namespace chromapraise {

Response parse_response(std::string_view name) {
  if (name == "log") return Response::Log;
  if (name == "log_usd") return Response::LogUsd;
  if (name == "raw") return Response::Raw;
  throw ArgumentError("unknown response '" + std::string(name) + "', expected log, log_usd or raw");
}

std::string response_label(Response r) {
  switch (r) {
    case Response::Log: return "log(price)";
    case Response::LogUsd: return "log(price_usd)";
    case Response::Raw: return "price";
  }
  return "price";
}

std::vector<std::string> split_names(std::string_view list) {
  std::vector<std::string> out;
  while (!list.empty()) {
    const auto comma = list.find(',');
    std::string_view item = list.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return out;
}

DesignData design_from_features(const CsvTable& t, const std::vector<std::string>& predictors, Response response) {
  std::vector<std::string> missing;
  for (const char* name : {"author", "price"}) {
    if (t.column(name) < 0) missing.emplace_back(name);
  }
  for (const auto& name : predictors) {
    if (t.column(name) < 0) missing.push_back(name);
  }
  if (!missing.empty()) {
    std::string msg = "feature table is missing columns:";
    for (const auto& m : missing) msg += " " + m;
    throw FormatError(msg);
  }
  const int c_author = t.column("author");
  const int c_price = t.column("price");
  const Eigen::Index n = static_cast<Eigen::Index>(t.rows.size());
  const Eigen::Index p = static_cast<Eigen::Index>(predictors.size()) + 1;
  Eigen::VectorXd y(n);
  Eigen::MatrixXd X(n, p);
  std::vector<std::string> groups;
  groups.reserve(t.rows.size());
  std::vector<int> cols;
  for (const auto& name : predictors) cols.push_back(t.column(name));

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = t.rows[static_cast<std::size_t>(i)];
    auto cell = [&](int c, const std::string& name) {
      double v = 0.0;
      try {
        v = parse_number(row[static_cast<std::size_t>(c)]);
      } catch (const FormatError& e) {
        throw FormatError("row " + std::to_string(i + 2) + ", column " + name + ": " + e.what());
      }
      if (!std::isfinite(v)) throw FormatError("row " + std::to_string(i + 2) + ", column " + name + ": missing value");
      return v;
    };
    const double price = cell(c_price, "price");
    if (!(price > 0.0)) throw FormatError("row " + std::to_string(i + 2) + ": price must be > 0");
    switch (response) {
      case Response::Log: y[i] = std::log(price); break;
      case Response::LogUsd: y[i] = std::log(price * 1e6); break;
      case Response::Raw: y[i] = price; break;
    }
    X(i, 0) = 1.0;
    for (std::size_t k = 0; k < cols.size(); ++k) X(i, static_cast<Eigen::Index>(k) + 1) = cell(cols[k], predictors[k]);
    groups.push_back(row[static_cast<std::size_t>(c_author)]);
  }
  std::vector<std::string> names{"Intercept"};
  names.insert(names.end(), predictors.begin(), predictors.end());
  return make_design(std::move(y), std::move(X), groups, std::move(names));
}

}  // namespace chromapraise
