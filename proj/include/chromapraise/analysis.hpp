#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chromapraise/csv.hpp"
#include "chromapraise/mixed_model.hpp"

namespace chromapraise {

enum class Response {
  Log,     ///< natural log of price in millions USD
  LogUsd,  ///< natural log of price in USD
  Raw,     ///< price in millions USD
};

Response parse_response(std::string_view name);
std::string response_label(Response r);

/// Random-intercept design from a feature table: response from `price`,
/// groups from `author`, an Intercept column followed by `predictors`.
/// Missing columns, non-numeric cells and non-positive prices are FormatErrors.
DesignData design_from_features(const CsvTable& table, const std::vector<std::string>& predictors,
                                Response response = Response::Log);

/// Splits "a,b , c" into names, dropping empty entries.
std::vector<std::string> split_names(std::string_view list);

}  // namespace chromapraise
