#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chromapraise/config.hpp"
#include "chromapraise/csv.hpp"
#include "chromapraise/imaging.hpp"

namespace chromapraise {

struct PaintingMeta {
  std::string id;
  std::string author;
  double price = 0.0;  ///< millions USD
  double square_m = 0.0;
  double ExhibitedNum = 0.0;
  double ProvenanceNum = 0.0;
  double LiteratureNum = 0.0;
  double date_of_birth = 0.0;
  int oil = 0, ink = 0, gouache = 0, lithograph = 0, canvas = 0, paper = 0;
  int Christies = 0, Sothebys = 0;
  int Sign = 0;
};

inline constexpr std::array<std::string_view, 17> kMetaColumns{
    "id",  "author",  "price",      "square_m", "ExhibitedNum", "ProvenanceNum", "LiteratureNum", "date_of_birth", "oil",
    "ink", "gouache", "lithograph", "canvas",   "paper",        "Christies",     "Sothebys",      "Sign"};

/// Descriptive-statistics feature columns in table order: 14 metadata
/// columns then 29 visual ones.
inline constexpr std::array<std::string_view, 43> kFeatureColumns{
    "square_m",         "ExhibitedNum",         "ProvenanceNum",        "LiteratureNum",  "date_of_birth",
    "oil",              "ink",                  "gouache",              "lithograph",     "canvas",
    "paper",            "Christies",            "Sothebys",             "Sign",           "lines_variance",
    "X_contrst_triad",  "X_classic_triad",      "X_rectangle",          "X_analog_triad", "X_quad",
    "X_comp",           "ccm",                  "points_of_interest",   "fls_h",          "fls_s",
    "fls_v",            "sls_h",                "sls_s",                "sls_v",          "contrast_h",
    "contrast_s",       "contrast_v",           "area_of_fls",          "area_of_sls",    "number_of_segments",
    "shape_complexity_fls", "shape_complexity_sls", "black",            "CCT",            "blue_cluster",
    "green_cluster",    "red_cluster",          "yellow_cluster"};

inline constexpr std::size_t kMetaFeatureCount = 14;
inline constexpr std::size_t kVisualFeatureCount = kFeatureColumns.size() - kMetaFeatureCount;

/// Model predictors: every feature column except Sothebys, which is the
/// complement of Christies.
std::vector<std::string> default_predictors();

/// id, author, price, the 43 feature columns, edge_density, config_hash.
std::vector<std::string> feature_table_header();

std::vector<PaintingMeta> parse_meta(const CsvTable& table);
std::vector<PaintingMeta> read_meta(const std::filesystem::path& path);
std::array<double, kMetaFeatureCount> meta_values(const PaintingMeta& m);

struct FeatureRow {
  PaintingMeta meta;
  std::array<double, kVisualFeatureCount> visual{};  ///< lines_variance ... yellow_cluster
  double edge_density = 0.0;
  std::string config_hash;

  /// All 43 feature values in column order.
  [[nodiscard]] std::array<double, kFeatureColumns.size()> values() const;
  [[nodiscard]] double get(std::string_view column) const;
};

/// Raised by extract_features, carries the stage that failed.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)) {}
  [[nodiscard]] const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Visual features of an already normalized image. Stages run in the order
/// complexity, saliency, edges, harmony, segmentation, local features.
FeatureRow extract_image_features(const RgbImage& img, const PaintingMeta& meta, const PipelineConfig& cfg);

/// Loads, normalizes and extracts. Throws StageError.
FeatureRow extract_features(const std::filesystem::path& image_path, const PaintingMeta& meta,
                            const PipelineConfig& cfg);

/// images_dir/<id>.png, .jpg or .jpeg; nullopt when none exists.
std::optional<std::filesystem::path> find_image(const std::filesystem::path& images_dir, const std::string& id);

struct ExtractFailure {
  std::string id;
  std::string path;
  std::string stage;
  std::string message;
};

struct CorpusResult {
  std::vector<FeatureRow> rows;  ///< successful rows in metadata order
  std::vector<ExtractFailure> failures;
};

/// Extracts every painting in `metas` with `jobs` worker threads. Output
/// order follows `metas` whatever the completion order.
CorpusResult extract_corpus(const std::filesystem::path& images_dir, const std::vector<PaintingMeta>& metas,
                            const PipelineConfig& cfg, int jobs = 1);

/// Throws ArgumentError without writing anything when `rows` is empty.
void write_feature_table(const std::vector<FeatureRow>& rows, const std::filesystem::path& path);
void write_error_table(const std::vector<ExtractFailure>& failures, const std::filesystem::path& path);

}  // namespace chromapraise
