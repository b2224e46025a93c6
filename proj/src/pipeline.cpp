#include "chromapraise/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "chromapraise/complexity.hpp"
#include "chromapraise/edges.hpp"
#include "chromapraise/errors.hpp"
#include "chromapraise/harmony.hpp"
#include "chromapraise/local_features.hpp"
#include "chromapraise/saliency.hpp"
#include "chromapraise/segmentation.hpp"

namespace chromapraise {

namespace {

template <typename F>
auto run_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

double meta_number(const std::string& field, const std::string& column, std::size_t row) {
  try {
    const double v = parse_number(field);
    if (!std::isfinite(v)) throw FormatError("missing value");
    return v;
  } catch (const FormatError& e) {
    throw FormatError("metadata row " + std::to_string(row) + ", column " + column + ": " + e.what());
  }
}

int meta_flag(const std::string& field, const std::string& column, std::size_t row) {
  const double v = meta_number(field, column, row);
  if (v != 0.0 && v != 1.0) {
    throw FormatError("metadata row " + std::to_string(row) + ", column " + column + ": flag must be 0 or 1");
  }
  return static_cast<int>(v);
}

}  // namespace

std::vector<std::string> default_predictors() {
  std::vector<std::string> out;
  for (auto c : kFeatureColumns) {
    if (c != "Sothebys") out.emplace_back(c);
  }
  return out;
}

std::vector<std::string> feature_table_header() {
  std::vector<std::string> h{"id", "author", "price"};
  for (auto c : kFeatureColumns) h.emplace_back(c);
  h.emplace_back("edge_density");
  h.emplace_back("config_hash");
  return h;
}

std::vector<PaintingMeta> parse_meta(const CsvTable& t) {
  std::array<int, kMetaColumns.size()> col{};
  for (std::size_t k = 0; k < kMetaColumns.size(); ++k) col[k] = t.require(kMetaColumns[k]);
  std::vector<PaintingMeta> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t line = r + 2;
    auto num = [&](int k) { return meta_number(row[col[k]], std::string(kMetaColumns[k]), line); };
    auto flag = [&](int k) { return meta_flag(row[col[k]], std::string(kMetaColumns[k]), line); };
    PaintingMeta m;
    m.id = row[col[0]];
    m.author = row[col[1]];
    if (m.id.empty()) throw FormatError("metadata row " + std::to_string(line) + ": empty id");
    if (m.author.empty()) throw FormatError("metadata row " + std::to_string(line) + ": empty author");
    m.price = num(2);
    if (!(m.price > 0.0)) throw FormatError("metadata row " + std::to_string(line) + ": price must be > 0");
    m.square_m = num(3);
    m.ExhibitedNum = num(4);
    m.ProvenanceNum = num(5);
    m.LiteratureNum = num(6);
    m.date_of_birth = num(7);
    m.oil = flag(8);
    m.ink = flag(9);
    m.gouache = flag(10);
    m.lithograph = flag(11);
    m.canvas = flag(12);
    m.paper = flag(13);
    m.Christies = flag(14);
    m.Sothebys = flag(15);
    m.Sign = flag(16);
    if (m.Christies + m.Sothebys != 1) {
      throw FormatError("metadata row " + std::to_string(line) + ": exactly one of Christies, Sothebys must be 1");
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<PaintingMeta> read_meta(const std::filesystem::path& path) { return parse_meta(read_csv(path)); }

std::array<double, kMetaFeatureCount> meta_values(const PaintingMeta& m) {
  return {m.square_m,
          m.ExhibitedNum,
          m.ProvenanceNum,
          m.LiteratureNum,
          m.date_of_birth,
          static_cast<double>(m.oil),
          static_cast<double>(m.ink),
          static_cast<double>(m.gouache),
          static_cast<double>(m.lithograph),
          static_cast<double>(m.canvas),
          static_cast<double>(m.paper),
          static_cast<double>(m.Christies),
          static_cast<double>(m.Sothebys),
          static_cast<double>(m.Sign)};
}

std::array<double, kFeatureColumns.size()> FeatureRow::values() const {
  std::array<double, kFeatureColumns.size()> out{};
  const auto mv = meta_values(meta);
  std::copy(mv.begin(), mv.end(), out.begin());
  std::copy(visual.begin(), visual.end(), out.begin() + kMetaFeatureCount);
  return out;
}

double FeatureRow::get(std::string_view column) const {
  const auto v = values();
  for (std::size_t k = 0; k < kFeatureColumns.size(); ++k) {
    if (kFeatureColumns[k] == column) return v[k];
  }
  if (column == "edge_density") return edge_density;
  if (column == "price") return meta.price;
  throw ArgumentError("unknown feature column '" + std::string(column) + "'");
}

FeatureRow extract_image_features(const RgbImage& img, const PaintingMeta& meta, const PipelineConfig& cfg) {
  FeatureRow row;
  row.meta = meta;
  row.config_hash = config_hash(cfg);

  const LabImage lab = run_stage("imaging", [&] { return srgb_to_lab(img); });
  const HsvImage hsv = run_stage("imaging", [&] { return rgb_to_hsv(img); });
  const GrayImage gray = run_stage("imaging", [&] { return to_gray(img); });

  const double ccm_value = run_stage("complexity", [&] { return ccm(lab, cfg.ccm).scalar; });
  const double poi = run_stage("saliency", [&] {
    return static_cast<double>(points_of_interest(dst_map(gray, cfg.dst), cfg.dst).count());
  });
  const auto [lines_var, density] = run_stage("edges", [&] {
    const CannyResult c = canny(gray, cfg.edges);
    return std::pair{lines_variance(c.gradient, c.edges), edge_density(c.edges)};
  });
  const auto [scores, clusters] = run_stage("harmony", [&] {
    const FrequencyDecomposition fd = frequency_decomposition(hsv, cfg.wheel);
    return std::pair{harmony_scores(fd.histogram), cluster_frequencies(fd.histogram, img)};
  });
  const Segmentation seg = run_stage("segmentation", [&] { return segment(lab, hsv, cfg.seg); });
  const LocalFeatures lf = run_stage("local_features", [&] { return local_features(seg); });

  row.visual = {lines_var,
                scores.contrast_triad,
                scores.classic_triad,
                scores.rectangle,
                scores.analogue_triad,
                scores.tetrad,
                scores.complementary,
                ccm_value,
                poi,
                lf.fls_h,
                lf.fls_s,
                lf.fls_v,
                lf.sls_h,
                lf.sls_s,
                lf.sls_v,
                lf.contrast_h,
                lf.contrast_s,
                lf.contrast_v,
                lf.area_of_fls,
                lf.area_of_sls,
                lf.number_of_segments,
                lf.shape_complexity_fls,
                lf.shape_complexity_sls,
                clusters.black,
                clusters.cct,
                clusters.blue,
                clusters.green,
                clusters.red,
                clusters.yellow};
  row.edge_density = density;
  for (double v : row.visual) {
    if (!std::isfinite(v)) throw StageError("local_features", "non-finite feature value");
  }
  return row;
}

FeatureRow extract_features(const std::filesystem::path& image_path, const PaintingMeta& meta,
                            const PipelineConfig& cfg) {
  const RgbImage img = run_stage("load", [&] { return load_and_normalize(image_path, cfg.max_side); });
  return extract_image_features(img, meta, cfg);
}

std::optional<std::filesystem::path> find_image(const std::filesystem::path& images_dir, const std::string& id) {
  for (const char* ext : {".png", ".jpg", ".jpeg", ".PNG", ".JPG", ".JPEG"}) {
    std::filesystem::path p = images_dir / (id + ext);
    std::error_code ec;
    if (std::filesystem::is_regular_file(p, ec)) return p;
  }
  return std::nullopt;
}

CorpusResult extract_corpus(const std::filesystem::path& images_dir, const std::vector<PaintingMeta>& metas,
                            const PipelineConfig& cfg, int jobs) {
  validate_config(cfg);
  struct Slot {
    std::optional<FeatureRow> row;
    std::optional<ExtractFailure> failure;
  };
  std::vector<Slot> slots(metas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < metas.size(); i = next++) {
      const PaintingMeta& m = metas[i];
      const auto path = find_image(images_dir, m.id);
      if (!path) {
        slots[i].failure = ExtractFailure{m.id, (images_dir / m.id).string(), "load", "no .png/.jpg/.jpeg image for id"};
        continue;
      }
      try {
        slots[i].row = extract_features(*path, m, cfg);
      } catch (const StageError& e) {
        slots[i].failure = ExtractFailure{m.id, path->string(), e.stage(), e.what()};
      } catch (const std::exception& e) {
        slots[i].failure = ExtractFailure{m.id, path->string(), "internal", e.what()};
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(metas.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  CorpusResult out;
  for (auto& s : slots) {
    if (s.row) out.rows.push_back(std::move(*s.row));
    if (s.failure) out.failures.push_back(std::move(*s.failure));
  }
  return out;
}

void write_feature_table(const std::vector<FeatureRow>& rows, const std::filesystem::path& path) {
  if (rows.empty()) throw ArgumentError("no successful rows to write");
  std::string text = csv_line(feature_table_header());
  for (const auto& r : rows) {
    std::vector<std::string> fields{r.meta.id, r.meta.author, format_number(r.meta.price)};
    for (double v : r.values()) fields.push_back(format_number(v));
    fields.push_back(format_number(r.edge_density));
    fields.push_back(r.config_hash);
    text += csv_line(fields);
  }
  write_text(path, text);
}

void write_error_table(const std::vector<ExtractFailure>& failures, const std::filesystem::path& path) {
  std::string text = csv_line({"id", "path", "stage", "message"});
  for (const auto& f : failures) text += csv_line({f.id, f.path, f.stage, f.message});
  write_text(path, text);
}

}  // namespace chromapraise
