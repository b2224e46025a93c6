// chromapraise: feature extraction and mixed-model pricing analysis for paintings.
//
//   chromapraise synth   --out DIR [--n 40] [--seed 42]
//   chromapraise extract --images DIR --meta CSV --out CSV [--config FILE] [--jobs N]
//   chromapraise fit     --features CSV --out DIR [--predictors a,b] [--level 0.95] [--reml]
//   chromapraise report  --fit DIR
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "chromapraise/analysis.hpp"
#include "chromapraise/config.hpp"
#include "chromapraise/csv.hpp"
#include "chromapraise/errors.hpp"
#include "chromapraise/mixed_model.hpp"
#include "chromapraise/pipeline.hpp"
#include "chromapraise/report.hpp"
#include "chromapraise/synth.hpp"

namespace fs = std::filesystem;
using namespace chromapraise;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_dir(const fs::path& p, const char* flag) {
  if (!fs::is_directory(p)) throw UsageError(std::string(flag) + ": not a directory: " + p.string());
}

void require_file(const fs::path& p, const char* flag) {
  if (!fs::is_regular_file(p)) throw UsageError(std::string(flag) + ": no such file: " + p.string());
}

PipelineConfig resolve_config(const std::string& flag_value) {
  std::string path = flag_value;
  if (path.empty()) {
    if (const char* env = std::getenv("CHROMAPRAISE_CONFIG"); env && *env) path = env;
  }
  if (path.empty()) return {};
  require_file(path, "--config");
  return load_config(path);
}

int cmd_synth(const fs::path& out, int n, unsigned long long seed) {
  if (n < 10) throw UsageError("--n must be at least 10");
  synthesize_corpus(out, n, seed);
  std::cout << "wrote " << n << " paintings to " << out.string() << "\n";
  return kOk;
}

int cmd_extract(const fs::path& images, const fs::path& meta, const fs::path& out, const std::string& config,
                int jobs, fs::path errors) {
  require_dir(images, "--images");
  require_file(meta, "--meta");
  if (jobs < 0) throw UsageError("--jobs must be >= 0");
  if (jobs == 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const PipelineConfig cfg = resolve_config(config);
  const auto metas = read_meta(meta);
  const CorpusResult res = extract_corpus(images, metas, cfg, jobs);
  if (errors.empty()) errors = fs::path(out.string() + ".errors.csv");
  write_error_table(res.failures, errors);
  for (const auto& f : res.failures) {
    std::cerr << "failed " << f.id << " [" << f.stage << "]: " << f.message << "\n";
  }
  std::cout << res.rows.size() << " of " << metas.size() << " images extracted, " << res.failures.size()
            << " failed\n";
  if (res.rows.empty()) {
    std::cerr << "error: no image was extracted from " << images.string() << "\n";
    return kData;
  }
  write_feature_table(res.rows, out);
  return kOk;
}

int cmd_fit(const fs::path& features, const fs::path& out, const std::string& predictors, double level, bool reml,
            const std::string& response) {
  require_file(features, "--features");
  if (!(level > 0.0 && level < 1.0)) throw UsageError("--level must be in (0, 1)");
  const Response resp = parse_response(response);
  const CsvTable table = read_csv(features);
  const std::vector<std::string> names = predictors.empty() ? default_predictors() : split_names(predictors);
  if (names.empty()) throw UsageError("--predictors is empty");
  const DesignData data = design_from_features(table, names, resp);
  if (data.n_groups() < 2) throw ArgumentError("need >= 2 groups (authors), found " + std::to_string(data.n_groups()));
  if (data.n_obs() <= data.n_coef()) {
    throw ArgumentError("N = " + std::to_string(data.n_obs()) + " rows but " + std::to_string(data.n_coef()) +
                        " coefficients; choose fewer columns with --predictors");
  }
  const ModelFit f = fit(data, reml ? Estimation::REML : Estimation::ML);
  CoefReport rep = coef_report(data, f, level);
  rep.response = response_label(resp);
  write_report(rep, out);
  std::string effects = csv_line({"author", "effect"});
  for (int g = 0; g < data.n_groups(); ++g) {
    effects += csv_line({data.group_names[g], format_number(f.group_effects[g])});
  }
  write_text(out / "group_effects.csv", effects);
  std::cout << format_table(rep);
  return kOk;
}

int cmd_report(const fs::path& dir) {
  require_dir(dir, "--fit");
  std::cout << format_table(read_report(dir));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Color and composition features of paintings, and a mixed-model price analysis"};
  app.require_subcommand(1);

  std::string out, images, meta, config, features, predictors, fit_dir, errors;
  std::string response = "log";
  int n = 40, jobs = 1;
  unsigned long long seed = 42;
  double level = 0.95;
  bool reml = false;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with known price effects");
  synth->add_option("--out", out, "Output directory")->required();
  synth->add_option("--n", n, "Number of paintings (>= 10)");
  synth->add_option("--seed", seed, "Random seed");

  auto* extract = app.add_subcommand("extract", "Extract the feature table for a corpus");
  extract->add_option("--images", images, "Directory of <id>.png / <id>.jpg images")->required();
  extract->add_option("--meta", meta, "Metadata CSV")->required();
  extract->add_option("--out", out, "Feature CSV to write")->required();
  extract->add_option("--errors", errors, "Error sidecar CSV (default <out>.errors.csv)");
  extract->add_option("--config", config, "Config file (falls back to $CHROMAPRAISE_CONFIG)");
  extract->add_option("--jobs", jobs, "Worker threads, 0 for all cores");

  auto* fitc = app.add_subcommand("fit", "Fit the random-intercept model and write the report");
  fitc->add_option("--features", features, "Feature CSV")->required();
  fitc->add_option("--out", out, "Output directory")->required();
  fitc->add_option("--predictors", predictors, "Comma separated predictor columns (default: all 42)");
  fitc->add_option("--level", level, "Confidence level of the profile intervals");
  fitc->add_flag("--reml", reml, "Fit by REML instead of ML");
  fitc->add_option("--response", response, "log, log_usd or raw");

  auto* report = app.add_subcommand("report", "Print the coefficient table of a previous fit");
  report->add_option("--fit", fit_dir, "Directory written by fit")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) return cmd_synth(out, n, seed);
    if (*extract) return cmd_extract(images, meta, out, config, jobs, errors);
    if (*fitc) return cmd_fit(features, out, predictors, level, reml, response);
    if (*report) return cmd_report(fit_dir);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const SingularityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
