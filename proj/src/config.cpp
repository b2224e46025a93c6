#include "chromapraise/config.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "chromapraise/csv.hpp"
#include "chromapraise/errors.hpp"

namespace chromapraise {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct Field {
  std::function<void(PipelineConfig&, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <typename S>
Field real(S PipelineConfig::*outer, double S::*inner) {
  return {[=](PipelineConfig& c, std::string_view v) {
            const double x = parse_number(v);
            if (std::isnan(x)) throw FormatError("missing value");
            (c.*outer).*inner = x;
          },
          [=](const PipelineConfig& c) { return format_number((c.*outer).*inner); }};
}

int parse_int(std::string_view v) {
  const double x = parse_number(v);
  if (!(x == static_cast<double>(static_cast<long long>(x))) || std::abs(x) > 1e9) {
    throw FormatError("expected an integer, got '" + std::string(v) + "'");
  }
  return static_cast<int>(x);
}

bool parse_bool(std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw FormatError("expected true or false, got '" + std::string(v) + "'");
}

template <typename S>
Field integer(S PipelineConfig::*outer, int S::*inner) {
  return {[=](PipelineConfig& c, std::string_view v) { (c.*outer).*inner = parse_int(v); },
          [=](const PipelineConfig& c) { return std::to_string((c.*outer).*inner); }};
}

Field gate(int channel) {
  return {[=](PipelineConfig& c, std::string_view v) { c.seg.channel_gates[channel] = parse_bool(v); },
          [=](const PipelineConfig& c) { return std::string(c.seg.channel_gates[channel] ? "true" : "false"); }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> t;
    t["imaging.max_side"] = {[](PipelineConfig& c, std::string_view v) { c.max_side = parse_int(v); },
                             [](const PipelineConfig& c) { return std::to_string(c.max_side); }};
    t["ccm.window_half"] = integer(&PipelineConfig::ccm, &CcmParams::window_half);
    t["ccm.gamma"] = real(&PipelineConfig::ccm, &CcmParams::gamma);
    t["ccm.alpha"] = real(&PipelineConfig::ccm, &CcmParams::alpha);
    t["ccm.subtract_baseline"] = {
        [](PipelineConfig& c, std::string_view v) { c.ccm.subtract_baseline = parse_bool(v); },
        [](const PipelineConfig& c) { return std::string(c.ccm.subtract_baseline ? "true" : "false"); }};
    t["saliency.radius"] = integer(&PipelineConfig::dst, &DstParams::radius);
    t["saliency.axes"] = integer(&PipelineConfig::dst, &DstParams::axes);
    t["saliency.threshold_sigmas"] = real(&PipelineConfig::dst, &DstParams::threshold_sigmas);
    t["saliency.nms_radius"] = integer(&PipelineConfig::dst, &DstParams::nms_radius);
    t["edges.blur_sigma"] = real(&PipelineConfig::edges, &EdgeParams::blur_sigma);
    t["edges.kernel_half"] = integer(&PipelineConfig::edges, &EdgeParams::kernel_half);
    t["edges.low_threshold"] = real(&PipelineConfig::edges, &EdgeParams::low_threshold);
    t["edges.high_threshold"] = real(&PipelineConfig::edges, &EdgeParams::high_threshold);
    t["harmony.sat_min"] = real(&PipelineConfig::wheel, &WheelThresholds::sat_min);
    t["harmony.val_min"] = real(&PipelineConfig::wheel, &WheelThresholds::val_min);
    t["harmony.val_max_white"] = real(&PipelineConfig::wheel, &WheelThresholds::val_max_white);
    t["segmentation.k_felz"] = real(&PipelineConfig::seg, &SegParams::k_felz);
    t["segmentation.fisher_threshold"] = real(&PipelineConfig::seg, &SegParams::fisher_threshold);
    t["segmentation.gate_l"] = gate(0);
    t["segmentation.gate_a"] = gate(1);
    t["segmentation.gate_b"] = gate(2);
    return t;
  }();
  return table;
}

}  // namespace

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw FormatError(where + "bad section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError(where + "expected key = value");
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    const std::string full = section.empty() ? key : section + "." + key;
    const auto it = fields().find(full);
    if (it == fields().end()) throw FormatError(where + "unknown key '" + full + "'");
    try {
      it->second.set(cfg, value);
    } catch (const FormatError& e) {
      throw FormatError(where + full + ": " + e.what());
    }
  }
  validate_config(cfg);
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

void validate_config(const PipelineConfig& c) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ArgumentError(std::string("config: ") + what);
  };
  need(c.max_side >= 32, "imaging.max_side must be >= 32");
  need(c.ccm.window_half >= 1, "ccm.window_half must be >= 1");
  need(c.ccm.gamma > 0.0, "ccm.gamma must be > 0");
  need(c.ccm.alpha > 0.0, "ccm.alpha must be > 0");
  need(c.dst.radius >= 1, "saliency.radius must be >= 1");
  need(c.dst.axes >= 2, "saliency.axes must be >= 2");
  need(c.dst.threshold_sigmas > 0.0, "saliency.threshold_sigmas must be > 0");
  need(c.dst.nms_radius >= 0, "saliency.nms_radius must be >= 0");
  need(c.edges.blur_sigma > 0.0, "edges.blur_sigma must be > 0");
  need(c.edges.kernel_half >= 1, "edges.kernel_half must be >= 1");
  need(c.edges.low_threshold > 0.0 && c.edges.low_threshold < c.edges.high_threshold &&
           c.edges.high_threshold < 1.0,
       "edges thresholds must satisfy 0 < low < high < 1");
  need(c.wheel.sat_min >= 0.0 && c.wheel.sat_min <= 255.0, "harmony.sat_min must be in [0, 255]");
  need(c.wheel.val_min >= 0.0 && c.wheel.val_min <= c.wheel.val_max_white && c.wheel.val_max_white <= 255.0,
       "harmony value thresholds must satisfy 0 <= val_min <= val_max_white <= 255");
  need(c.seg.k_felz > 0.0, "segmentation.k_felz must be > 0");
  need(c.seg.fisher_threshold > 0.0, "segmentation.fisher_threshold must be > 0");
  need(c.seg.channel_gates[0] || c.seg.channel_gates[1] || c.seg.channel_gates[2],
       "at least one segmentation gate must be enabled");
}

std::string canonical_config(const PipelineConfig& cfg) {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(cfg) + "\n";
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const PipelineConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_config(cfg))));
  return buf;
}

}  // namespace chromapraise
