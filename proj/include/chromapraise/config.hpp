#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "chromapraise/complexity.hpp"
#include "chromapraise/edges.hpp"
#include "chromapraise/harmony.hpp"
#include "chromapraise/imaging.hpp"
#include "chromapraise/saliency.hpp"
#include "chromapraise/segmentation.hpp"

namespace chromapraise {

/// Every tunable of feature extraction.
///
///   [imaging]       max_side
///   [ccm]           window_half gamma alpha subtract_baseline
///   [saliency]      radius axes threshold_sigmas nms_radius
///   [edges]         blur_sigma kernel_half low_threshold high_threshold
///   [harmony]       sat_min val_min val_max_white
///   [segmentation]  k_felz fisher_threshold gate_l gate_a gate_b
struct PipelineConfig {
  int max_side = kDefaultMaxSide;
  CcmParams ccm;
  DstParams dst;
  EdgeParams edges;
  WheelThresholds wheel;
  SegParams seg;
};

/// Parses `key = value` lines under `[section]` headers. `#` starts a comment.
/// Unknown sections or keys and malformed values are FormatErrors; missing
/// keys keep their defaults.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Throws ArgumentError when a value is out of range.
void validate_config(const PipelineConfig& cfg);

/// Full configuration, one `section.key = value` per line in fixed order.
std::string canonical_config(const PipelineConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes);

/// 16 hex digits of the FNV-1a hash of canonical_config.
std::string config_hash(const PipelineConfig& cfg);

}  // namespace chromapraise
