#include "chromapraise/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "chromapraise/errors.hpp"

namespace chromapraise {

namespace {

// sRGB (D65) to XYZ. Row sums equal the reference white below, so neutral
// inputs land on a* = b* = 0 exactly.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kWhiteX = 0.4124564 + 0.3575761 + 0.1804375;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 0.0193339 + 0.1191920 + 0.9503041;

const std::array<double, 256>& linear_table() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) t[static_cast<std::size_t>(i)] = srgb_to_linear(i / 255.0);
    return t;
  }();
  return table;
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  if (t > delta * delta * delta) return std::cbrt(t);
  return t / (3.0 * delta * delta) + 4.0 / 29.0;
}

bool has_supported_signature(const std::vector<unsigned char>& bytes) {
  static constexpr unsigned char kPng[] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (bytes.size() >= sizeof(kPng) && std::equal(std::begin(kPng), std::end(kPng), bytes.begin())) return true;
  return bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF;
}

// One-dimensional coverage weights of output cell i over input cells.
struct Span {
  int first;
  std::vector<double> weights;
};

std::vector<Span> area_spans(int in_len, int out_len) {
  std::vector<Span> spans(static_cast<std::size_t>(out_len));
  const double scale = static_cast<double>(in_len) / out_len;
  for (int o = 0; o < out_len; ++o) {
    const double lo = o * scale;
    const double hi = (o + 1) * scale;
    const int first = static_cast<int>(std::floor(lo));
    const int last = std::min(in_len - 1, static_cast<int>(std::ceil(hi)) - 1);
    Span s{first, {}};
    for (int i = first; i <= last; ++i) {
      const double cover = std::min<double>(hi, i + 1) - std::max<double>(lo, i);
      s.weights.push_back(std::max(0.0, cover) / scale);
    }
    spans[static_cast<std::size_t>(o)] = std::move(s);
  }
  return spans;
}

}  // namespace

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

Size2 normalized_size(int width, int height, int max_side) {
  if (width < 1 || height < 1) throw FormatError("image has zero dimension");
  if (max_side < 32) throw ArgumentError("max_side must be >= 32");
  const int longer = std::max(width, height);
  if (longer <= max_side) return {width, height};
  const int shorter = std::min(width, height);
  // round(shorter * max_side / longer), half-up, in integers
  const long long num = 2LL * shorter * max_side + longer;
  const int scaled = std::max(1, static_cast<int>(num / (2LL * longer)));
  return width >= height ? Size2{max_side, scaled} : Size2{scaled, max_side};
}

RgbImage resize_area(const RgbImage& img, int width, int height) {
  if (width == img.width && height == img.height) return img;
  const auto xs = area_spans(img.width, width);
  const auto ys = area_spans(img.height, height);

  // Horizontal pass into doubles, then vertical pass.
  std::vector<std::array<double, 3>> tmp(static_cast<std::size_t>(width) * img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Span& s = xs[static_cast<std::size_t>(x)];
      std::array<double, 3> acc{};
      for (std::size_t k = 0; k < s.weights.size(); ++k) {
        const Rgb& p = img.at(s.first + static_cast<int>(k), y);
        acc[0] += s.weights[k] * p.r;
        acc[1] += s.weights[k] * p.g;
        acc[2] += s.weights[k] * p.b;
      }
      tmp[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  RgbImage out(width, height);
  auto to_u8 = [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  };
  for (int y = 0; y < height; ++y) {
    const Span& s = ys[static_cast<std::size_t>(y)];
    for (int x = 0; x < width; ++x) {
      std::array<double, 3> acc{};
      for (std::size_t k = 0; k < s.weights.size(); ++k) {
        const auto& p = tmp[static_cast<std::size_t>(s.first + static_cast<int>(k)) * width + x];
        for (int c = 0; c < 3; ++c) acc[c] += s.weights[k] * p[c];
      }
      out.at(x, y) = Rgb{to_u8(acc[0]), to_u8(acc[1]), to_u8(acc[2])};
    }
  }
  return out;
}

RgbImage load_and_normalize(const std::filesystem::path& path, int max_side) {
  if (max_side < 32) throw ArgumentError("max_side must be >= 32");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read image: " + path.string());
  if (!has_supported_signature(bytes)) throw FormatError("not a PNG or JPEG file: " + path.string());

  const cv::Mat decoded = cv::imdecode(bytes, cv::IMREAD_COLOR | cv::IMREAD_IGNORE_ORIENTATION);
  if (decoded.empty()) throw FormatError("cannot decode image: " + path.string());
  if (decoded.cols < 1 || decoded.rows < 1) throw FormatError("image has zero dimension: " + path.string());

  RgbImage img(decoded.cols, decoded.rows);
  for (int y = 0; y < decoded.rows; ++y) {
    const auto* row = decoded.ptr<cv::Vec3b>(y);
    for (int x = 0; x < decoded.cols; ++x) img.at(x, y) = Rgb{row[x][2], row[x][1], row[x][0]};
  }
  const Size2 target = normalized_size(img.width, img.height, max_side);
  return resize_area(img, target.width, target.height);
}

void write_png(const RgbImage& img, const std::filesystem::path& path) {
  cv::Mat mat(img.height, img.width, CV_8UC3);
  for (int y = 0; y < img.height; ++y) {
    auto* row = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width; ++x) {
      const Rgb& p = img.at(x, y);
      row[x] = cv::Vec3b(p.b, p.g, p.r);
    }
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat, {cv::IMWRITE_PNG_COMPRESSION, 6});
  } catch (const cv::Exception&) {
    ok = false;
  }
  if (!ok) throw IoError("cannot write PNG: " + path.string());
}

Lab srgb_to_lab(Rgb px) {
  const auto& lin = linear_table();
  const double r = lin[px.r];
  const double g = lin[px.g];
  const double b = lin[px.b];
  const double x = kRgbToXyz[0][0] * r + kRgbToXyz[0][1] * g + kRgbToXyz[0][2] * b;
  const double y = kRgbToXyz[1][0] * r + kRgbToXyz[1][1] * g + kRgbToXyz[1][2] * b;
  const double z = kRgbToXyz[2][0] * r + kRgbToXyz[2][1] * g + kRgbToXyz[2][2] * b;
  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);
  return Lab{std::clamp(116.0 * fy - 16.0, 0.0, 100.0), 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LabImage srgb_to_lab(const RgbImage& img) {
  LabImage out(img.width, img.height);
  std::transform(img.pixels.begin(), img.pixels.end(), out.pixels.begin(),
                 [](Rgb p) { return srgb_to_lab(p); });
  return out;
}

Hsv hsv_from_rgb(double r, double g, double b) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  Hsv out{0.0, mx > 0.0 ? 255.0 * delta / mx : 0.0, mx};
  if (delta <= 0.0) return out;
  double h = 0.0;
  if (mx == r) {
    h = 60.0 * std::fmod((g - b) / delta, 6.0);
  } else if (mx == g) {
    h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    h = 60.0 * ((r - g) / delta + 4.0);
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

HsvImage rgb_to_hsv(const RgbImage& img) {
  HsvImage out(img.width, img.height);
  std::transform(img.pixels.begin(), img.pixels.end(), out.pixels.begin(),
                 [](Rgb p) { return hsv_from_rgb(p.r, p.g, p.b); });
  return out;
}

double gray_level(Rgb px) { return 0.299 * px.r + 0.587 * px.g + 0.114 * px.b; }

GrayImage to_gray(const RgbImage& img) {
  GrayImage out(img.width, img.height);
  std::transform(img.pixels.begin(), img.pixels.end(), out.pixels.begin(), gray_level);
  return out;
}

}  // namespace chromapraise
