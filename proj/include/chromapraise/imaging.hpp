#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace chromapraise {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// CIELab under D65, 2 degree observer.
struct Lab {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
  friend bool operator==(const Lab&, const Lab&) = default;
};

/// Hue in degrees [0, 360); saturation and value on [0, 255].
struct Hsv {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

/// Row-major pixel grid. Every image type in the toolkit is an instance of this.
template <typename Pixel>
struct Image {
  int width = 0;
  int height = 0;
  std::vector<Pixel> pixels;

  Image() = default;
  Image(int w, int h, Pixel fill = Pixel{})
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  [[nodiscard]] std::size_t size() const { return pixels.size(); }
  [[nodiscard]] std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
  }
  Pixel& at(int x, int y) { return pixels[index(x, y)]; }
  [[nodiscard]] const Pixel& at(int x, int y) const { return pixels[index(x, y)]; }
  [[nodiscard]] bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
};

using RgbImage = Image<Rgb>;
using LabImage = Image<Lab>;
using HsvImage = Image<Hsv>;
using GrayImage = Image<double>;

inline constexpr int kDefaultMaxSide = 512;

/// Decodes a PNG or JPEG file and downsamples it (area averaging) so that the
/// longer side is at most max_side. Never upsamples.
RgbImage load_and_normalize(const std::filesystem::path& path, int max_side = kDefaultMaxSide);

/// Target dimensions used by load_and_normalize; shorter side rounded half-up.
struct Size2 {
  int width;
  int height;
  friend bool operator==(const Size2&, const Size2&) = default;
};
Size2 normalized_size(int width, int height, int max_side);

/// Box-filter resampling where each output pixel averages the exact input area it covers.
RgbImage resize_area(const RgbImage& img, int width, int height);

void write_png(const RgbImage& img, const std::filesystem::path& path);

Lab srgb_to_lab(Rgb px);
LabImage srgb_to_lab(const RgbImage& img);

/// Hexcone HSV on real-valued channels in [0, 255].
Hsv hsv_from_rgb(double r, double g, double b);
HsvImage rgb_to_hsv(const RgbImage& img);

/// Luma grayscale 0.299 R + 0.587 G + 0.114 B.
double gray_level(Rgb px);
GrayImage to_gray(const RgbImage& img);

/// Linearized sRGB channel on [0, 1].
double srgb_to_linear(double channel01);

}  // namespace chromapraise
