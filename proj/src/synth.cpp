#include "chromapraise/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "chromapraise/csv.hpp"
#include "chromapraise/errors.hpp"
#include "chromapraise/pipeline.hpp"

namespace chromapraise {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Rgb random_color(std::mt19937_64& rng) {
  return rgb_from_hsv(uniform(rng, 0.0, 360.0), uniform(rng, 0.0, 255.0), uniform(rng, 30.0, 255.0));
}

void fill_rect(RgbImage& img, int x0, int y0, int x1, int y1, Rgb c) {
  for (int y = std::max(0, y0); y < std::min(img.height, y1); ++y) {
    for (int x = std::max(0, x0); x < std::min(img.width, x1); ++x) img.at(x, y) = c;
  }
}

void fill_disc(RgbImage& img, int cx, int cy, int r, Rgb c) {
  for (int y = std::max(0, cy - r); y <= std::min(img.height - 1, cy + r); ++y) {
    for (int x = std::max(0, cx - r); x <= std::min(img.width - 1, cx + r); ++x) {
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img.at(x, y) = c;
    }
  }
}

double round_to(double v, double step) { return std::round(v / step) * step; }

}  // namespace

Rgb rgb_from_hsv(double h, double s, double v) {
  h = std::fmod(h, 360.0);
  if (h < 0.0) h += 360.0;
  const double sat = std::clamp(s / 255.0, 0.0, 1.0);
  const double val = std::clamp(v, 0.0, 255.0);
  const double c = val * sat;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
  }
  const double m = val - c;
  auto q = [](double u) { return static_cast<std::uint8_t>(std::clamp(std::lround(u), 0L, 255L)); };
  return {q(r + m), q(g + m), q(b + m)};
}

RgbImage harmonic_palette_image(int first_sector, std::mt19937_64& rng, int width, int height) {
  RgbImage img(width, height);
  std::array<Rgb, 3> palette{};
  for (int k = 0; k < 3; ++k) {
    const double hue = 30.0 * ((first_sector + k) % 12) + uniform(rng, 10.0, 20.0);
    palette[k] = rgb_from_hsv(hue, uniform(rng, 170.0, 255.0), uniform(rng, 150.0, 255.0));
  }
  const int cols = uniform_int(rng, 2, 4);
  const int rows = uniform_int(rng, 2, 3);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Rgb color = palette[static_cast<std::size_t>((r + c) % 3)];
      fill_rect(img, c * width / cols, r * height / rows, (c + 1) * width / cols, (r + 1) * height / rows, color);
    }
  }
  return img;
}

RgbImage synth_image(SynthKind kind, std::mt19937_64& rng, int width, int height) {
  RgbImage img(width, height);
  switch (kind) {
    case SynthKind::Flat: {
      const Rgb c = random_color(rng);
      std::fill(img.pixels.begin(), img.pixels.end(), c);
      break;
    }
    case SynthKind::Gradient: {
      const Rgb a = random_color(rng);
      const Rgb b = random_color(rng);
      const bool horizontal = uniform_int(rng, 0, 1) == 1;
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          const double t = horizontal ? x / (width - 1.0) : y / (height - 1.0);
          auto mix = [t](std::uint8_t u, std::uint8_t v) {
            return static_cast<std::uint8_t>(std::lround((1.0 - t) * u + t * v));
          };
          img.at(x, y) = {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
        }
      }
      break;
    }
    case SynthKind::MultiRegion: {
      std::fill(img.pixels.begin(), img.pixels.end(), random_color(rng));
      const int shapes = uniform_int(rng, 3, 7);
      for (int s = 0; s < shapes; ++s) {
        const Rgb c = random_color(rng);
        if (uniform_int(rng, 0, 1) == 0) {
          const int x0 = uniform_int(rng, 0, width - 20);
          const int y0 = uniform_int(rng, 0, height - 20);
          fill_rect(img, x0, y0, x0 + uniform_int(rng, 15, width / 2), y0 + uniform_int(rng, 15, height / 2), c);
        } else {
          fill_disc(img, uniform_int(rng, 0, width - 1), uniform_int(rng, 0, height - 1),
                    uniform_int(rng, 8, height / 3), c);
        }
      }
      break;
    }
    case SynthKind::Harmonic:
      img = harmonic_palette_image(uniform_int(rng, 0, 11), rng, width, height);
      break;
  }
  return img;
}

SynthTruth synthesize_corpus(const std::filesystem::path& out_dir, int n, unsigned long long seed) {
  if (n < 10) throw ArgumentError("synthetic corpus needs n >= 10");
  std::mt19937_64 rng(seed);
  SynthTruth truth;
  truth.seed = seed;
  truth.n = n;
  truth.intercept = 0.5;
  truth.coefficients = {{"square_m", 0.8}, {"ProvenanceNum", 0.25}, {"lithograph", -0.9}};
  truth.predictors = {"square_m", "ProvenanceNum", "lithograph", "ExhibitedNum", "ccm", "X_analog_triad"};
  truth.sigma_u = 0.3;
  truth.sigma_e = 0.15;

  const int n_authors = std::clamp(n / 8, 2, 8);
  std::vector<std::string> authors;
  std::vector<double> births;
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int a = 0; a < n_authors; ++a) {
    char name[32];
    std::snprintf(name, sizeof(name), "author_%02d", a + 1);
    authors.emplace_back(name);
    births.push_back(static_cast<double>(uniform_int(rng, 1866, 1928)));
    truth.author_effects[name] = truth.sigma_u * unit(rng);
  }
  std::vector<int> author_of(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) author_of[i] = i % n_authors;
  std::shuffle(author_of.begin(), author_of.end(), rng);

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "images", ec);
  if (ec) throw IoError("cannot create " + (out_dir / "images").string() + ": " + ec.message());

  std::string meta = csv_line(std::vector<std::string>(kMetaColumns.begin(), kMetaColumns.end()));
  const std::array<SynthKind, 4> kinds{SynthKind::Flat, SynthKind::Gradient, SynthKind::MultiRegion,
                                       SynthKind::Harmonic};
  for (int i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "p%04d", i + 1);
    const RgbImage img = synth_image(kinds[static_cast<std::size_t>(i % 4)], rng);
    write_png(img, out_dir / "images" / (std::string(id) + ".png"));

    PaintingMeta m;
    m.id = id;
    m.author = authors[static_cast<std::size_t>(author_of[i])];
    m.square_m = round_to(uniform(rng, 0.1, 2.0), 0.001);
    m.ExhibitedNum = std::poisson_distribution<int>(1.2)(rng);
    m.ProvenanceNum = uniform_int(rng, 0, 6);
    m.LiteratureNum = std::poisson_distribution<int>(0.9)(rng);
    m.date_of_birth = births[static_cast<std::size_t>(author_of[i])];
    switch (uniform_int(rng, 0, 3)) {
      case 0: m.oil = 1; break;
      case 1: m.ink = 1; break;
      case 2: m.gouache = 1; break;
      default: m.lithograph = 1; break;
    }
    if (m.oil && uniform(rng, 0.0, 1.0) < 0.8) {
      m.canvas = 1;
    } else {
      m.paper = 1;
    }
    m.Christies = uniform_int(rng, 0, 1);
    m.Sothebys = 1 - m.Christies;
    m.Sign = uniform(rng, 0.0, 1.0) < 0.9 ? 1 : 0;

    double log_price = truth.intercept + truth.author_effects[m.author] + truth.sigma_e * unit(rng);
    log_price += truth.coefficients["square_m"] * m.square_m;
    log_price += truth.coefficients["ProvenanceNum"] * m.ProvenanceNum;
    log_price += truth.coefficients["lithograph"] * m.lithograph;
    m.price = std::exp(log_price);

    std::vector<std::string> fields{m.id, m.author, format_number(m.price)};
    for (double v : meta_values(m)) fields.push_back(format_number(v));
    meta += csv_line(fields);
  }
  write_text(out_dir / "meta.csv", meta);

  nlohmann::ordered_json j;
  j["seed"] = truth.seed;
  j["n"] = truth.n;
  j["response"] = "log";
  j["intercept"] = truth.intercept;
  j["coefficients"] = truth.coefficients;
  j["predictors"] = truth.predictors;
  j["sigma_u"] = truth.sigma_u;
  j["sigma_e"] = truth.sigma_e;
  j["author_effects"] = truth.author_effects;
  write_text(out_dir / "truth.json", j.dump(2) + "\n");
  return truth;
}

SynthTruth read_truth(const std::filesystem::path& path) {
  SynthTruth t;
  try {
    const auto j = nlohmann::json::parse(read_text(path));
    t.seed = j.at("seed").get<unsigned long long>();
    t.n = j.at("n").get<int>();
    t.intercept = j.at("intercept").get<double>();
    t.coefficients = j.at("coefficients").get<std::map<std::string, double>>();
    t.predictors = j.at("predictors").get<std::vector<std::string>>();
    t.sigma_u = j.at("sigma_u").get<double>();
    t.sigma_e = j.at("sigma_e").get<double>();
    t.author_effects = j.at("author_effects").get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return t;
}

}  // namespace chromapraise
