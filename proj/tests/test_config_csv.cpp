#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "chromapraise/config.hpp"
#include "chromapraise/csv.hpp"
#include "chromapraise/errors.hpp"

using namespace chromapraise;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  fs::path p = fs::path(TEST_TMP_DIR) / "config_csv";
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Number, Formatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(std::nan("")), "");
  EXPECT_EQ(format_number(-2.5e-7), "-2.5e-07");
}

TEST(Number, ParsingIsStrict) {
  EXPECT_EQ(parse_number("1.25"), 1.25);
  EXPECT_EQ(parse_number(" -3 "), -3.0);
  EXPECT_EQ(parse_number("+4e2"), 400.0);
  EXPECT_TRUE(std::isnan(parse_number("")));
  EXPECT_TRUE(std::isnan(parse_number("NA")));
  EXPECT_TRUE(std::isnan(parse_number("nan")));
  EXPECT_THROW(parse_number("1.5x"), FormatError);
  EXPECT_THROW(parse_number("abc"), FormatError);
  EXPECT_THROW(parse_number("1 2"), FormatError);
}

TEST(Number, ShortestTextRoundTripsExactly) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int i = 0; i < 5000; ++i) {
    const double v = std::ldexp(mant(rng), ex(rng));
    EXPECT_EQ(parse_number(format_number(v)), v);
  }
}

TEST(Csv, QuotingRoundTrip) {
  const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "multi\nline", "", "crlf\r\n"};
  const std::string line = csv_line(fields);
  EXPECT_EQ(line.back(), '\n');
  EXPECT_EQ(csv_line({"a", "b"}), "a,b\n");
  EXPECT_EQ(csv_line({"a,b"}), "\"a,b\"\n");
  const CsvTable t = parse_csv(csv_line({"c1", "c2", "c3", "c4", "c5", "c6"}) + line);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0], fields);
}

TEST(Csv, CrlfBomAndTrailingBlankLine) {
  const CsvTable t = parse_csv("\xEF\xBB\xBFid,v\r\n1,2\r\n3,\r\n\r\n");
  EXPECT_EQ(t.header, (std::vector<std::string>{"id", "v"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1], (std::vector<std::string>{"3", ""}));
}

TEST(Csv, NoTrailingNewline) {
  const CsvTable t = parse_csv("a,b\n1,2");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], "2");
}

TEST(Csv, MalformedInput) {
  EXPECT_THROW(parse_csv(""), FormatError);
  EXPECT_THROW(parse_csv("a,b\n1,2,3\n"), FormatError);
  EXPECT_THROW(parse_csv("a,b\n1,\"open\n"), FormatError);
  EXPECT_THROW(parse_csv("a,b\n1x\"y\",2\n"), FormatError);
}

TEST(Csv, ColumnLookup) {
  const CsvTable t = parse_csv("id,price\n");
  EXPECT_EQ(t.column("price"), 1);
  EXPECT_EQ(t.column("nope"), -1);
  try {
    (void)t.require("author");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("author"), std::string::npos);
  }
}

TEST(Csv, FileRoundTripTo1e9) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z(0.0, 1e3);
  CsvTable t;
  t.header = {"id", "x", "y"};
  std::vector<std::array<double, 2>> values;
  for (int i = 0; i < 50; ++i) {
    values.push_back({z(rng), z(rng) * 1e-6});
    t.rows.push_back({"r" + std::to_string(i), format_number(values.back()[0]), format_number(values.back()[1])});
  }
  const fs::path p = tmp_dir() / "table.csv";
  write_csv(p, t);
  const CsvTable back = read_csv(p);
  ASSERT_EQ(back.rows.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_NEAR(parse_number(back.rows[i][1]), values[i][0], 1e-9);
    EXPECT_NEAR(parse_number(back.rows[i][2]), values[i][1], 1e-9);
  }
  EXPECT_EQ(read_text(p).find('\r'), std::string::npos);
}

TEST(Csv, MissingFile) { EXPECT_THROW(read_csv(tmp_dir() / "absent.csv"), IoError); }

TEST(Config, EmptyTextGivesDefaults) {
  const PipelineConfig c = parse_config("");
  const PipelineConfig d;
  EXPECT_EQ(canonical_config(c), canonical_config(d));
  EXPECT_EQ(c.max_side, 512);
}

TEST(Config, SectionsCommentsAndValues) {
  const PipelineConfig c = parse_config(
      "# tuned\n"
      "[imaging]\nmax_side = 256\n"
      "[edges]\nlow_threshold = 0.05  # lower\nhigh_threshold = 0.3\n"
      "[segmentation]\nk_felz = 150\ngate_b = false\n"
      "[ccm]\nsubtract_baseline = \"true\"\n");
  EXPECT_EQ(c.max_side, 256);
  EXPECT_EQ(c.edges.low_threshold, 0.05);
  EXPECT_EQ(c.edges.high_threshold, 0.3);
  EXPECT_EQ(c.seg.k_felz, 150.0);
  EXPECT_FALSE(c.seg.channel_gates[2]);
  EXPECT_TRUE(c.seg.channel_gates[0]);
  EXPECT_TRUE(c.ccm.subtract_baseline);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("[edges]\nbogus = 1\n"), FormatError);
  EXPECT_THROW(parse_config("[nosuch]\nk = 1\n"), FormatError);
  EXPECT_THROW(parse_config("[edges]\nlow_threshold = abc\n"), FormatError);
  EXPECT_THROW(parse_config("[edges\n"), FormatError);
  EXPECT_THROW(parse_config("[edges]\njust text\n"), FormatError);
  EXPECT_THROW(parse_config("[saliency]\nradius = 2.5\n"), FormatError);
  EXPECT_THROW(parse_config("[edges]\nlow_threshold = 0.3\nhigh_threshold = 0.2\n"), ArgumentError);
  EXPECT_THROW(parse_config("[edges]\nlow_threshold = 0\n"), ArgumentError);
  EXPECT_THROW(parse_config("[imaging]\nmax_side = 16\n"), ArgumentError);
  EXPECT_THROW(parse_config("[segmentation]\nk_felz = 0\n"), ArgumentError);
  EXPECT_THROW(parse_config("[segmentation]\ngate_l = false\ngate_a = false\ngate_b = false\n"), ArgumentError);
  EXPECT_THROW(load_config(tmp_dir() / "absent.toml"), IoError);
}

TEST(Config, CanonicalTextParsesBack) {
  PipelineConfig c;
  c.dst.radius = 4;
  c.edges.blur_sigma = 1.1;
  c.seg.channel_gates[1] = false;
  const std::string text = canonical_config(c);
  EXPECT_EQ(canonical_config(parse_config(text)), text);
  EXPECT_NE(text.find("saliency.radius = 4\n"), std::string::npos);
}

TEST(Config, LoadFromFile) {
  const fs::path p = tmp_dir() / "cfg.toml";
  write_text(p, "[saliency]\nnms_radius = 7\n");
  EXPECT_EQ(load_config(p).dst.nms_radius, 7);
}

TEST(Hash, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Hash, StableAndSensitive) {
  const PipelineConfig a;
  PipelineConfig b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  EXPECT_EQ(config_hash(a).find_first_not_of("0123456789abcdef"), std::string::npos);
  b.seg.k_felz = 301.0;
  EXPECT_NE(config_hash(a), config_hash(b));
}
