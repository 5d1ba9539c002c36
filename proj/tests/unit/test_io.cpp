#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

#include "fmlab/io.hpp"

using namespace fmlab;

TEST(DilationJson, RoundTrip) {
  const char* text = R"({"type":"union","parts":[{"type":"power_sequence","a":2.0},
                        {"type":"cantor","base":4,"kept":[0,3],"levels":6}],"with_lacunary":true})";
  const auto e = dilation_set_from_json(json::parse(text));
  const auto again = dilation_set_from_json(to_json(e));
  for (int j = -2; j <= 1; ++j) EXPECT_EQ(rescaled_block(e, j).points, rescaled_block(again, j).points) << j;
  EXPECT_EQ(to_json(e).dump(), to_json(again).dump());
}

TEST(DilationJson, Rejections) {
  EXPECT_THROW(dilation_set_from_json(json::parse(R"({"type":"points","points":[]})")), std::invalid_argument);
  EXPECT_THROW(dilation_set_from_json(json::parse(R"({"type":"circle"})")), std::invalid_argument);
  EXPECT_THROW(dilation_set_from_json(json::parse(R"({"type":"lacunary","extra":1})")), std::invalid_argument);
  EXPECT_THROW(dilation_set_from_json(json::parse(R"({"type":"cantor","base":3,"kept":[5]})")), std::invalid_argument);
}

TEST(BlockJson, Layout) {
  const auto b = rescaled_block(DilationSet::points({1.0, 1.5}), 0);
  EXPECT_EQ(to_json(b).dump(), R"({"j":0,"points":[1.0,1.5],"truncated":false})");
  EXPECT_EQ(block_csv(b), "point\n1\n1.5\n");
}

TEST(DimensionJson, Fields) {
  DimensionEstimate e;
  e.value = 0.5;
  e.delta_range = {1e-6, 1e-4};
  const auto j = to_json(e);
  EXPECT_EQ(j["method"], "entropy_slope");
  EXPECT_EQ(j["value"], 0.5);
  EXPECT_EQ(j["delta_range"][0], 1e-6);
  EXPECT_TRUE(j.contains("residual"));
}

TEST(MultiplierJson, OscillatoryExample) {
  const auto m = multiplier_from_json(json::parse(R"({"family":"oscillatory","alpha":0.5,"beta":1.0})"));
  const auto ref = MultiplierSpec::oscillatory(0.5, 1.0);
  for (double r : {0.3, 0.8, 2.5, 17.0}) EXPECT_EQ(m.radial(r), ref.radial(r));
  const auto again = multiplier_from_json(to_json(m));
  EXPECT_EQ(again.radial(2.5), m.radial(2.5));
}

TEST(MultiplierJson, AllFamiliesRoundTrip) {
  for (const char* text :
       {R"({"family":"limited_decay","a":1.5,"transition":"raised_cosine"})", R"({"family":"slow_decay","beta":1,"delta":0.25})",
        R"({"family":"band_bump"})", R"({"family":"constant","value":[1,2]})", R"({"family":"zero"})",
        R"({"family":"sum","terms":[{"coef":2,"m":{"family":"band_bump"}},{"coef":[0,1],"m":{"family":"limited_decay","a":1}}]})"}) {
    const auto m = multiplier_from_json(json::parse(text));
    const auto again = multiplier_from_json(to_json(m));
    for (double r : {0.7, 1.9, 6.0}) EXPECT_EQ(m.radial(r), again.radial(r)) << text;
  }
  EXPECT_THROW(multiplier_from_json(json::parse(R"({"family":"oscillatory","alpha":1.5})")), std::invalid_argument);
  EXPECT_THROW(multiplier_from_json(json::parse(R"({"family":"band_bump","a":1})")), std::invalid_argument);
}

TEST(PathIo, CsvAndJson) {
  const auto p = SampledPath::uniform(1.0, 4, [](double t) { return cplx(t, -t); });
  EXPECT_EQ(path_csv(p).substr(0, 20), "t,re,im\n0,0,-0\n0.25,");
  const auto back = path_from_json(to_json(p));
  EXPECT_EQ(back.grid, p.grid);
  EXPECT_EQ(back.values, p.values);
}

TEST(BandIo, Csv) {
  Sigma2Result r;
  r.bands = {{0, 1.5, 64, true, false}, {1, 0.25, 64, true, false}};
  EXPECT_EQ(band_csv(r), "j,band_norm\n0,1.5\n1,0.25\n");
}

TEST(GridIo, BinaryLayout) {
  const auto g = GridFunction::sample(1, 4, 2.0, [](double x, double) { return cplx(x, 1.0); });
  std::stringstream ss;
  write_grid(ss, g);
  const std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 4u + 8u + 8u + 4u + 4u * 16u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[0]), 1);  // dim, little-endian
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 4);  // N
  double L = 0.0;
  std::memcpy(&L, bytes.data() + 12, 8);
  EXPECT_EQ(L, 2.0);
  const auto back = read_grid(ss);
  EXPECT_EQ(back.samples, g.samples);
  EXPECT_EQ(back.side, Side::space);
  std::stringstream cut(bytes.substr(0, 30));
  EXPECT_THROW(read_grid(cut), std::invalid_argument);
}

TEST(ExperimentJson, DefaultsExpandAndRoundTrip) {
  const auto c = experiment_from_json(json::parse(R"({"kind":"lemma31","E":{"type":"power_sequence","a":1,"with_lacunary":true}})"));
  const auto j = to_json(c);
  for (const char* key : {"kind", "E", "m", "f", "alpha", "beta", "p", "grid", "j_range", "seed", "depth", "t_nodes"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(to_json(experiment_from_json(j)).dump(), j.dump());
}

TEST(ExperimentJson, Validation) {
  EXPECT_THROW(experiment_from_json(json::parse(R"({"alpha":0.3,"beta":0.4})")), std::invalid_argument);
  EXPECT_THROW(experiment_from_json(json::parse(R"({"alpha":0.6,"beta":0.4})")), std::invalid_argument);
  EXPECT_THROW(experiment_from_json(json::parse(R"({"grid":{"n":1000}})")), std::invalid_argument);
  EXPECT_THROW(experiment_from_json(json::parse(R"({"colour":1})")), std::invalid_argument);
  EXPECT_NO_THROW(experiment_from_json(json::parse(R"({"kind":"halfwave","alpha":0.5,"beta":0.4})")));
}

TEST(ExperimentJson, ParseErrorsCarryPosition) {
  try {
    const auto parsed = json::parse("{\"kind\": \"lemma31\",\n \"alpha\": }");
    (void)parsed;
    FAIL();
  } catch (const json::parse_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}
