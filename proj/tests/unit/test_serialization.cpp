#include <gtest/gtest.h>

#include "catstress/error.hpp"
#include "catstress/serialization.hpp"
#include "test_support.hpp"

namespace catstress {
namespace {

TEST(FormatReal, RoundTrips) {
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(-0.0), "0");
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 100; ++k) {
    const double v = u(rng) * std::pow(10.0, k % 20 - 10);
    EXPECT_EQ(std::stod(format_real(v)), v);
  }
}

TEST(BasisJson, RoundTrip) {
  auto b = build_box_modes(BoxGeometry::make(2, 1.5), 0.3, 0.1, 1);
  const auto j = basis_to_json(*b);
  EXPECT_EQ(j.at("modes").size(), 9u);
  EXPECT_EQ(j.at("modes")[0], nlohmann::json::array({-1, -1}));
  const auto back = basis_from_json(j);
  EXPECT_TRUE(*back == *b);
  EXPECT_THROW(basis_from_json(nlohmann::json{{"dimension", 1}}), InvalidArgument);
}

TEST(StateJson, RoundTrip) {
  auto b = testing::line_basis({{0}, {1}});
  const CoherentAmplitude alpha(b, {Complex(0.1, -0.2), 0.7});
  for (const State& s : {State(alpha), State(phase_form_cat(0.4, alpha)),
                         State(cat_normalize(Complex(1, 2), 0.5, alpha))}) {
    const auto j = state_to_json(s);
    const auto back = state_from_json(j, b);
    EXPECT_EQ(state_to_json(back), j);
  }
  EXPECT_EQ(state_to_json(phase_form_cat(0.4, alpha)).at("theta"), 0.4);
  EXPECT_THROW(state_from_json({{"type", "squeezed"}, {"alpha", {0, 0}}}, b), InvalidArgument);
  EXPECT_THROW(state_from_json({{"type", "cat"}, {"alpha", {0, 1}}}, b), InvalidArgument);
  EXPECT_THROW(state_from_json({{"type", "coherent"}, {"alpha", {0}}}, b), InvalidArgument);
}

TEST(ConfigHash, StableAndKeyOrderIndependent) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  const auto a = nlohmann::json::parse(R"({"x": 1, "y": [1, 2]})");
  const auto b = nlohmann::json::parse(R"({"y": [1, 2], "x": 1})");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  EXPECT_NE(config_hash(a), config_hash(nlohmann::json::parse(R"({"x": 2, "y": [1, 2]})")));
}

}  // namespace
}  // namespace catstress
