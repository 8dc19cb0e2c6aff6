#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "twotier/error.hpp"
#include "twotier/network_model.hpp"

using namespace twotier;

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

Network reference_network(int n = 400, double avg = 20.0) {
  Network net;
  net.layout = build_layout(500.0, 2, 20.0);
  net.grid = build_subregion_grid(net.layout, n, avg / net.layout.area_m2);
  return net;
}

FemtoConfiguration all(const Network& net, bool on) {
  return {std::vector<std::uint8_t>(static_cast<std::size_t>(net.grid.n_subregions), on ? 1 : 0)};
}

}  // namespace

TEST(Units, DbmAndWallGain) {
  EXPECT_NEAR(dbm_to_linear(30.0), 1000.0, 1e-9);
  EXPECT_NEAR(dbm_to_linear(0.0), 1.0, 1e-15);
  EXPECT_NEAR(PathLossParams{}.wall_gain(), std::pow(10.0, -1.2), 1e-15);
  EXPECT_THROW((PathLossParams{0.0, 3.0, 12.0}.validate()), InvalidConfiguration);
  EXPECT_THROW((PathLossParams{4.0, 3.0, -1.0}.validate()), InvalidConfiguration);
}

TEST(Layout, MacroPositions) {
  const auto two = build_layout(500.0, 2, 20.0);
  ASSERT_EQ(two.macro_positions.size(), 19u);
  EXPECT_EQ(two.macro_positions[0], (Point2{0.0, 0.0}));
  for (int k = 1; k <= 6; ++k) EXPECT_NEAR(norm(two.macro_positions[k]), kSqrt3 * 500.0, 1e-9);
  int at3r = 0, at2s3r = 0;
  for (int k = 7; k < 19; ++k) {
    const double d = norm(two.macro_positions[k]);
    at3r += std::fabs(d - 1500.0) < 1e-9;
    at2s3r += std::fabs(d - 2.0 * kSqrt3 * 500.0) < 1e-9;
  }
  EXPECT_EQ(at3r, 6);
  EXPECT_EQ(at2s3r, 6);
  EXPECT_EQ(build_layout(500.0, 1, 20.0).macro_positions.size(), 7u);
  EXPECT_NEAR(two.area_m2, 1.5 * kSqrt3 * 250000.0, 1e-6);
}

TEST(Layout, NeighbourCellsTouchCentralHexagon) {
  // Adjacent hexagons of the tiling share an edge midpoint with the centre one.
  const auto l = build_layout(500.0, 1, 20.0);
  for (int k = 1; k <= 6; ++k) {
    const Point2 mid = 0.5 * l.macro_positions[k];
    EXPECT_TRUE(l.contains(mid));
    EXPECT_FALSE(l.contains(0.51 * l.macro_positions[k]));
  }
}

TEST(Layout, ContainsVerticesNotBeyond) {
  const auto l = build_layout(500.0, 2, 20.0);
  for (const auto& v : l.hexagon_vertices()) EXPECT_TRUE(l.contains(v));
  EXPECT_TRUE(l.contains({500.0, 0.0}));
  EXPECT_FALSE(l.contains({500.5, 0.0}));
  EXPECT_FALSE(l.contains({0.0, 433.1}));
}

TEST(Layout, InvalidArguments) {
  EXPECT_THROW(build_layout(0.0, 2, 20.0), InvalidConfiguration);
  EXPECT_THROW(build_layout(500.0, 3, 20.0), InvalidConfiguration);
  EXPECT_THROW(build_layout(500.0, 2, 600.0), InvalidConfiguration);
}

TEST(SubregionGrid, PartitionCoversHexagon) {
  const auto l = build_layout(500.0, 2, 20.0);
  for (int n : {4, 7, 12, 50, 400, 1000}) {
    const auto g = build_subregion_grid(l, n, 0.0);
    EXPECT_LE(std::abs(g.n_subregions - n), std::max(2.0, 0.05 * n)) << n;
    const double total = std::accumulate(g.areas.begin(), g.areas.end(), 0.0);
    EXPECT_NEAR(total / l.area_m2, 1.0, 1e-9) << n;
    ASSERT_EQ(g.centers.size(), static_cast<std::size_t>(g.n_subregions));
  }
}

TEST(SubregionGrid, CellsAreComparableInArea) {
  const auto g = reference_network().grid;
  for (double a : g.areas) {
    EXPECT_GE(a, 0.5 * g.cell_side_m * g.cell_side_m);
    EXPECT_LE(a, 1.5 * g.cell_side_m * g.cell_side_m);
  }
}

TEST(SubregionGrid, LookupFindsOwnCentroid) {
  const auto g = reference_network().grid;
  for (std::size_t k = 0; k < g.centers.size(); ++k) EXPECT_EQ(g.index_of(g.centers[k]), k);
}

TEST(SubregionGrid, SectorsForSmallN) {
  const auto l = build_layout(500.0, 2, 20.0);
  for (int n : {1, 2, 3}) {
    const auto g = build_subregion_grid(l, n, 0.0);
    ASSERT_EQ(g.n_subregions, n);
    for (double a : g.areas) EXPECT_NEAR(a, l.area_m2 / n, 1e-6 * l.area_m2);
    for (std::size_t k = 0; k < g.centers.size(); ++k) EXPECT_EQ(g.index_of(g.centers[k]), k);
  }
}

TEST(SubregionGrid, OccupancyProbability) {
  const auto l = build_layout(500.0, 2, 20.0);
  const auto g = build_subregion_grid(l, 400, 20.0 / l.area_m2);
  EXPECT_NEAR(g.p_occupancy, 20.0 / g.n_subregions, 1e-12);
  EXPECT_NEAR(g.with_intensity(40.0 / l.area_m2).p_occupancy, 40.0 / g.n_subregions, 1e-12);
  EXPECT_DOUBLE_EQ(build_subregion_grid(l, 400, 0.0).p_occupancy, 0.0);
  EXPECT_THROW(build_subregion_grid(l, 10, 10.0 / l.area_m2 * 1.5), IntensityTooHigh);
  EXPECT_THROW(build_subregion_grid(l, 10, -1.0), InvalidConfiguration);
  EXPECT_THROW(build_subregion_grid(l, 0, 0.0), InvalidConfiguration);
}

TEST(Configurations, NestedAcrossIntensities) {
  const auto g = reference_network().grid;
  const auto lo = g.with_intensity(10.0 / g.area_m2);
  const auto hi = g.with_intensity(30.0 / g.area_m2);
  for (int rep = 0; rep < 20; ++rep) {
    RandomStream a(4, rep), b(4, rep);
    const auto x = sample_configuration(lo, a);
    const auto y = sample_configuration(hi, b);
    for (std::size_t i = 0; i < x.occupied.size(); ++i) EXPECT_LE(x.occupied[i], y.occupied[i]);
  }
}

TEST(Configurations, ProbabilitiesSumToOne) {
  const int n = 6;
  const double p = 0.3;
  double total = 0.0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    FemtoConfiguration c;
    for (int i = 0; i < n; ++i) c.occupied.push_back((mask >> i) & 1);
    total += configuration_probability(p, c);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  FemtoConfiguration empty{{0, 0, 0}};
  EXPECT_DOUBLE_EQ(configuration_probability(0.0, empty), 1.0);
  FemtoConfiguration one{{0, 1, 0}};
  EXPECT_DOUBLE_EQ(configuration_probability(0.0, one), 0.0);
}

TEST(WeightedTerms, MacroUserWeights) {
  const auto net = reference_network();
  const Point2 r{200.0, 50.0};
  const auto none = mue_weighted_terms(net, r, all(net, false), SurrogateSet{});
  ASSERT_EQ(none.size(), 18u);
  const double r_a = std::pow(norm(r), -4.0);
  for (std::size_t j = 0; j < none.size(); ++j) {
    EXPECT_EQ(none[j].kind, RatioKind::RayleighOverRayleigh);
    EXPECT_NEAR(none[j].weight,
                std::pow(distance(net.layout.macro_positions[j + 1], r), -4.0) / r_a, 1e-12);
  }
  const auto full = mue_weighted_terms(net, r, all(net, true), SurrogateSet{});
  ASSERT_EQ(full.size(), 18u + static_cast<std::size_t>(net.grid.n_subregions));
  const double w = std::pow(10.0, -1.2) * dbm_to_linear(22.0) / dbm_to_linear(50.0);
  const auto& femto = full.back();
  EXPECT_EQ(femto.kind, RatioKind::LogNormalOverRayleigh);
  EXPECT_NEAR(femto.weight, w * std::pow(distance(net.grid.centers.back(), r), -3.0) / r_a,
              1e-12 * femto.weight);
  EXPECT_EQ(femto.surrogate, SurrogateSet{}.at(RatioKind::LogNormalOverRayleigh));
}

TEST(WeightedTerms, FemtoUserWeights) {
  const auto net = reference_network();
  const Point2 c{300.0, 0.0};
  const auto geo = fue_geometry(net, c);
  EXPECT_EQ(geo.fbs, net.grid.centers[geo.serving_index]);
  EXPECT_NEAR(distance(geo.fbs, geo.ue), 20.0, 1e-9);
  EXPECT_LT(norm(geo.ue), norm(geo.fbs));

  const auto none = fue_weighted_terms(net, c, all(net, false), SurrogateSet{});
  ASSERT_EQ(none.size(), 19u);
  const double wall = std::pow(10.0, -1.2);
  const double denom = dbm_to_linear(22.0) * std::pow(20.0, -3.0);
  EXPECT_EQ(none[0].kind, RatioKind::RayleighOverLogNormal);
  EXPECT_NEAR(none[0].weight, wall * dbm_to_linear(50.0) * std::pow(norm(geo.ue), -4.0) / denom,
              1e-12 * none[0].weight);

  const auto full = fue_weighted_terms(net, c, all(net, true), SurrogateSet{});
  ASSERT_EQ(full.size(), 19u + static_cast<std::size_t>(net.grid.n_subregions) - 1u);
  for (std::size_t k = 19; k < full.size(); ++k) EXPECT_EQ(full[k].kind, RatioKind::LogNormalOverLogNormal);
}

TEST(WeightedTerms, GeometryErrors) {
  const auto net = reference_network();
  EXPECT_THROW(mue_weighted_terms(net, {600.0, 0.0}, all(net, false), SurrogateSet{}), GeometryError);
  EXPECT_THROW(mue_weighted_terms(net, {0.0, 0.0}, all(net, false), SurrogateSet{}), GeometryError);
  EXPECT_THROW(fue_weighted_terms(net, {0.0, 600.0}, all(net, false), SurrogateSet{}), GeometryError);
  FemtoConfiguration wrong{{1, 0}};
  EXPECT_THROW(mue_weighted_terms(net, {100.0, 0.0}, wrong, SurrogateSet{}), InvalidConfiguration);
}
