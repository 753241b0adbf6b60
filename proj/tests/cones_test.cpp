#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "arbfree/cones.hpp"
#include "arbfree/ftap.hpp"

using namespace arbfree;

namespace {

using Rays = std::vector<Vector<double>>;

PolyhedralCone cone2(Rays gens) { return PolyhedralCone(2, gens); }

bool same_ray_set(Rays a, Rays b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (std::abs(a[i][j] - b[i][j]) > 1e-12) return false;
  return true;
}

Vector<double> unit(Vector<double> v) {
  double s = 0;
  for (double x : v) s += std::abs(x);
  for (double& x : v) x /= s;
  return v;
}

PolyhedralCone random_pointed_cone(std::mt19937& rng, std::size_t max_n = 5, std::size_t max_gens = 8) {
  std::uniform_int_distribution<std::size_t> n_dist(2, max_n), k_dist(1, max_gens);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::normal_distribution<double> normal;
  const std::size_t n = n_dist(rng), k = k_dist(rng);
  Vector<double> c(n);
  for (double& x : c) x = normal(rng);
  Rays gens;
  while (gens.size() < k) {
    Vector<double> g(n);
    for (double& x : g) x = entry(rng);
    const double s = dot(c, g);
    if (std::abs(s) < 1e-6) continue;
    if (s < 0)
      for (double& x : g) x = -x;
    gens.push_back(g);
  }
  return PolyhedralCone(n, gens);
}

void expect_valid_witness(const TotalityVerdict& v, const PolyhedralCone& test, const PolyhedralCone& k) {
  ASSERT_EQ(v.status, TotalityStatus::RefutedWithWitness);
  ASSERT_TRUE(v.witness);
  for (const auto& x : test.generators()) EXPECT_GE(dot(x, *v.witness), -1e-9);
  EXPECT_GT(distance_to_cone(k, *v.witness), 1e-6);
  EXPECT_FALSE(cone_contains(k, *v.witness));
}

} // namespace

TEST(ConeTest, GeneratorsNormalizedAndDeduplicated) {
  const PolyhedralCone k(2, {{2, 0}, {1, 0}, {1, 3}});
  ASSERT_EQ(k.size(), 2u);
  EXPECT_EQ(k.generators()[0], (Vector<double>{1, 0}));
  EXPECT_EQ(k.generators()[1], (Vector<double>{0.25, 0.75}));
  EXPECT_THROW(PolyhedralCone(2, {{0, 0}}), Error);
  EXPECT_THROW(PolyhedralCone(2, {{1, 0, 0}}), Error);
  EXPECT_EQ(PolyhedralCone::indicator_family(3).size(), 7u);
}

TEST(ConeTest, DualMembershipExamples) {
  const auto orthant = PolyhedralCone::orthant(2);
  EXPECT_TRUE(dual_membership(orthant, {1, 1}));
  EXPECT_FALSE(dual_membership(orthant, {1, -1}));
  const auto k = cone2({{1, 0}, {1, 1}});
  EXPECT_TRUE(dual_membership(k, {0, 1}));
  EXPECT_FALSE(dual_membership(k, {-0.5, 1}));
  EXPECT_THROW(dual_membership(k, {1, 1, 1}), Error);
}

TEST(ConeTest, DualInteriorMembershipExamples) {
  const auto orthant = PolyhedralCone::orthant(2);
  EXPECT_TRUE(dual_interior_membership(orthant, {1, 1}));
  EXPECT_FALSE(dual_interior_membership(orthant, {1, 0}));
  EXPECT_TRUE(dual_interior_membership(cone2({{2, 1}, {1, 2}}), {1, 1}));
  try {
    dual_interior_membership(cone2({{1, 0}, {-1, 0}}), {1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPointed);
  }
}

TEST(ConeTest, PointednessExamples) {
  EXPECT_TRUE(is_pointed(PolyhedralCone::orthant(3)).pointed);
  EXPECT_FALSE(is_pointed(PolyhedralCone::orthant(3)).witness);

  const auto line = is_pointed(cone2({{1, 0}, {-1, 0}}));
  EXPECT_FALSE(line.pointed);
  ASSERT_TRUE(line.witness);
  EXPECT_EQ(*line.witness, (Vector<double>{1, 0}));

  const auto k = cone2({{1, 0}, {1, 1}, {-1, -1}});
  const auto r = is_pointed(k);
  EXPECT_FALSE(r.pointed);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(*r.witness, (Vector<double>{0.5, 0.5}));
  Vector<double> neg{-0.5, -0.5};
  EXPECT_TRUE(cone_contains(k, *r.witness));
  EXPECT_TRUE(cone_contains(k, neg));
}

TEST(ConeTest, ExtremeRaysExamples) {
  EXPECT_TRUE(same_ray_set(extreme_rays(2, {{1, 0}, {0, 1}}), {{1, 0}, {0, 1}}));
  // The half-plane needs its boundary line (two opposite rays) plus one ray
  // pointing inside.
  EXPECT_TRUE(same_ray_set(extreme_rays(2, {{1, 1}}), {{0.5, -0.5}, {-0.5, 0.5}, {0.5, 0.5}}));
  EXPECT_TRUE(same_ray_set(extreme_rays(2, {{1, 0}, {1, 1}}), {{0, 1}, {0.5, -0.5}}));
}

TEST(ConeTest, ExtremeRaysEdgeCases) {
  // No constraint: the whole space as +-e_i.
  EXPECT_EQ(extreme_rays(2, {}).size(), 4u);
  // Zero normals are ignored.
  EXPECT_TRUE(same_ray_set(extreme_rays(2, {{0, 0}, {1, 0}, {0, 1}}), {{1, 0}, {0, 1}}));
  // Pointed but not full-dimensional result: u1 = 0 and u2 >= 0.
  EXPECT_TRUE(same_ray_set(extreme_rays(2, {{1, 0}, {-1, 0}, {0, 1}}), {{0, 1}}));
  // Only the origin.
  EXPECT_TRUE(extreme_rays(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}).empty());
  // Redundant halfspaces do not produce extra rays.
  EXPECT_TRUE(same_ray_set(extreme_rays(2, {{1, 0}, {0, 1}, {1, 1}, {2, 1}}), {{1, 0}, {0, 1}}));

  try {
    extreme_rays(9, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionCapExceeded);
  }
  EXPECT_THROW(extreme_rays(2, {{1, 0, 0}}), Error);
}

TEST(ConeTest, ExtremeRaysOfSimplexCornerInR3) {
  // Cone over a square: 4 facets, 4 rays, and degenerate vertex structure.
  Rays normals{{1, 0, 1}, {-1, 0, 1}, {0, 1, 1}, {0, -1, 1}};
  const auto rays = extreme_rays(3, normals);
  Rays expected{unit({1, 1, 1}), unit({1, -1, 1}), unit({-1, 1, 1}), unit({-1, -1, 1})};
  EXPECT_TRUE(same_ray_set(rays, expected));
}

TEST(ConeTest, ExactRaysArePrimitiveIntegers) {
  std::vector<Vector<Rational>> normals{{Rational(1, 2), Rational(1, 3)}, {Rational(0), Rational(1)}};
  for (const auto& r : extreme_rays_exact(2, normals))
    for (const auto& x : r) EXPECT_EQ(x.get_den(), 1);
}

TEST(ConeTest, DualOfOrthantIsOrthant) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto o = PolyhedralCone::orthant(n);
    EXPECT_TRUE(same_cone(dual_cone(o), o)) << n;
    EXPECT_TRUE(same_cone(dual_cone(dual_cone(o)), o)) << n;
  }
}

TEST(ConeTest, DualOfIndicatorFamilyIsOrthant) {
  for (std::size_t n = 1; n <= 5; ++n)
    EXPECT_TRUE(same_cone(dual_cone(PolyhedralCone::indicator_family(n)), PolyhedralCone::orthant(n))) << n;
}

TEST(ConeTest, ContainmentAndDistance) {
  const auto k = cone2({{1, 0}, {1, 1}});
  EXPECT_TRUE(cone_contains(k, {3, 1}));
  EXPECT_FALSE(cone_contains(k, {0, 1}));
  EXPECT_NEAR(distance_to_cone(k, {3, 1}), 0.0, 1e-12);
  // Nearest point of the 45-degree ray to (0,1) in max-norm is (0.5,0.5).
  EXPECT_NEAR(distance_to_cone(k, {0, 1}), 0.5, 1e-12);
  EXPECT_NEAR(distance_to_cone(PolyhedralCone::orthant(2), {1, -0.4}), 0.4, 1e-12);
  EXPECT_TRUE(cone_contains(PolyhedralCone(2, {}), {0, 0}));
  EXPECT_FALSE(cone_contains(PolyhedralCone(2, {}), {0, 1}));
}

TEST(ConeTest, IsTotalExamples) {
  const auto o3 = PolyhedralCone::orthant(3);
  const auto v1 = is_total(o3, o3, 0);
  EXPECT_EQ(v1.status, TotalityStatus::ProvedTotal);
  EXPECT_FALSE(v1.witness);

  const auto o2 = PolyhedralCone::orthant(2);
  const auto test = cone2({{1, 2}, {2, 1}});
  const auto v2 = is_total(test, o2, 0);
  expect_valid_witness(v2, test, o2);
  // The documented sample witness also qualifies.
  Vector<double> u{1, -0.4};
  EXPECT_TRUE(dual_membership(test, u));
  EXPECT_FALSE(cone_contains(o2, u));

  EXPECT_EQ(is_total(PolyhedralCone::indicator_family(3), o3, 0).status, TotalityStatus::ProvedTotal);
}

TEST(ConeTest, IsTotalSamplingPathAboveCap) {
  const std::size_t n = 9;
  const auto o = PolyhedralCone::orthant(n);
  const auto proved = is_total(o, o, 500, 7);
  EXPECT_EQ(proved.status, TotalityStatus::NoCounterexampleFound);
  EXPECT_EQ(proved.samples_used, 500u);

  Rays gens;
  for (std::size_t i = 0; i < n; ++i) {
    Vector<double> g(n, 1.0);
    g[i] += 1.0;
    gens.push_back(g);
  }
  const PolyhedralCone test(n, gens);
  const auto refuted = is_total(test, o, 500, 7);
  expect_valid_witness(refuted, test, o);
  EXPECT_LE(refuted.samples_used, 500u);
}

TEST(ConeTest, NonannihilatingExamples) {
  const auto o2 = PolyhedralCone::orthant(2);
  EXPECT_TRUE(is_nonannihilating(cone2({{1, 1}}), o2).nonannihilating);
  const auto r = is_nonannihilating(cone2({{1, 0}}), o2);
  EXPECT_FALSE(r.nonannihilating);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->first, (Vector<double>{1, 0}));
  EXPECT_EQ(r.witness->second, (Vector<double>{0, 1}));
  EXPECT_TRUE(is_nonannihilating(cone2({{1, 2}, {2, 1}}), o2).nonannihilating);
  EXPECT_THROW(is_nonannihilating(PolyhedralCone::orthant(3), o2), Error);
}

TEST(ConeTest, SubspaceIsStructurallyNotPointed) {
  // A line through the origin: every functional vanishes on part of it.
  const auto line = cone2({{1, -1}, {-1, 1}});
  try {
    is_nonannihilating(cone2({{1, 1}}), line);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPointed);
  }
  const PolyhedralCone plane(3, {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}});
  EXPECT_THROW(is_nonannihilating(PolyhedralCone(3, {{0, 0, 1}}), plane), Error);
  EXPECT_THROW(uniqueness_probe(plane, PolyhedralCone(3, {{0, 0, 1}})), Error);
}

TEST(ConeTest, UniquenessProbeExamples) {
  const auto o2 = PolyhedralCone::orthant(2);
  const auto a = uniqueness_probe(o2, cone2({{1, 2}, {2, 1}}));
  EXPECT_TRUE(a.nonannihilating.nonannihilating);
  EXPECT_TRUE(a.all_generators_interior);
  EXPECT_TRUE(a.interior_consequence_applies);
  EXPECT_TRUE(a.interior_consequence_holds);
  EXPECT_TRUE(a.totality_consequence_applies);
  EXPECT_EQ(a.totality.status, TotalityStatus::RefutedWithWitness);
  EXPECT_TRUE(a.consistent());

  const auto b = uniqueness_probe(o2, o2);
  EXPECT_EQ(b.totality.status, TotalityStatus::ProvedTotal);
  EXPECT_FALSE(b.nonannihilating.nonannihilating);
  ASSERT_TRUE(b.nonannihilating.witness);
  EXPECT_EQ(b.nonannihilating.witness->first, (Vector<double>{1, 0}));
  EXPECT_EQ(b.nonannihilating.witness->second, (Vector<double>{0, 1}));
  EXPECT_FALSE(b.all_generators_interior);
  EXPECT_TRUE(b.consistent());

  const auto o3 = PolyhedralCone::orthant(3);
  const auto c = uniqueness_probe(o3, PolyhedralCone::indicator_family(3));
  EXPECT_EQ(c.totality.status, TotalityStatus::ProvedTotal);
  EXPECT_FALSE(c.nonannihilating.nonannihilating);
  ASSERT_TRUE(c.nonannihilating.witness);
  EXPECT_EQ(c.nonannihilating.witness->first, (Vector<double>{1, 0, 0}));
  EXPECT_EQ(c.nonannihilating.witness->second, (Vector<double>{0, 1, 0}));
  EXPECT_TRUE(c.consistent());
}

TEST(ConeTest, TotalityStatusNames) {
  EXPECT_EQ(to_string(TotalityStatus::ProvedTotal), "ProvedTotal");
  EXPECT_EQ(to_string(TotalityStatus::RefutedWithWitness), "RefutedWithWitness");
  EXPECT_EQ(to_string(TotalityStatus::NoCounterexampleFound), "NoCounterexampleFound");
}

TEST(ConeProperty, BipolarRoundTrip) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const auto k = random_pointed_cone(rng);
    const auto dual = dual_cone(k);
    for (const auto& y : dual.generators()) EXPECT_TRUE(dual_membership(k, y));
    EXPECT_TRUE(same_cone(dual_cone(dual), k)) << "trial " << trial;
  }
}

TEST(ConeProperty, RaysSatisfyHalfspacesAndSpanFacetSolutions) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    Rays normals(1 + trial % 6, Vector<double>(n));
    for (auto& a : normals)
      for (double& x : a) x = entry(rng);
    const auto rays = extreme_rays(n, normals);
    for (const auto& r : rays)
      for (const auto& a : normals) EXPECT_GE(dot(a, r), -1e-12);
    if (rays.empty()) continue;
    // Any feasible sample lies in the cone of the rays.
    const PolyhedralCone c(n, rays);
    for (int s = 0; s < 20; ++s) {
      Vector<double> u(n);
      for (double& x : u) x = normal(rng);
      if (std::all_of(normals.begin(), normals.end(), [&](const auto& a) { return dot(a, u) >= 0; }))
        EXPECT_LT(distance_to_cone(c, u), 1e-9);
    }
  }
}

TEST(ConeProperty, NonannihilatingExtendsToConicCombinations) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto k = random_pointed_cone(rng, 4, 6);
    const auto dual = dual_cone(k);
    // Strictly interior functional: sum of dual generators.
    Vector<double> x(k.dim(), 0.0);
    for (const auto& y : dual.generators())
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    const PolyhedralCone test(k.dim(), {x});
    if (!is_nonannihilating(test, k).nonannihilating) continue;
    for (int s = 0; s < 1000 / 50; ++s) {
      Vector<double> u(k.dim(), 0.0);
      for (const auto& g : k.generators()) {
        const double w = weight(rng);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += w * g[i];
      }
      EXPECT_GT(dot(x, u), 0.0);
      ++checked;
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(ConeProperty, InteriorFunctionalsAreNonannihilating) {
  std::mt19937 rng(8);
  std::normal_distribution<double> normal;
  int interior = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto k = random_pointed_cone(rng, 4, 5);
    Vector<double> y(k.dim());
    for (double& v : y) v = normal(rng);
    if (!dual_interior_membership(k, y)) continue;
    ++interior;
    EXPECT_TRUE(is_nonannihilating(PolyhedralCone(k.dim(), {y}), k).nonannihilating);
  }
  EXPECT_GT(interior, 20);
}

TEST(ConeProperty, InteriorDualIsTotalSampled) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    const auto k = random_pointed_cone(rng, 4, 5);
    const auto v = interior_dual_totality_check(k, 10000, static_cast<std::uint64_t>(trial));
    EXPECT_EQ(v.status, TotalityStatus::NoCounterexampleFound);
    EXPECT_EQ(v.samples_used, 10000u);
  }
  EXPECT_EQ(interior_dual_totality_check(PolyhedralCone::orthant(3), 10000, 1).status,
            TotalityStatus::NoCounterexampleFound);
}

TEST(ConeProperty, UniquenessConsequencesOnRandomTestCones) {
  std::mt19937 rng(13);
  std::uniform_int_distribution<std::size_t> n_dist(2, 5), k_dist(1, 6);
  std::uniform_int_distribution<int> entry(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = n_dist(rng);
    Rays gens;
    while (gens.size() < k_dist(rng) || gens.empty()) {
      Vector<double> g(n);
      for (double& x : g) x = entry(rng);
      if (std::any_of(g.begin(), g.end(), [](double x) { return x != 0; })) gens.push_back(g);
    }
    const auto report = uniqueness_probe(PolyhedralCone::orthant(n), PolyhedralCone(n, gens));
    EXPECT_TRUE(report.consistent()) << "trial " << trial;
    if (report.totality.witness) EXPECT_GT(*report.totality.witness_distance, 1e-6);
  }
}

TEST(ConeProperty, IndicatorFamilyIsTotalButAnnihilating) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto k = PolyhedralCone::orthant(n);
    const auto f = PolyhedralCone::indicator_family(n);
    EXPECT_EQ(is_total(f, k, 0).status, TotalityStatus::ProvedTotal) << n;
    EXPECT_EQ(is_nonannihilating(f, k).nonannihilating, n == 1) << n;
  }
}

TEST(ConeTest, DecomposeDualOnFreeMarket) {
  const auto y = discounted_gains<double>(validate_market({0.0, {"A"}, {1.0}, {{2.0}, {0.5}}, {0.5, 0.5}}));
  const auto d = decompose_dual(y, {-3.0, 5.0});
  ASSERT_TRUE(d);
  for (double k : d->interior) EXPECT_GE(k, 1.0 - 1e-9);
  EXPECT_NEAR(d->annihilating[0] * 1.0 + d->annihilating[1] * -0.5, 0.0, 1e-9);
  EXPECT_NEAR(d->annihilating[0] + d->interior[0], -3.0, 1e-12);
  EXPECT_NEAR(d->annihilating[1] + d->interior[1], 5.0, 1e-12);
}

TEST(ConeTest, DecomposeDualFailsUnderArbitrage) {
  const auto y = discounted_gains<double>(validate_market({0.0, {"A"}, {1.0}, {{1.0}, {2.0}}, {0.5, 0.5}}));
  EXPECT_FALSE(decompose_dual(y, {0.0, -1.0}));
  EXPECT_THROW(decompose_dual(y, {1.0}), Error);
  EXPECT_THROW(decompose_dual(y, {1.0, 1.0}, 0.0), Error);
}

TEST(ConeProperty, DecomposeDualExistsOnFreeMarkets) {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> entry(-4, 4);
  std::normal_distribution<double> normal;
  int free_markets = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 5, d = 1 + trial % 3;
    Matrix<double> g(n, d);
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t i = 0; i < d; ++i) g(w, i) = entry(rng);
    const auto y = make_gains(g, Vector<double>(n, 1.0 / static_cast<double>(n)));
    if (!find_arbitrage(y).free) continue;
    ++free_markets;
    Vector<double> f(n);
    for (double& v : f) v = 10.0 * normal(rng);
    const auto dec = decompose_dual(y, f);
    ASSERT_TRUE(dec) << "trial " << trial;
    for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(dot(g.column(i), dec->annihilating), 0.0, 1e-7);
    for (double k : dec->interior) EXPECT_GE(k, 1.0 - 1e-9);
  }
  EXPECT_GT(free_markets, 20);
}

TEST(ConeTest, SummableTestCones) {
  EXPECT_TRUE(summable_test_cone_contains(SummableTestCone::StrictlyPositive, {1, 2}));
  EXPECT_FALSE(summable_test_cone_contains(SummableTestCone::StrictlyPositive, {1, 0}));
  EXPECT_FALSE(summable_test_cone_contains(SummableTestCone::SeparatedFromZero, {1, 0}));
  EXPECT_TRUE(summable_test_cone_contains(SummableTestCone::SimpleFunctions, {1, 0}));
  EXPECT_FALSE(summable_test_cone_contains(SummableTestCone::SimpleFunctions, {-1, 1}));
  EXPECT_THROW(summable_test_cone_contains(SummableTestCone::StrictlyPositive, {}), Error);
}
