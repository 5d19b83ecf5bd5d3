#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qbs/metrics.hpp"

using namespace qbs;
using oracle::kPi;

namespace {

constexpr double kTol = 1e-12;
constexpr double kMetricTol = 1e-9;

DeviceSettings device(double alpha, double beta, double d1 = 0.0, double d2 = 0.0) {
  return {alpha, beta, d1, d2};
}

}  // namespace

TEST_CASE("periodic_extrema locates a shifted cosine") {
  const auto e = periodic_extrema([](double x) -> std::optional<double> {
    return 0.3 + 0.2 * std::cos(x - 1.234);
  });
  REQUIRE(e.has_value());
  CHECK(e->max.value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(e->min.value == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(e->max.phi == doctest::Approx(1.234).epsilon(1e-7));
  CHECK(e->min.phi == doctest::Approx(1.234 + kPi).epsilon(1e-7));
}

TEST_CASE("periodic_extrema skips undefined points and reports all-undefined") {
  const auto e = periodic_extrema([](double x) -> std::optional<double> {
    if (x > 3.0 && x < 3.3) return std::nullopt;
    return std::sin(x);
  });
  REQUIRE(e.has_value());
  CHECK(e->max.value == doctest::Approx(1.0));
  CHECK_FALSE(periodic_extrema([](double) -> std::optional<double> { return std::nullopt; }));
}

TEST_CASE("fringe_scan") {
  SUBCASE("wave basis gives sin^2(phi/2)") {
    const auto scan = fringe_scan(device(kPi / 4, 0.0), AncillaOutcome::B, 64);
    REQUIRE(scan.entries.size() == 64);
    for (const auto& e : scan.entries) {
      CHECK(e.p2_cond == doctest::Approx(std::pow(std::sin(e.phi / 2), 2)).epsilon(kTol));
      CHECK(e.p1_cond + e.p2_cond == doctest::Approx(1.0).epsilon(kTol));
    }
    CHECK(scan.entries[1].phi == doctest::Approx(2 * kPi / 64));
  }
  SUBCASE("particle basis gives a flat 1/2") {
    const auto scan = fringe_scan(device(kPi / 4, kPi / 2), AncillaOutcome::B, 32);
    for (const auto& e : scan.entries) CHECK(e.p2_cond == doctest::Approx(0.5).epsilon(kTol));
  }
  SUBCASE("superposed basis hits the oracle extrema on the grid") {
    const double beta = 3 * kPi / 16;
    const auto scan = fringe_scan(device(kPi / 4, beta), AncillaOutcome::B, 16);
    double hi = 0, lo = 1;
    for (const auto& e : scan.entries) {
      CHECK(e.p2_cond ==
            doctest::Approx(oracle::cond_p2(kPi / 4, beta, e.phi, 0, 0)).epsilon(kTol));
      hi = std::max(hi, e.p2_cond);
      lo = std::min(lo, e.p2_cond);
    }
    CHECK(hi == doctest::Approx(0.554886358553912).epsilon(1e-12));
    CHECK(lo == doctest::Approx(0.09334716655818917).epsilon(1e-12));
    CHECK(scan.entries[8].p2_cond == hi);  // phi = pi
    CHECK(scan.entries[0].p2_cond == lo);  // phi = 0
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fringe_scan(device(kPi / 4, 0.0), AncillaOutcome::B, 7), std::invalid_argument);
    // alpha = 0 prepares |p>; the outcome |b> = |a> at beta = pi/2 never happens.
    CHECK_THROWS_AS(fringe_scan(device(0.0, kPi / 2), AncillaOutcome::B, 16), std::domain_error);
    CHECK_THROWS_AS(visibility(device(0.0, kPi / 2), AncillaOutcome::B), std::domain_error);
  }
}

TEST_CASE("visibility examples") {
  CHECK(visibility(device(kPi / 4, 0.0), AncillaOutcome::B) ==
        doctest::Approx(1.0).epsilon(kMetricTol));
  CHECK(visibility(device(kPi / 4, kPi / 2), AncillaOutcome::B) ==
        doctest::Approx(0.0).epsilon(kMetricTol));
  CHECK(std::abs(visibility(device(kPi / 4, 3 * kPi / 16), AncillaOutcome::B) -
                 oracle::kViolationV) < 1e-9);
  // path-1 analog of the wave fringe: cos^2(phi/2)
  CHECK(visibility(device(kPi / 4, 0.0), AncillaOutcome::B, Path::One) ==
        doctest::Approx(1.0).epsilon(kMetricTol));
}

TEST_CASE("distinguishability examples") {
  CHECK(std::abs(distinguishability(device(kPi / 4, 0.0), AncillaOutcome::B)) < kMetricTol);
  CHECK(distinguishability(device(kPi / 4, kPi / 2), AncillaOutcome::B) ==
        doctest::Approx(1.0).epsilon(kMetricTol));
  CHECK(std::abs(distinguishability(device(kPi / 4, 3 * kPi / 16), AncillaOutcome::B) -
                 oracle::kViolationD) < 1e-12);
  CHECK(oracle::n12(kPi / 4, 3 * kPi / 16) == doctest::Approx(0.08641771452281813));
  CHECK(oracle::n22(kPi / 4, 3 * kPi / 16, 0.0) == doctest::Approx(2.6191486763482686e-4));
}

TEST_CASE("duality_sum") {
  auto r = duality_sum(device(kPi / 4, 0.0), AncillaOutcome::B);
  CHECK(r.sumVD.value == doctest::Approx(1.0).epsilon(kMetricTol));
  CHECK_FALSE(r.V.stderr_.has_value());
  r = duality_sum(device(kPi / 4, kPi / 2), AncillaOutcome::B);
  CHECK(r.sumVD.value == doctest::Approx(1.0).epsilon(kMetricTol));
  r = duality_sum(device(kPi / 4, 3 * kPi / 16), AncillaOutcome::B);
  CHECK(std::abs(r.sumVD.value - oracle::kViolationSum) < 1e-9);
  CHECK(r.sumVD.value > 1.4);
  CHECK_FALSE(r.has_impossible_points);
}

TEST_CASE("duality_sum flags phases where the outcome vanishes") {
  // delta1 = -pi/4, delta2 = 3pi/4 makes |wave> equal |particle> at phi = pi/2; with
  // beta = alpha the B_perp projection of sin(a)|particle> + cos(a)|wave> is then zero.
  const DeviceSettings dev = device(kPi / 4, kPi / 4, -kPi / 4, 3 * kPi / 4);
  const auto a = oracle::postselected(dev.alpha, dev.beta, kPi / 2, dev.delta1, dev.delta2, true);
  REQUIRE(std::norm(a.a1) + std::norm(a.a2) < 1e-20);

  const auto r = duality_sum(dev, AncillaOutcome::BPerp);
  CHECK(r.has_impossible_points);
  CHECK(std::isfinite(r.V.value));
  const auto scan = fringe_scan(dev, AncillaOutcome::BPerp, 8);
  CHECK(scan.undefined_points == 1);
  CHECK(scan.entries[2].p2_cond == 0.0);
  CHECK_FALSE(duality_sum(dev, AncillaOutcome::B).has_impossible_points);
}

TEST_CASE("generalized_metrics") {
  for (double beta : {0.0, 0.3, 3 * kPi / 16, kPi / 2}) {
    const auto g = generalized_metrics(device(kPi / 4, beta, 0.4, -0.9));
    CHECK(g.sumG.value == doctest::Approx(0.5).epsilon(kMetricTol));
  }
  CHECK(generalized_metrics(device(0.0, 0.2)).sumG.value == doctest::Approx(1.0).epsilon(kMetricTol));
  CHECK(generalized_metrics(device(kPi / 2, 0.2)).sumG.value ==
        doctest::Approx(1.0).epsilon(kMetricTol));
  CHECK(generalized_metrics(device(kPi / 3, 0.0)).sumG.value ==
        doctest::Approx(0.625).epsilon(kMetricTol));
}

TEST_CASE("mixed_final_state") {
  auto rho = mixed_final_state(kPi / 2, 0.7, 0.0, 0.0);
  auto ref = PathDensity::outer(particle_state(0.7));
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(rho.m[i] - ref.m[i]) <= kTol);

  rho = mixed_final_state(0.0, 0.7, 0.2, 0.3);
  ref = PathDensity::outer(wave_state(0.7, 0.2, 0.3));
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(rho.m[i] - ref.m[i]) <= kTol);

  rho = mixed_final_state(kPi / 4, kPi / 2, 0.0, 0.0);
  ref = 0.5 * PathDensity::outer(particle_state(kPi / 2)) +
        0.5 * PathDensity::outer(wave_state(kPi / 2, 0, 0));
  const auto traced = partial_trace_ancilla(evolve({device(kPi / 4, 0.0), kPi / 2, Blocking::None}));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(rho.m[i] - ref.m[i]) <= kTol);
    CHECK(std::abs(rho.m[i] - traced.m[i]) <= kTol);
  }
  CHECK(rho.is_hermitian());
  CHECK(rho.min_eigenvalue() >= -kTol);
}

TEST_CASE("property: eigenbases saturate the bound for every alpha and delta") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 100; ++i) {
    auto d = oracle::random_draw(rng);
    d.alpha = std::clamp(d.alpha, 0.05, kPi / 2 - 0.05);
    for (double beta : {0.0, kPi / 2}) {
      for (AncillaOutcome o : kOutcomes) {
        const auto r = duality_sum(device(d.alpha, beta, d.delta1, d.delta2), o);
        CHECK(std::abs(r.sumVD.value - 1.0) <= kMetricTol);
      }
    }
  }
}

TEST_CASE("property: generalized metrics equal the mixture closed form") {
  std::mt19937_64 rng(202);
  for (int i = 0; i < 1000; ++i) {
    const auto d = oracle::random_draw(rng);
    const auto g = generalized_metrics(device(d.alpha, d.beta, d.delta1, d.delta2));
    const double c2 = std::pow(std::cos(d.alpha), 2);
    const double s2 = std::pow(std::sin(d.alpha), 2);
    CHECK(std::abs(g.Vg.value - c2) <= kMetricTol);
    CHECK(std::abs(g.Dg.value - s2) <= kMetricTol);
    CHECK(std::abs(g.sumG.value - (c2 * c2 + s2 * s2)) <= kMetricTol);
    CHECK(g.sumG.value <= 1.0 + kMetricTol);
  }
}

TEST_CASE("property: generalized metrics do not depend on the basis pair") {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> b(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    const auto d = oracle::random_draw(rng);
    const auto g1 = generalized_metrics(device(d.alpha, d.beta, d.delta1, d.delta2));
    const auto g2 = generalized_metrics(device(d.alpha, b(rng), d.delta1, d.delta2));
    CHECK(std::abs(g1.Vg.value - g2.Vg.value) <= kMetricTol);
    CHECK(std::abs(g1.Dg.value - g2.Dg.value) <= kMetricTol);
    CHECK(std::abs(g1.sumG.value - g2.sumG.value) <= kMetricTol);
  }
}

TEST_CASE("property: refined extrema agree with a 10^6-point brute-force scan") {
  std::mt19937_64 rng(404);
  for (int i = 0; i < 20; ++i) {
    const auto d = oracle::random_draw(rng);
    const bool perp = i % 2 == 1;
    const auto o = perp ? AncillaOutcome::BPerp : AncillaOutcome::B;
    const double v = visibility(device(d.alpha, d.beta, d.delta1, d.delta2), o);
    const double brute =
        oracle::brute_visibility(d.alpha, d.beta, d.delta1, d.delta2, perp, 1000000);
    CHECK(std::abs(v - brute) <= 1e-6);
    CHECK(v >= brute - 1e-12);  // refinement never does worse than the grid

    const double dist = distinguishability(device(d.alpha, d.beta, d.delta1, d.delta2), o);
    CHECK(std::abs(dist - oracle::brute_distinguishability(d.alpha, d.beta, d.delta2, perp)) <=
          kTol);
  }
}

TEST_CASE("property: report values stay in range") {
  std::mt19937_64 rng(505);
  for (int i = 0; i < 200; ++i) {
    const auto d = oracle::random_draw(rng);
    const auto r = full_report(device(d.alpha, d.beta, d.delta1, d.delta2), AncillaOutcome::B);
    for (double x : {r.V.value, r.D.value, r.Vg.value, r.Dg.value}) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0 + kMetricTol);
    }
    CHECK(r.sumG.value <= 1.0 + kMetricTol);
  }
}
