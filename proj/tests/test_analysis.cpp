#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spinorbit/analysis.hpp"
#include "spinorbit/errors.hpp"

using namespace spinorbit;
using std::numbers::pi;

namespace {

const double kTsirelson = 2 * std::numbers::sqrt2;

ExperimentConfig scan_config(double visibility = 1.0, int chi_points = 32) {
  ExperimentConfig cfg;
  cfg.theta_list = {0.0, pi / 4, pi / 2, 3 * pi / 4};
  for (int k = 0; k < chi_points; ++k) cfg.chi_list.push_back(k * (pi / 2) / chi_points);
  cfg.visibility = visibility;
  return cfg;
}

// Noise-free table built from the expected counts.
CountTable expected_table(const ExperimentConfig& cfg) {
  std::vector<CountRecord> rec;
  for (double t : cfg.theta_list)
    for (double c : cfg.chi_list) rec.push_back({t, c, expected_counts(cfg, t, c), cfg.exposure});
  return CountTable(rec);
}

std::vector<CountRecord> fringe_records(double offset, double amplitude, double phase, double f, int n, double span) {
  std::vector<CountRecord> rec;
  for (int k = 0; k < n; ++k) {
    const double chi = k * span / n;
    rec.push_back({0.0, chi, offset + amplitude * std::cos(f * chi - phase), 1.0});
  }
  return rec;
}

}  // namespace

TEST(Correlation, Examples) {
  const auto e = correlation_E(100, 100, 0, 0);
  EXPECT_EQ(e.E, 1.0);
  EXPECT_EQ(e.sigma_E, 0.0);
  EXPECT_TRUE(e.degenerate);
  EXPECT_EQ(correlation_E(0, 0, 50, 50).E, -1.0);
  EXPECT_EQ(correlation_E(25, 25, 25, 25).E, 0.0);
  EXPECT_NEAR(correlation_E(25, 25, 25, 25).sigma_E, std::sqrt(100.0) / 100.0, 1e-15);
  EXPECT_THROW(correlation_E(0, 0, 0, 0), ZeroCounts);
}

TEST(Correlation, ErrorPropagationMatchesNumericalGradient) {
  const std::array<double, 4> c{120, 80, 30, 55};
  const auto est = correlation_E(c[0], c[1], c[2], c[3]);
  double var = 0;
  for (int k = 0; k < 4; ++k) {
    auto up = c, dn = c;
    up[k] += 1e-4;
    dn[k] -= 1e-4;
    const double g = (correlation_E(up[0], up[1], up[2], up[3]).E - correlation_E(dn[0], dn[1], dn[2], dn[3]).E) / 2e-4;
    var += g * g * c[k];
  }
  EXPECT_NEAR(est.sigma_E, std::sqrt(var), 1e-9);
}

TEST(Correlation, BoundedAndAntisymmetric) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> u(0, 1000);
  for (int k = 0; k < 1000; ++k) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng) + 1;
    const auto e = correlation_E(a, b, c, d);
    EXPECT_LE(std::abs(e.E), 1.0);
    EXPECT_NEAR(correlation_E(c, d, a, b).E, -e.E, 1e-15);
    EXPECT_NEAR(correlation_E(b, a, d, c).E, e.E, 1e-15);
  }
}

TEST(Correlation, RecordsMustFollowPattern) {
  const CountRecord c1{0, 0, 10, 1}, c2{pi / 2, pi / 4, 10, 1}, c3{pi / 2, 0, 2, 1}, c4{0, pi / 4, 2, 1};
  EXPECT_NEAR(correlation_E(c1, c2, c3, c4).E, 16.0 / 24.0, 1e-15);
  EXPECT_THROW(correlation_E(c1, c3, c2, c4), SettingMismatch);
  // Period-equivalent settings are accepted.
  const CountRecord c2w{-pi / 2, -pi / 4, 10, 1};
  EXPECT_NO_THROW(correlation_E(c1, c2w, c3, c4));
}

TEST(Correlation, IdealDependsOnAngleDifference) {
  const auto table = expected_table(scan_config());
  for (double t : {0.0, pi / 4})
    for (int k = 0; k < 8; ++k) {
      const double chi = k * pi / 16;
      EXPECT_NEAR(correlation_at(table, t, chi).E, std::cos(2 * t - 4 * chi), 1e-12);
    }
}

TEST(Chsh, IdealReachesTsirelsonBound) {
  const auto r = chsh_S(expected_table(scan_config()), ChshSettings{});
  EXPECT_NEAR(r.S, kTsirelson, 1e-9);
  EXPECT_TRUE(r.violates);
  EXPECT_GT(r.violation_sigmas, 0.0);
}

TEST(Chsh, VisibilityScalesS) {
  const auto r = chsh_S(expected_table(scan_config(0.9)), ChshSettings{});
  EXPECT_NEAR(r.S, 0.9 * kTsirelson, 1e-9);
  EXPECT_NEAR(r.S, 2.546, 1e-3);
}

TEST(Chsh, FromTermsExamples) {
  std::array<CorrelationEstimate, 4> t;
  const double e[4] = {1, -1, 1, 1};
  for (int k = 0; k < 4; ++k) t[k].E = e[k];
  const auto r = chsh_from_terms(t, {});
  EXPECT_EQ(r.S, 4.0);
  EXPECT_TRUE(std::isinf(r.violation_sigmas));
  for (auto& x : t) x.E = 0.25, x.sigma_E = 0.1;
  const auto q = chsh_from_terms(t, {});
  EXPECT_NEAR(q.S, 0.5, 1e-15);
  EXPECT_FALSE(q.violates);
  EXPECT_EQ(q.violation_sigmas, 0.0);
  EXPECT_NEAR(q.sigma_S, 0.2, 1e-15);
}

TEST(Chsh, MissingSettingsAreListed) {
  auto cfg = scan_config();
  cfg.theta_list = {0.0, pi / 2};  // no theta' = pi/4 rows
  try {
    chsh_S(expected_table(cfg), ChshSettings{});
    FAIL() << "expected MissingSetting";
  } catch (const MissingSetting& e) {
    EXPECT_EQ(e.absent.size(), 8u);
    for (const auto& [t, c] : e.absent) EXPECT_TRUE(same_angle(t, pi / 4, kThetaPeriod) || same_angle(t, 3 * pi / 4, kThetaPeriod));
  }
}

TEST(Chsh, ScanMatchesClosedForm) {
  const auto table = expected_table(scan_config(1.0, 64));
  const auto scan = scan_S(table);
  ASSERT_EQ(scan.size(), 64u);
  for (const auto& p : scan) EXPECT_NEAR(p.result.S, kTsirelson * std::abs(std::sin(4 * p.chi + pi / 4)), 1e-9);
}

TEST(Chsh, NoSignaling) {
  for (double theta : {0.0, 0.4, 1.3})
    for (double chi : {0.0, 0.1, 0.9}) {
      EXPECT_NEAR(probability_pair(theta, chi) + probability_pair(theta, chi + pi / 4), 0.5, 1e-12);
      EXPECT_NEAR(probability_pair(theta, chi) + probability_pair(theta + pi / 2, chi), 0.5, 1e-12);
    }
}

TEST(Chsh, BellThresholdInVisibility) {
  EXPECT_FALSE(chsh_S(expected_table(scan_config(0.70)), ChshSettings{}).violates);
  EXPECT_TRUE(chsh_S(expected_table(scan_config(0.72)), ChshSettings{}).violates);
}

// violation_sigmas grows as sqrt(rate): slope 0.5 in log-log.
TEST(Chsh, SignificanceScalesWithSqrtRate) {
  std::vector<double> lx, ly;
  for (double rate : {200.0, 2000.0, 20000.0}) {
    double mean = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto cfg = scan_config(0.9, 16);
      cfg.pair_rate = rate;
      cfg.seed = seed;
      mean += chsh_S(CountTable(simulate_counts(cfg)), ChshSettings{}).violation_sigmas / 20;
    }
    lx.push_back(std::log(rate));
    ly.push_back(std::log(mean));
  }
  const double slope = (ly[2] - ly[0]) / (lx[2] - lx[0]);
  EXPECT_NEAR(slope, 0.5, 0.05);
}

TEST(CountTable, LookupWrapsPeriods) {
  const CountTable t({{0.1, 0.2, 7, 1}});
  ASSERT_NE(t.find(0.1 + pi, 0.2 - pi / 2), nullptr);
  EXPECT_EQ(t.find(0.1 + pi / 2, 0.2), nullptr);
  EXPECT_EQ(t.find(0.1, 0.2 + pi / 4), nullptr);
}

TEST(Fringes, NoiselessVisibilityOne) {
  auto cfg = scan_config(1.0);
  cfg.theta_list = {0.0};
  const auto table = expected_table(cfg);
  const auto f = fit_fringes(table.records());
  EXPECT_NEAR(f.visibility, 1.0, 1e-9);
  EXPECT_NEAR(f.amplitude, 1000.0, 1e-6);
  EXPECT_NEAR(f.offset, 1000.0, 1e-6);
  EXPECT_NEAR(std::remainder(f.phase, 2 * pi), 0.0, 1e-9);
  EXPECT_NEAR(f.residual_rms, 0.0, 1e-6);
  EXPECT_EQ(f.points, 32u);
}

TEST(Fringes, NoiselessReducedVisibilityAndPhase) {
  auto cfg = scan_config(0.9);
  const auto fits = fit_fringes_by_theta(expected_table(cfg).records());
  ASSERT_EQ(fits.size(), 4u);
  for (const auto& [theta, f] : fits) {
    EXPECT_NEAR(f.visibility, 0.9, 1e-9);
    EXPECT_NEAR(std::remainder(f.phase - 2 * theta, 2 * pi), 0.0, 1e-9);
  }
}

TEST(Fringes, PoissonVisibilityWithinTolerance) {
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto cfg = scan_config(0.9);
    cfg.theta_list = {0.0};
    cfg.seed = seed;
    const auto rec = simulate_counts(cfg);
    ok += std::abs(fit_fringes(rec).visibility - 0.9) <= 0.02;
  }
  EXPECT_GE(ok, 95);
}

TEST(Fringes, InsufficientData) {
  EXPECT_THROW(fit_fringes(fringe_records(10, 5, 0, 4, 3, pi / 2)), InsufficientData);
  EXPECT_THROW(fit_fringes(fringe_records(10, 5, 0, 4, 8, pi / 8)), InsufficientData);
  EXPECT_NO_THROW(fit_fringes(fringe_records(10, 5, 0, 4, 4, pi / 3)));
}

TEST(Fringes, FlagsNonPhysicalFits) {
  const auto f = fit_fringes(fringe_records(5, 10, 0.3, 4, 16, pi / 2));
  EXPECT_TRUE(f.non_physical);
  EXPECT_NEAR(f.visibility, 2.0, 1e-9);
  EXPECT_FALSE(fit_fringes(fringe_records(10, 5, 0.3, 4, 16, pi / 2)).non_physical);
}

TEST(Fringes, FreeFrequencyRecoversFrequency) {
  for (double f : {3.0, 4.0, 5.5}) {
    const auto fit = fit_fringes_free_frequency(fringe_records(100, 60, 0.4, f, 40, pi));
    EXPECT_NEAR(fit.frequency, f, 1e-5);
    EXPECT_NEAR(fit.visibility, 0.6, 1e-4);
  }
}
