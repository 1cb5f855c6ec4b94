#include "spinorbit/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spinorbit/errors.hpp"
#include "spinorbit/numfmt.hpp"

namespace spinorbit {

namespace {

using std::numbers::pi;

std::string describe(const std::vector<std::pair<double, double>>& settings) {
  std::string s;
  for (const auto& [t, c] : settings) {
    if (!s.empty()) s += ", ";
    s += "(theta=" + format_double(t) + ", chi=" + format_double(c) + ")";
  }
  return s;
}

}  // namespace

MissingSetting::MissingSetting(std::vector<std::pair<double, double>> absent_settings)
    : Error(ErrorClass::data, "missing settings: " + describe(absent_settings)), absent(std::move(absent_settings)) {}

bool same_angle(double a, double b, double period, double tol) {
  const double d = std::abs(std::remainder(a - b, period));
  return d <= tol;
}

// ---------------------------------------------------------------------------

CountTable::CountTable(std::vector<CountRecord> records) : records_(std::move(records)) {}

const CountRecord* CountTable::find(double theta, double chi) const {
  for (const auto& r : records_) {
    if (std::abs(r.theta - theta) <= kSettingTolerance && std::abs(r.chi - chi) <= kSettingTolerance) return &r;
  }
  for (const auto& r : records_) {
    if (same_angle(r.theta, theta, kThetaPeriod) && same_angle(r.chi, chi, kChiPeriod)) return &r;
  }
  return nullptr;
}

std::vector<double> CountTable::chi_values() const {
  std::vector<double> out;
  for (const auto& r : records_) {
    if (std::none_of(out.begin(), out.end(), [&](double c) { return std::abs(c - r.chi) <= kSettingTolerance; })) {
      out.push_back(r.chi);
    }
  }
  return out;
}

std::vector<double> CountTable::theta_values() const {
  std::vector<double> out;
  for (const auto& r : records_) {
    if (std::none_of(out.begin(), out.end(), [&](double t) { return std::abs(t - r.theta) <= kSettingTolerance; })) {
      out.push_back(r.theta);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

CorrelationEstimate correlation_E(double c1, double c2, double c3, double c4) {
  const double total = c1 + c2 + c3 + c4;
  if (!(total > 0.0)) throw ZeroCounts("all four correlation counts are zero");
  CorrelationEstimate est;
  est.counts = {c1, c2, c3, c4};
  est.E = (c1 + c2 - c3 - c4) / total;
  // dE/dc = (1 - E)/N for the "+" cells, -(1 + E)/N for the "-" cells.
  const double plus = (1.0 - est.E) / total;
  const double minus = (1.0 + est.E) / total;
  est.sigma_E = std::sqrt(plus * plus * (c1 + c2) + minus * minus * (c3 + c4));
  est.degenerate = c1 == 0.0 || c2 == 0.0 || c3 == 0.0 || c4 == 0.0;
  return est;
}

CorrelationEstimate correlation_E(const CountRecord& c1, const CountRecord& c2, const CountRecord& c3,
                                  const CountRecord& c4) {
  const double t = c1.theta;
  const double c = c1.chi;
  auto check = [](const CountRecord& r, double theta, double chi, const char* which) {
    if (!same_angle(r.theta, theta, kThetaPeriod) || !same_angle(r.chi, chi, kChiPeriod)) {
      throw SettingMismatch(std::string(which) + " is at (theta=" + format_double(r.theta) + ", chi=" +
                            format_double(r.chi) + "), expected (" + format_double(theta) + ", " +
                            format_double(chi) + ")");
    }
  };
  check(c2, t + pi / 2, c + pi / 4, "second record");
  check(c3, t + pi / 2, c, "third record");
  check(c4, t, c + pi / 4, "fourth record");
  return correlation_E(c1.counts, c2.counts, c3.counts, c4.counts);
}

namespace {

std::array<std::pair<double, double>, 4> correlation_settings(double theta, double chi) {
  return {{{theta, chi}, {theta + pi / 2, chi + pi / 4}, {theta + pi / 2, chi}, {theta, chi + pi / 4}}};
}

}  // namespace

CorrelationEstimate correlation_at(const CountTable& table, double theta, double chi) {
  std::array<const CountRecord*, 4> found{};
  std::vector<std::pair<double, double>> absent;
  const auto settings = correlation_settings(theta, chi);
  for (std::size_t k = 0; k < 4; ++k) {
    found[k] = table.find(settings[k].first, settings[k].second);
    if (found[k] == nullptr) absent.push_back(settings[k]);
  }
  if (!absent.empty()) throw MissingSetting(std::move(absent));
  return correlation_E(found[0]->counts, found[1]->counts, found[2]->counts, found[3]->counts);
}

CHSHResult chsh_from_terms(const std::array<CorrelationEstimate, 4>& terms, const ChshSettings& settings) {
  CHSHResult r;
  r.settings = settings;
  r.terms = terms;
  r.S = std::abs(terms[0].E - terms[1].E + terms[2].E + terms[3].E);
  double var = 0.0;
  for (const auto& t : terms) {
    var += t.sigma_E * t.sigma_E;
    r.degenerate = r.degenerate || t.degenerate;
  }
  r.sigma_S = std::sqrt(var);
  r.violates = r.S > 2.0;
  if (r.violates) {
    r.violation_sigmas = r.sigma_S > 0.0 ? (r.S - 2.0) / r.sigma_S : std::numeric_limits<double>::infinity();
  }
  return r;
}

CHSHResult chsh_S(const CountTable& table, const ChshSettings& s) {
  const std::array<std::pair<double, double>, 4> points{
      {{s.theta, s.chi}, {s.theta, s.chi_prime}, {s.theta_prime, s.chi}, {s.theta_prime, s.chi_prime}}};
  std::vector<std::pair<double, double>> absent;
  for (const auto& [t, c] : points) {
    for (const auto& setting : correlation_settings(t, c)) {
      if (table.find(setting.first, setting.second) == nullptr) absent.push_back(setting);
    }
  }
  if (!absent.empty()) throw MissingSetting(std::move(absent));
  std::array<CorrelationEstimate, 4> terms;
  for (std::size_t k = 0; k < 4; ++k) terms[k] = correlation_at(table, points[k].first, points[k].second);
  return chsh_from_terms(terms, s);
}

std::vector<ScanPoint> scan_S(const CountTable& table, double theta, double theta_prime, double chi_offset,
                              std::vector<double> chis) {
  if (chis.empty()) chis = table.chi_values();
  std::vector<ScanPoint> out;
  out.reserve(chis.size());
  for (double chi : chis) {
    out.push_back({chi, chsh_S(table, ChshSettings{theta, theta_prime, chi, chi + chi_offset})});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct LinearFit {
  FringeFit fit;
  double rss = 0.0;
};

void require_fit_data(std::span<const CountRecord> records) {
  std::vector<double> chis;
  for (const auto& r : records) {
    if (std::none_of(chis.begin(), chis.end(), [&](double c) { return std::abs(c - r.chi) <= kSettingTolerance; })) {
      chis.push_back(r.chi);
    }
  }
  if (chis.size() < 4) {
    throw InsufficientData("fringe fit needs at least 4 distinct chi values, got " + std::to_string(chis.size()));
  }
  const auto [lo, hi] = std::minmax_element(chis.begin(), chis.end());
  if (*hi - *lo < kChiPeriod / 2 - kSettingTolerance) {
    throw InsufficientData("chi values span " + format_double(*hi - *lo) + " rad, need at least pi/4");
  }
}

LinearFit linear_fit(std::span<const CountRecord> records, double frequency) {
  const auto n = static_cast<Eigen::Index>(records.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = frequency * records[static_cast<std::size_t>(i)].chi;
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(x);
    design(i, 2) = std::sin(x);
    y(i) = records[static_cast<std::size_t>(i)].counts;
  }
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < 3) throw InsufficientData("chi values do not determine the fringe (rank-deficient design)");
  const Eigen::Vector3d coef = qr.solve(y);
  const Eigen::VectorXd resid = y - design * coef;

  LinearFit out;
  FringeFit& f = out.fit;
  f.frequency = frequency;
  f.offset = coef(0);
  f.amplitude = std::hypot(coef(1), coef(2));
  f.phase = std::atan2(coef(2), coef(1));
  f.visibility = f.offset != 0.0 ? f.amplitude / f.offset : std::numeric_limits<double>::infinity();
  f.non_physical = f.amplitude > f.offset;
  f.points = records.size();
  out.rss = resid.squaredNorm();
  f.residual_rms = std::sqrt(out.rss / static_cast<double>(n));
  return out;
}

}  // namespace

FringeFit fit_fringes(std::span<const CountRecord> records) {
  require_fit_data(records);
  return linear_fit(records, 4.0).fit;
}

FringeFit fit_fringes_free_frequency(std::span<const CountRecord> records) {
  require_fit_data(records);
  constexpr double lo = 1.0, hi = 8.0, step = 0.05;
  double best_f = 4.0;
  double best_rss = std::numeric_limits<double>::infinity();
  for (double f = lo; f <= hi + 1e-12; f += step) {
    const double rss = linear_fit(records, f).rss;
    if (rss < best_rss) {
      best_rss = rss;
      best_f = f;
    }
  }
  // Golden-section refinement around the best grid point.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(lo, best_f - step), b = std::min(hi, best_f + step);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = linear_fit(records, x1).rss, f2 = linear_fit(records, x2).rss;
  for (int it = 0; it < 100 && b - a > 1e-12; ++it) {
    if (f1 < f2) {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - g * (b - a);
      f1 = linear_fit(records, x1).rss;
    } else {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + g * (b - a);
      f2 = linear_fit(records, x2).rss;
    }
  }
  return linear_fit(records, 0.5 * (a + b)).fit;
}

std::map<double, FringeFit> fit_fringes_by_theta(std::span<const CountRecord> records) {
  std::map<double, std::vector<CountRecord>> groups;
  for (const auto& r : records) groups[r.theta].push_back(r);
  std::map<double, FringeFit> out;
  for (const auto& [theta, group] : groups) out.emplace(theta, fit_fringes(group));
  return out;
}

}  // namespace spinorbit
