#pragma once

// Correlation and CHSH statistics on coincidence counts, with first-order
// Poisson error propagation, and sinusoidal fringe fitting.

#include <array>
#include <map>
#include <numbers>
#include <span>
#include <vector>

#include "spinorbit/experiments.hpp"

namespace spinorbit {

// Apparatus periods: the polarizer repeats after pi in theta, the four-sector
// hologram after pi/2 in chi.
inline constexpr double kThetaPeriod = std::numbers::pi;
inline constexpr double kChiPeriod = std::numbers::pi / 2;
inline constexpr double kSettingTolerance = 1e-9;

bool same_angle(double a, double b, double period, double tol = kSettingTolerance);

// Lookup of records by setting. An exact (theta, chi) match wins; otherwise the
// first record that is the same physical setting modulo the apparatus periods.
class CountTable {
 public:
  explicit CountTable(std::vector<CountRecord> records);
  const CountRecord* find(double theta, double chi) const;
  const std::vector<CountRecord>& records() const { return records_; }
  // Distinct chi values in first-seen order.
  std::vector<double> chi_values() const;
  std::vector<double> theta_values() const;

 private:
  std::vector<CountRecord> records_;
};

struct CorrelationEstimate {
  double E = 0.0;
  double sigma_E = 0.0;
  std::array<double, 4> counts{};  // C(t,c), C(t+pi/2,c+pi/4), C(t+pi/2,c), C(t,c+pi/4)
  bool degenerate = false;         // some cell had zero counts and contributes no variance
};

// E = (c1 + c2 - c3 - c4) / (c1 + c2 + c3 + c4), sigma from Poisson propagation.
// Throws ZeroCounts for an empty denominator.
CorrelationEstimate correlation_E(double c1, double c2, double c3, double c4);
// Same, validating that the records follow the (t,c), (t+pi/2,c+pi/4),
// (t+pi/2,c), (t,c+pi/4) pattern; throws SettingMismatch otherwise.
CorrelationEstimate correlation_E(const CountRecord& c1, const CountRecord& c2, const CountRecord& c3,
                                  const CountRecord& c4);
// Throws MissingSetting listing every absent setting.
CorrelationEstimate correlation_at(const CountTable& table, double theta, double chi);

struct ChshSettings {
  double theta = 0.0;
  double theta_prime = std::numbers::pi / 4;
  double chi = std::numbers::pi / 16;
  double chi_prime = 3 * std::numbers::pi / 16;
};

struct CHSHResult {
  double S = 0.0;
  double sigma_S = 0.0;
  ChshSettings settings;
  double violation_sigmas = 0.0;  // (S - 2) / sigma_S when S > 2, else 0
  bool violates = false;
  bool degenerate = false;
  // E(t,c), E(t,c'), E(t',c), E(t',c')
  std::array<CorrelationEstimate, 4> terms{};
};

// S = |E(t,c) - E(t,c') + E(t',c) + E(t',c')|
CHSHResult chsh_from_terms(const std::array<CorrelationEstimate, 4>& terms, const ChshSettings& settings);
CHSHResult chsh_S(const CountTable& table, const ChshSettings& settings);

struct ScanPoint {
  double chi;
  CHSHResult result;
};

// S(chi) with chi' = chi + chi_offset. Uses every chi in the table when
// `chis` is empty.
std::vector<ScanPoint> scan_S(const CountTable& table, double theta = 0.0, double theta_prime = std::numbers::pi / 4,
                              double chi_offset = std::numbers::pi / 8, std::vector<double> chis = {});

struct FringeFit {
  double amplitude = 0.0;   // A
  double offset = 0.0;      // B
  double phase = 0.0;       // phi0 in C(chi) = B + A cos(f chi - phi0)
  double frequency = 4.0;   // f
  double visibility = 0.0;  // A / B
  double residual_rms = 0.0;
  bool non_physical = false;  // A > B
  std::size_t points = 0;
};

// Linear least squares on {1, cos 4chi, sin 4chi}. Needs at least 4 distinct
// chi values spanning at least half a fringe period (pi/4).
FringeFit fit_fringes(std::span<const CountRecord> records);
// Diagnostic refit with the frequency free (searched over [1, 8]).
FringeFit fit_fringes_free_frequency(std::span<const CountRecord> records);
// Groups by theta (exact match) and fits each group.
std::map<double, FringeFit> fit_fringes_by_theta(std::span<const CountRecord> records);

}  // namespace spinorbit
