#pragma once

// End-to-end pipelines for the heralded single-photon, photon-pair and
// coherent-beam experiments, plus Monte Carlo coincidence counting.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spinorbit/hilbert.hpp"
#include "spinorbit/source.hpp"

namespace spinorbit {

enum class Mode { SinglePhoton, TwoPhoton, Classical };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);  // throws ConfigError

// Peak of the ideal detection probability; pair_rate is referenced to it.
inline constexpr double kPeakProbability = 0.5;
// Setting-averaged ideal probability, the floor of the white-noise model.
inline constexpr double kMeanProbability = 0.25;

struct ExperimentConfig {
  Mode mode = Mode::SinglePhoton;
  std::vector<double> theta_list;  // radians
  std::vector<double> chi_list;    // radians
  double pair_rate = 2000.0;       // mean coincidences/s at the fringe peak for V = 1
  double exposure = 1.0;           // s per setting
  double visibility = 1.0;
  double accidental_rate = 0.0;    // counts/s, flat
  std::uint64_t seed = 1;
  SchmidtSpectrum schmidt = SchmidtSpectrum::decaying();
  double classical_noise = 0.0;    // relative Gaussian power-meter noise, Classical mode only
  int m_max = kDefaultMaxOam;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

struct CountRecord {
  double theta;     // rad
  double chi;       // rad
  double counts;    // integral except in Classical mode
  double exposure;  // s
};

// Conditional detection probability through the composed element pipeline.
double probability_single(double theta, double chi, int m_max = kDefaultMaxOam);
double probability_pair(double theta, double chi, int m_max = kDefaultMaxOam);
double classical_power_fraction(double theta, double chi, int m_max = kDefaultMaxOam);
double ideal_probability(Mode mode, double theta, double chi, int m_max = kDefaultMaxOam);

// V * p + (1 - V) / 4. Throws DomainError for V outside [0,1].
double noisy_probability(double p_ideal, double visibility);

// Heralded photon after the q-plate: (|R,+2> + |L,-2>)/sqrt2.
SinglePhotonState single_photon_prepared_state(int m_max = kDefaultMaxOam);

// Post-selected pair after the q-plate and fiber on arm A, renormalized.
TwoPhotonState nonlocal_pair_state(int m_max = kDefaultMaxOam);

// (|L>_A|+2>_B + |R>_A|-2>_B)/sqrt2 (x) |0>_A |H>_B as conventionally written
// with arm B's OAM counted in the frame seen after the arm-B mirror.
TwoPhotonState nonlocal_target_state(int m_max = kDefaultMaxOam);

// m -> -m on one arm. Relates the two OAM frame conventions for arm B; the
// detection probabilities use the unreflected frame, which yields
// cos^2(theta - 2 chi) fringes in both quantum experiments.
TwoPhotonState reflect_oam(const TwoPhotonState& pair, Arm arm);

// Poisson mean (or classical expected flux) at one setting.
double expected_counts(const ExperimentConfig& cfg, double theta, double chi);

// One record per (theta, chi), theta-major. Each setting draws from its own
// generator seeded by (seed, theta index, chi index), so the result does not
// depend on evaluation order or thread count. OpenMP-parallel over settings.
std::vector<CountRecord> simulate_counts(const ExperimentConfig& cfg);

namespace reference {
// Serial implementation kept as the oracle for the parallel kernel.
std::vector<CountRecord> simulate_counts(const ExperimentConfig& cfg);
}  // namespace reference

// Counts CSV: header `theta_rad,chi_rad,counts,exposure_s`.
void write_counts_csv(std::ostream& out, const std::vector<CountRecord>& records);
std::vector<CountRecord> read_counts_csv(std::istream& in);

}  // namespace spinorbit
