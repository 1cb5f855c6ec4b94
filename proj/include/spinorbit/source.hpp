#pragma once

// Initial states from down-conversion: the OAM-entangled pair, the heralded
// m = 0 single photon, and the post-selected m = +-2 pair.

#include <span>
#include <vector>

#include "spinorbit/hilbert.hpp"

namespace spinorbit {

// Real, non-negative Schmidt weights c_|m| for |m| = 0..size()-1. Both the
// (m,-m) and (-m,m) terms carry c_|m|, so normalization is
//   c_0^2 + 2 * sum_{k>=1} c_k^2 = 1.
class SchmidtSpectrum {
 public:
  // Validates and rescales raw weights. `rescale_factor` reports how far the
  // input was from normalized (1 means already normalized).
  static SchmidtSpectrum normalized(std::span<const double> raw);
  // Default demo spectrum: c_|m|^2 proportional to 1/(1+|m|)^2 up to m_max.
  static SchmidtSpectrum decaying(int m_max = kDefaultMaxOam);

  const std::vector<double>& coefficients() const { return c_; }
  // Weights as given to normalized().
  const std::vector<double>& raw() const { return raw_; }
  double coefficient(int m) const;  // c_|m|, 0 beyond the stored range
  int max_oam() const { return static_cast<int>(c_.size()) - 1; }
  double rescale_factor() const { return rescale_; }

 private:
  std::vector<double> c_;
  std::vector<double> raw_;
  double rescale_ = 1.0;
};

// sum_m c_|m| |H,m>_A |H,-m>_B
TwoPhotonState spdc_state(const SchmidtSpectrum& spectrum, int m_max = kDefaultMaxOam);

// Probability of finding |m_A| = abs_m in the pair state.
double sector_probability(const TwoPhotonState& pair, int abs_m);

struct Heralded {
  SinglePhotonState photon;  // normalized arm-A state
  double probability;
};

// Arm B coupled to a single-mode fiber (projected onto |H,0>).
Heralded heralded_single(const SchmidtSpectrum& spectrum, int m_max = kDefaultMaxOam);

struct PostSelectedPair {
  TwoPhotonState pair;  // normalized
  double probability;
};

// Keeps only the m_A = +-2 terms.
PostSelectedPair postselect_pm2_pair(const SchmidtSpectrum& spectrum, int m_max = kDefaultMaxOam);

}  // namespace spinorbit
