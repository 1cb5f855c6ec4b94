#include "spinorbit/source.hpp"

#include <cmath>

#include "spinorbit/errors.hpp"

namespace spinorbit {

SchmidtSpectrum SchmidtSpectrum::normalized(std::span<const double> raw) {
  if (raw.empty()) throw DomainError("Schmidt spectrum is empty");
  double total = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (!(raw[k] >= 0.0) || !std::isfinite(raw[k])) {
      throw DomainError("Schmidt coefficient c_" + std::to_string(k) + " must be finite and non-negative");
    }
    total += (k == 0 ? 1.0 : 2.0) * raw[k] * raw[k];
  }
  if (total <= kZeroNormTolerance) throw ZeroNorm("Schmidt spectrum has no weight");
  SchmidtSpectrum s;
  // Inputs already normalized to rounding are kept bit-exact.
  s.rescale_ = std::abs(total - 1.0) <= 1e-14 ? 1.0 : 1.0 / std::sqrt(total);
  s.raw_.assign(raw.begin(), raw.end());
  s.c_.reserve(raw.size());
  for (double c : raw) s.c_.push_back(c * s.rescale_);
  return s;
}

SchmidtSpectrum SchmidtSpectrum::decaying(int m_max) {
  std::vector<double> raw;
  for (int k = 0; k <= m_max; ++k) raw.push_back(1.0 / (1.0 + k));
  return normalized(normalized(raw).coefficients());
}

double SchmidtSpectrum::coefficient(int m) const {
  const auto k = static_cast<std::size_t>(std::abs(m));
  return k < c_.size() ? c_[k] : 0.0;
}

TwoPhotonState spdc_state(const SchmidtSpectrum& spectrum, int m_max) {
  TwoPhotonState::Amplitudes amps;
  const int top = std::min(m_max, spectrum.max_oam());
  for (int m = -top; m <= top; ++m) {
    const double c = spectrum.coefficient(m);
    if (c == 0.0) continue;
    const auto a = SinglePhotonState::horizontal(m, m_max);
    const auto b = SinglePhotonState::horizontal(-m, m_max);
    const auto term = tensor(a, b);
    for (const auto& [key, amp] : term.amplitudes()) amps[key] += c * amp;
  }
  return TwoPhotonState(std::move(amps), m_max);
}

double sector_probability(const TwoPhotonState& pair, int abs_m) {
  double p = 0.0;
  for (const auto& [key, amp] : pair.amplitudes()) {
    if (std::abs(key.first.oam) == abs_m) p += std::norm(amp);
  }
  return p;
}

Heralded heralded_single(const SchmidtSpectrum& spectrum, int m_max) {
  if (spectrum.coefficient(0) <= 0.0) throw ZeroNorm("spectrum has no m = 0 weight to herald");
  const auto pair = spdc_state(spectrum, m_max);
  auto [photon, p] = project_arm(pair, Arm::B, SinglePhotonState::horizontal(0, m_max));
  return {normalize(photon), p};
}

PostSelectedPair postselect_pm2_pair(const SchmidtSpectrum& spectrum, int m_max) {
  if (spectrum.coefficient(2) <= 0.0) throw ZeroNorm("spectrum has no |m| = 2 weight to post-select");
  const auto pair = spdc_state(spectrum, m_max);
  TwoPhotonState::Amplitudes kept;
  for (const auto& [key, amp] : pair.amplitudes()) {
    if (std::abs(key.first.oam) == 2) kept.emplace(key, amp);
  }
  TwoPhotonState selected(std::move(kept), m_max);
  const double p = selected.norm_squared();
  return {normalize(selected), p};
}

}  // namespace spinorbit
