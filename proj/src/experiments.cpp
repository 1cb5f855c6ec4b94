#include "spinorbit/experiments.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "spinorbit/elements.hpp"
#include "spinorbit/errors.hpp"
#include "spinorbit/numfmt.hpp"

namespace spinorbit {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::SinglePhoton: return "single_photon";
    case Mode::TwoPhoton: return "two_photon";
    case Mode::Classical: return "classical";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& name) {
  if (name == "single_photon" || name == "SinglePhoton") return Mode::SinglePhoton;
  if (name == "two_photon" || name == "TwoPhoton") return Mode::TwoPhoton;
  if (name == "classical" || name == "Classical") return Mode::Classical;
  throw ConfigError("mode", "unknown mode '" + name + "' (expected single_photon, two_photon or classical)");
}

void ExperimentConfig::validate() const {
  if (theta_list.empty()) throw ConfigError("theta", "at least one polarization angle is required");
  if (chi_list.empty()) throw ConfigError("chi", "at least one hologram angle is required");
  for (double t : theta_list)
    if (!std::isfinite(t)) throw ConfigError("theta", "angles must be finite");
  for (double c : chi_list)
    if (!std::isfinite(c)) throw ConfigError("chi", "angles must be finite");
  if (!(visibility >= 0.0 && visibility <= 1.0)) throw ConfigError("visibility", "must lie in [0, 1]");
  if (!(pair_rate >= 0.0) || !std::isfinite(pair_rate)) throw ConfigError("pair_rate", "must be finite and >= 0");
  if (!(accidental_rate >= 0.0) || !std::isfinite(accidental_rate))
    throw ConfigError("accidental_rate", "must be finite and >= 0");
  if (!(exposure > 0.0) || !std::isfinite(exposure)) throw ConfigError("exposure", "must be finite and > 0");
  if (!(classical_noise >= 0.0)) throw ConfigError("classical_noise", "must be >= 0");
  if (m_max < 4) throw ConfigError("m_max", "the pipelines need m_max >= 4");
}

SinglePhotonState single_photon_prepared_state(int m_max) {
  return apply(qplate(1), SinglePhotonState::horizontal(0, m_max));
}

double probability_single(double theta, double chi, int m_max) {
  const auto heralded = SinglePhotonState::horizontal(0, m_max);
  const Pipeline arm_a{qplate(1), pol_analyzer(theta), sector_hologram_analyzer(chi)};
  return propagate(arm_a, heralded).norm_squared();
}

TwoPhotonState nonlocal_pair_state(int m_max) {
  const auto selected = postselect_pm2_pair(SchmidtSpectrum::normalized(std::vector<double>{0.0, 0.0, 1.0}), m_max);
  return normalize(propagate_arm(Pipeline{qplate(1), smf_coupler()}, selected.pair, Arm::A));
}

TwoPhotonState nonlocal_target_state(int m_max) {
  auto term = [m_max](Spin spin_a, int oam_b) {
    return tensor(SinglePhotonState::basis(spin_a, 0, m_max), SinglePhotonState::horizontal(oam_b, m_max));
  };
  return normalize(term(Spin::L, 2) + term(Spin::R, -2));
}

TwoPhotonState reflect_oam(const TwoPhotonState& pair, Arm arm) {
  TwoPhotonState::Amplitudes out;
  for (const auto& [key, amp] : pair.amplitudes()) {
    auto [a, b] = key;
    (arm == Arm::A ? a : b).oam *= -1;
    out.emplace(TwoPhotonState::Key{a, b}, amp);
  }
  return TwoPhotonState(std::move(out), pair.m_max());
}

double probability_pair(double theta, double chi, int m_max) {
  const auto pair = nonlocal_pair_state(m_max);
  const auto a = apply_arm(pol_analyzer(theta), pair, Arm::A);
  return apply_arm(sector_hologram_analyzer(chi), a, Arm::B).norm_squared();
}

double classical_power_fraction(double theta, double chi, int m_max) {
  // Coherent beam in the same mode, no herald; the filters act on the mode.
  const auto beam = SinglePhotonState::horizontal(0, m_max);
  const Pipeline line{qplate(1), pol_analyzer(theta), sector_hologram_analyzer(chi)};
  return propagate(line, beam).norm_squared();
}

double ideal_probability(Mode mode, double theta, double chi, int m_max) {
  switch (mode) {
    case Mode::SinglePhoton: return probability_single(theta, chi, m_max);
    case Mode::TwoPhoton: return probability_pair(theta, chi, m_max);
    case Mode::Classical: return classical_power_fraction(theta, chi, m_max);
  }
  return 0.0;
}

double noisy_probability(double p_ideal, double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0)) throw DomainError("visibility must lie in [0, 1]");
  return visibility * p_ideal + (1.0 - visibility) * kMeanProbability;
}

double expected_counts(const ExperimentConfig& cfg, double theta, double chi) {
  const double p = noisy_probability(ideal_probability(cfg.mode, theta, chi, cfg.m_max), cfg.visibility);
  return cfg.pair_rate * cfg.exposure * p / kPeakProbability + cfg.accidental_rate * cfg.exposure;
}

namespace {

std::mt19937_64 setting_engine(std::uint64_t seed, std::size_t i, std::size_t j) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
  return std::mt19937_64(seq);
}

CountRecord simulate_setting(const ExperimentConfig& cfg, std::size_t i, std::size_t j) {
  const double theta = cfg.theta_list[i];
  const double chi = cfg.chi_list[j];
  const double lambda = expected_counts(cfg, theta, chi);
  auto engine = setting_engine(cfg.seed, i, j);
  double counts = 0.0;
  if (cfg.mode == Mode::Classical) {
    counts = lambda;
    if (cfg.classical_noise > 0.0) {
      std::normal_distribution<double> noise(0.0, cfg.classical_noise);
      counts = std::max(0.0, lambda * (1.0 + noise(engine)));
    }
  } else if (lambda > 0.0) {
    std::poisson_distribution<long long> poisson(lambda);
    counts = static_cast<double>(poisson(engine));
  }
  return {theta, chi, counts, cfg.exposure};
}

}  // namespace

std::vector<CountRecord> simulate_counts(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t nt = cfg.theta_list.size();
  const std::size_t nc = cfg.chi_list.size();
  const auto total = static_cast<std::ptrdiff_t>(nt * nc);
  std::vector<CountRecord> out(nt * nc);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    out[idx] = simulate_setting(cfg, idx / nc, idx % nc);
  }
  return out;
}

namespace reference {

std::vector<CountRecord> simulate_counts(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<CountRecord> out;
  out.reserve(cfg.theta_list.size() * cfg.chi_list.size());
  for (std::size_t i = 0; i < cfg.theta_list.size(); ++i)
    for (std::size_t j = 0; j < cfg.chi_list.size(); ++j) out.push_back(simulate_setting(cfg, i, j));
  return out;
}

}  // namespace reference

void write_counts_csv(std::ostream& out, const std::vector<CountRecord>& records) {
  out << "theta_rad,chi_rad,counts,exposure_s\n";
  for (const auto& r : records) {
    out << format_double(r.theta) << ',' << format_double(r.chi) << ',' << format_double(r.counts) << ','
        << format_double(r.exposure) << '\n';
  }
}

std::vector<CountRecord> read_counts_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("counts CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "theta_rad,chi_rad,counts,exposure_s") {
    throw DataError("counts CSV: unexpected header '" + line + "'");
  }
  std::vector<CountRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 4) {
      throw DataError("counts CSV line " + std::to_string(lineno) + ": expected 4 fields, got " +
                      std::to_string(fields.size()));
    }
    const std::string where = "line " + std::to_string(lineno);
    CountRecord r{parse_double(fields[0], "theta_rad at " + where), parse_double(fields[1], "chi_rad at " + where),
                  parse_double(fields[2], "counts at " + where), parse_double(fields[3], "exposure_s at " + where)};
    if (!(r.counts >= 0.0)) throw DataError("counts CSV " + where + ": negative counts");
    records.push_back(r);
  }
  if (records.empty()) throw DataError("counts CSV has a header but no rows");
  return records;
}

}  // namespace spinorbit
