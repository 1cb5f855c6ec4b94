#pragma once

// Run configuration: a flat YAML document. Angles carry an explicit unit,
// either as a suffix ("22.5deg", "0.39rad") or in the key ("angle_deg: 22.5").

#include <numbers>
#include <string>
#include <vector>

#include "spinorbit/elements.hpp"
#include "spinorbit/experiments.hpp"
#include "spinorbit/fieldmap.hpp"

namespace spinorbit {

struct ElementSpec {
  std::string type;  // qplate | hwp | polarizer | pol_analyzer | sector_hologram | smf | grating
  int q = 1;
  double efficiency = 1.0;
  double angle = 0.0;  // rad; axis angle, theta or chi depending on type
  bool operator==(const ElementSpec&) const = default;
};

ElementOp make_element(const ElementSpec& spec);
Pipeline make_pipeline(const std::vector<ElementSpec>& specs);

struct RenderConfig {
  // Input photon: linear polarization at `input_angle` (rad) unless
  // `input_circular` is "L" or "R".
  std::string input_circular;
  double input_angle = 0.0;
  int input_oam = 0;
  std::vector<ElementSpec> pipeline{ElementSpec{"qplate"}};
  GridSpec grid;
  bool operator==(const RenderConfig&) const = default;
};

SinglePhotonState render_input_state(const RenderConfig& cfg, int m_max);

struct ChshConfig {
  double theta = 0.0;
  double theta_prime = std::numbers::pi / 4;
  double chi_offset = std::numbers::pi / 8;
  bool operator==(const ChshConfig&) const = default;
};

struct RunConfig {
  ExperimentConfig experiment;
  RenderConfig render;
  ChshConfig chsh;
  std::vector<std::string> warnings;  // not serialized
};

bool operator==(const RunConfig& a, const RunConfig& b);

// Grid defaults when the file gives none: theta in {0, 45, 90, 135} deg and
// 16 chi values at 11.25 deg steps.
RunConfig default_run_config();

// Throws ConfigError naming the offending key (unknown keys included).
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

// "22.5deg" / "0.3rad" -> radians.
double parse_angle(const std::string& text, const std::string& key);

}  // namespace spinorbit
