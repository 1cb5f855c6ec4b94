#include "spinorbit/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "spinorbit/errors.hpp"
#include "spinorbit/numfmt.hpp"

namespace spinorbit {

namespace {

using std::numbers::pi;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError(key, "expected a scalar value");
  return node.Scalar();
}

double number(const YAML::Node& node, const std::string& key) {
  try {
    return parse_double(scalar(node, key), key);
  } catch (const DataError&) {
    throw ConfigError(key, "expected a number, got '" + node.Scalar() + "'");
  }
}

long long integer(const YAML::Node& node, const std::string& key) {
  const double v = number(node, key);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) throw ConfigError(key, "expected an integer");
  return static_cast<long long>(v);
}

// Angle given under `key`; a `_deg`/`_rad` key suffix makes bare numbers legal.
double angle_value(const YAML::Node& node, const std::string& key) {
  if (ends_with(key, "_deg")) return number(node, key) * pi / 180.0;
  if (ends_with(key, "_rad")) return number(node, key);
  return parse_angle(scalar(node, key), key);
}

std::string base_key(const std::string& key) {
  if (ends_with(key, "_deg") || ends_with(key, "_rad")) return key.substr(0, key.size() - 4);
  return key;
}

std::vector<double> angle_list(const YAML::Node& node, const std::string& key) {
  std::vector<double> out;
  if (node.IsSequence()) {
    for (std::size_t k = 0; k < node.size(); ++k) out.push_back(angle_value(node[k], key));
  } else if (node.IsMap()) {
    double start = 0.0, step = 0.0;
    long long count = -1;
    bool have_step = false;
    for (const auto& kv : node) {
      const std::string sub = kv.first.as<std::string>();
      const std::string full = key + "." + sub;
      const std::string unit = ends_with(key, "_deg") ? "_deg" : ends_with(key, "_rad") ? "_rad" : "";
      if (base_key(sub) == "start") {
        start = angle_value(kv.second, ends_with(sub, "_deg") || ends_with(sub, "_rad") ? sub : full + unit);
      } else if (base_key(sub) == "step") {
        step = angle_value(kv.second, ends_with(sub, "_deg") || ends_with(sub, "_rad") ? sub : full + unit);
        have_step = true;
      } else if (sub == "count") {
        count = integer(kv.second, full);
      } else {
        throw ConfigError(full, "unknown key (expected start, step, count)");
      }
    }
    if (!have_step || count <= 0) throw ConfigError(key, "range needs a step and a positive count");
    for (long long k = 0; k < count; ++k) out.push_back(start + static_cast<double>(k) * step);
  } else {
    out.push_back(angle_value(node, key));
  }
  if (out.empty()) throw ConfigError(key, "angle list is empty");
  return out;
}

ElementSpec parse_element(const YAML::Node& node, const std::string& where) {
  if (!node.IsMap()) throw ConfigError(where, "pipeline stage must be a table like {type: qplate, q: 1}");
  ElementSpec e;
  if (!node["type"]) throw ConfigError(where + ".type", "missing element type");
  e.type = scalar(node["type"], where + ".type");
  static const std::set<std::string> known{"qplate", "hwp", "polarizer", "pol_analyzer", "sector_hologram", "smf",
                                           "grating"};
  if (!known.count(e.type)) throw ConfigError(where + ".type", "unknown element type '" + e.type + "'");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    const std::string full = where + "." + key;
    if (key == "type") continue;
    if (e.type == "qplate" && key == "q") {
      e.q = static_cast<int>(integer(kv.second, full));
    } else if (e.type == "qplate" && key == "efficiency") {
      e.efficiency = number(kv.second, full);
    } else if ((e.type == "hwp" || e.type == "polarizer" || e.type == "pol_analyzer" ||
                e.type == "sector_hologram") &&
               (base_key(key) == "angle" || base_key(key) == "theta" || base_key(key) == "chi")) {
      e.angle = angle_value(kv.second, key == base_key(key) ? full : key);
    } else {
      throw ConfigError(full, "unknown key for element '" + e.type + "'");
    }
  }
  return e;
}

void parse_render(const YAML::Node& node, RenderConfig& r) {
  if (!node.IsMap()) throw ConfigError("render", "expected a table");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    const std::string full = "render." + key;
    if (key == "input") {
      if (!kv.second.IsMap()) throw ConfigError(full, "expected {polarization: ..., oam: ...}");
      for (const auto& in : kv.second) {
        const std::string sub = in.first.as<std::string>();
        const std::string sfull = full + "." + sub;
        if (sub == "polarization") {
          const std::string v = scalar(in.second, sfull);
          r.input_circular.clear();
          if (v == "H") {
            r.input_angle = 0.0;
          } else if (v == "V") {
            r.input_angle = pi / 2;
          } else if (v == "L" || v == "R") {
            r.input_circular = v;
            r.input_angle = 0.0;
          } else {
            r.input_angle = parse_angle(v, sfull);
          }
        } else if (sub == "oam") {
          r.input_oam = static_cast<int>(integer(in.second, sfull));
        } else {
          throw ConfigError(sfull, "unknown key (expected polarization, oam)");
        }
      }
    } else if (key == "pipeline") {
      if (!kv.second.IsSequence()) throw ConfigError(full, "expected a list of stages");
      r.pipeline.clear();
      for (std::size_t k = 0; k < kv.second.size(); ++k) {
        r.pipeline.push_back(parse_element(kv.second[k], full + "[" + std::to_string(k) + "]"));
      }
    } else if (key == "grid") {
      if (!kv.second.IsMap()) throw ConfigError(full, "expected {size, half_extent_w0, waist}");
      for (const auto& g : kv.second) {
        const std::string sub = g.first.as<std::string>();
        const std::string gfull = full + "." + sub;
        if (sub == "size") {
          r.grid.size = static_cast<int>(integer(g.second, gfull));
          if (r.grid.size < kMinGridSize) {
            throw ConfigError(gfull, "grid must be at least " + std::to_string(kMinGridSize) + " px");
          }
        } else if (sub == "half_extent_w0") {
          r.grid.half_extent = number(g.second, gfull);
          if (!(r.grid.half_extent > 0)) throw ConfigError(gfull, "must be positive");
        } else if (sub == "waist") {
          r.grid.waist = number(g.second, gfull);
          if (!(r.grid.waist > 0)) throw ConfigError(gfull, "must be positive");
        } else {
          throw ConfigError(gfull, "unknown key (expected size, half_extent_w0, waist)");
        }
      }
    } else {
      throw ConfigError(full, "unknown key (expected input, pipeline, grid)");
    }
  }
}

void parse_chsh(const YAML::Node& node, ChshConfig& c) {
  if (!node.IsMap()) throw ConfigError("chsh", "expected a table");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    const std::string full = "chsh." + key;
    const std::string name = base_key(key);
    const std::string akey = key == name ? full : key;
    if (name == "theta") {
      c.theta = angle_value(kv.second, akey);
    } else if (name == "theta_prime") {
      c.theta_prime = angle_value(kv.second, akey);
    } else if (name == "chi_offset") {
      c.chi_offset = angle_value(kv.second, akey);
    } else {
      throw ConfigError(full, "unknown key (expected theta, theta_prime, chi_offset)");
    }
  }
}

std::string rad(double v) { return format_double(v) + "rad"; }

}  // namespace

double parse_angle(const std::string& text, const std::string& key) {
  std::string t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  double scale = 0.0;
  if (ends_with(t, "deg")) {
    scale = pi / 180.0;
  } else if (ends_with(t, "rad")) {
    scale = 1.0;
  } else {
    throw ConfigError(key, "angle '" + text + "' needs a unit suffix (deg or rad)");
  }
  try {
    return parse_double(std::string_view(t).substr(0, t.size() - 3), key) * scale;
  } catch (const DataError&) {
    throw ConfigError(key, "cannot parse angle '" + text + "'");
  }
}

ElementOp make_element(const ElementSpec& e) {
  if (e.type == "qplate") return qplate(e.q, e.efficiency);
  if (e.type == "hwp") return half_wave_plate(e.angle);
  if (e.type == "polarizer") return polarizer(e.angle);
  if (e.type == "pol_analyzer") return pol_analyzer(e.angle);
  if (e.type == "sector_hologram") return sector_hologram_analyzer(e.angle);
  if (e.type == "smf") return smf_coupler();
  if (e.type == "grating") return uniform_grating();
  throw ConfigError("type", "unknown element type '" + e.type + "'");
}

Pipeline make_pipeline(const std::vector<ElementSpec>& specs) {
  Pipeline p;
  for (const auto& s : specs) p.push_back(make_element(s));
  return p;
}

SinglePhotonState render_input_state(const RenderConfig& cfg, int m_max) {
  if (cfg.input_circular == "L") return SinglePhotonState::basis(Spin::L, cfg.input_oam, m_max);
  if (cfg.input_circular == "R") return SinglePhotonState::basis(Spin::R, cfg.input_oam, m_max);
  return SinglePhotonState::linear(cfg.input_angle, cfg.input_oam, m_max);
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  const auto& x = a.experiment;
  const auto& y = b.experiment;
  return x.mode == y.mode && x.theta_list == y.theta_list && x.chi_list == y.chi_list && x.pair_rate == y.pair_rate &&
         x.exposure == y.exposure && x.visibility == y.visibility && x.accidental_rate == y.accidental_rate &&
         x.seed == y.seed && x.schmidt.coefficients() == y.schmidt.coefficients() &&
         x.classical_noise == y.classical_noise && x.m_max == y.m_max && a.render == b.render && a.chsh == b.chsh;
}

RunConfig default_run_config() {
  RunConfig cfg;
  auto& e = cfg.experiment;
  e.theta_list = {0.0, pi / 4, pi / 2, 3 * pi / 4};
  for (int k = 0; k < 16; ++k) e.chi_list.push_back(k * pi / 16);
  return cfg;
}

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& ex) {
    throw ConfigError("", std::string("malformed YAML: ") + ex.what());
  }
  RunConfig cfg = default_run_config();
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw ConfigError("", "top level must be a table of key: value pairs");
  auto& e = cfg.experiment;
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    const std::string name = base_key(key);
    if (key == "mode") {
      e.mode = mode_from_string(scalar(v, key));
    } else if (name == "theta") {
      e.theta_list = angle_list(v, key);
    } else if (name == "chi") {
      e.chi_list = angle_list(v, key);
    } else if (key == "pair_rate") {
      e.pair_rate = number(v, key);
    } else if (key == "exposure") {
      e.exposure = number(v, key);
    } else if (key == "visibility") {
      e.visibility = number(v, key);
    } else if (key == "accidental_rate") {
      e.accidental_rate = number(v, key);
    } else if (key == "seed") {
      const std::string s = scalar(v, key);
      try {
        std::size_t used = 0;
        e.seed = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        throw ConfigError(key, "expected a non-negative 64-bit integer, got '" + s + "'");
      }
    } else if (key == "schmidt") {
      if (!v.IsSequence()) throw ConfigError(key, "expected a list [c0, c1, c2, ...]");
      std::vector<double> raw;
      for (std::size_t k = 0; k < v.size(); ++k) raw.push_back(number(v[k], key + "[" + std::to_string(k) + "]"));
      try {
        e.schmidt = SchmidtSpectrum::normalized(raw);
      } catch (const Error& ex) {
        throw ConfigError(key, ex.what());
      }
      if (std::abs(e.schmidt.rescale_factor() - 1.0) > 1e-6) {
        cfg.warnings.push_back("schmidt coefficients were not normalized; rescaled by " +
                               format_double(e.schmidt.rescale_factor()));
      }
    } else if (key == "classical_noise") {
      e.classical_noise = number(v, key);
    } else if (key == "m_max") {
      e.m_max = static_cast<int>(integer(v, key));
    } else if (key == "render") {
      parse_render(v, cfg.render);
    } else if (key == "chsh") {
      parse_chsh(v, cfg.chsh);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  e.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  const auto& e = cfg.experiment;
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << to_string(e.mode);
  out << YAML::Key << "theta" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double t : e.theta_list) out << rad(t);
  out << YAML::EndSeq;
  out << YAML::Key << "chi" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double c : e.chi_list) out << rad(c);
  out << YAML::EndSeq;
  out << YAML::Key << "pair_rate" << YAML::Value << format_double(e.pair_rate);
  out << YAML::Key << "exposure" << YAML::Value << format_double(e.exposure);
  out << YAML::Key << "visibility" << YAML::Value << format_double(e.visibility);
  out << YAML::Key << "accidental_rate" << YAML::Value << format_double(e.accidental_rate);
  out << YAML::Key << "seed" << YAML::Value << std::to_string(e.seed);
  out << YAML::Key << "schmidt" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double c : e.schmidt.raw()) out << format_double(c);
  out << YAML::EndSeq;
  out << YAML::Key << "classical_noise" << YAML::Value << format_double(e.classical_noise);
  out << YAML::Key << "m_max" << YAML::Value << e.m_max;

  const auto& r = cfg.render;
  out << YAML::Key << "render" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "input" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "polarization" << YAML::Value << (r.input_circular.empty() ? rad(r.input_angle) : r.input_circular);
  out << YAML::Key << "oam" << YAML::Value << r.input_oam << YAML::EndMap;
  out << YAML::Key << "pipeline" << YAML::Value << YAML::BeginSeq;
  for (const auto& s : r.pipeline) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "type" << YAML::Value << s.type;
    if (s.type == "qplate") {
      out << YAML::Key << "q" << YAML::Value << s.q;
      out << YAML::Key << "efficiency" << YAML::Value << format_double(s.efficiency);
    } else if (s.type != "smf" && s.type != "grating") {
      out << YAML::Key << "angle" << YAML::Value << rad(s.angle);
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "grid" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "size" << YAML::Value << r.grid.size;
  out << YAML::Key << "half_extent_w0" << YAML::Value << format_double(r.grid.half_extent);
  out << YAML::Key << "waist" << YAML::Value << format_double(r.grid.waist);
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "chsh" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "theta" << YAML::Value << rad(cfg.chsh.theta);
  out << YAML::Key << "theta_prime" << YAML::Value << rad(cfg.chsh.theta_prime);
  out << YAML::Key << "chi_offset" << YAML::Value << rad(cfg.chsh.chi_offset);
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace spinorbit
