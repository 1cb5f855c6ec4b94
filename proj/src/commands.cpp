#include "spinorbit/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "spinorbit/analysis.hpp"
#include "spinorbit/errors.hpp"
#include "spinorbit/fieldmap.hpp"
#include "spinorbit/numfmt.hpp"

namespace spinorbit {

namespace fs = std::filesystem;
using json = nlohmann::json;
using std::numbers::pi;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw DataError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

std::vector<CountRecord> read_counts_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open counts file '" + path.string() + "'");
  try {
    return read_counts_csv(in);
  } catch (const DataError& ex) {
    throw DataError("'" + path.string() + "': " + ex.what());
  }
}

// JSON has no infinity; unbounded significance is written as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

fs::path write_scan_report(const fs::path& dir, const std::string& stem, const std::vector<ScanPoint>& scan,
                           ReportFormat format) {
  if (format == ReportFormat::Csv) {
    const fs::path path = dir / (stem + ".csv");
    auto out = open_out(path);
    out << "chi_rad,S,sigma_S,violation_sigmas\n";
    for (const auto& p : scan) {
      out << format_double(p.chi) << ',' << format_double(p.result.S) << ',' << format_double(p.result.sigma_S) << ','
          << format_double(p.result.violation_sigmas) << '\n';
    }
    finish(out, path);
    return path;
  }
  const fs::path path = dir / (stem + ".json");
  json rows = json::array();
  for (const auto& p : scan) {
    rows.push_back({{"chi_rad", p.chi},
                    {"S", p.result.S},
                    {"sigma_S", p.result.sigma_S},
                    {"violation_sigmas", finite_or_null(p.result.violation_sigmas)},
                    {"violates", p.result.violates},
                    {"degenerate", p.result.degenerate}});
  }
  json doc;
  if (!scan.empty()) {
    const auto& s = scan.front().result.settings;
    doc["theta_rad"] = s.theta;
    doc["theta_prime_rad"] = s.theta_prime;
    doc["chi_offset_rad"] = s.chi_prime - s.chi;
  }
  doc["scan"] = rows;
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
  return path;
}

fs::path write_fit_report(const fs::path& dir, const std::map<double, FringeFit>& fits, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    const fs::path path = dir / "fringe_fits.csv";
    auto out = open_out(path);
    out << "theta_rad,offset,amplitude,phase_rad,frequency,visibility,residual_rms,non_physical\n";
    for (const auto& [theta, f] : fits) {
      out << format_double(theta) << ',' << format_double(f.offset) << ',' << format_double(f.amplitude) << ','
          << format_double(f.phase) << ',' << format_double(f.frequency) << ',' << format_double(f.visibility) << ','
          << format_double(f.residual_rms) << ',' << (f.non_physical ? 1 : 0) << '\n';
    }
    finish(out, path);
    return path;
  }
  const fs::path path = dir / "fringe_fits.json";
  json rows = json::array();
  for (const auto& [theta, f] : fits) {
    rows.push_back({{"theta_rad", theta},
                    {"offset", f.offset},
                    {"amplitude", f.amplitude},
                    {"phase_rad", f.phase},
                    {"frequency", f.frequency},
                    {"visibility", finite_or_null(f.visibility)},
                    {"residual_rms", f.residual_rms},
                    {"non_physical", f.non_physical}});
  }
  auto out = open_out(path);
  out << json{{"fits", rows}}.dump(2) << '\n';
  finish(out, path);
  return path;
}

void print_scan(std::ostream& os, const std::vector<ScanPoint>& scan) {
  os << std::setw(12) << "chi_rad" << std::setw(10) << "chi/pi" << std::setw(12) << "S" << std::setw(12) << "sigma_S"
     << std::setw(12) << "sigmas" << "  flag\n";
  os << std::fixed;
  for (const auto& p : scan) {
    const auto& r = p.result;
    os << std::setprecision(6) << std::setw(12) << p.chi << std::setw(10) << std::setprecision(5) << p.chi / pi
       << std::setprecision(6) << std::setw(12) << r.S << std::setw(12) << r.sigma_S << std::setprecision(2)
       << std::setw(12) << r.violation_sigmas << "  " << (r.violates ? "VIOLATION" : "-")
       << (r.degenerate ? " (zero-count cell)" : "") << '\n';
  }
  os.unsetf(std::ios::floatfield);
}

void print_fits(std::ostream& os, const std::map<double, FringeFit>& fits) {
  os << std::setw(12) << "theta_rad" << std::setw(12) << "offset" << std::setw(12) << "amplitude" << std::setw(12)
     << "phase_rad" << std::setw(10) << "freq" << std::setw(12) << "visibility" << std::setw(12) << "rms" << '\n';
  os << std::fixed << std::setprecision(5);
  for (const auto& [theta, f] : fits) {
    os << std::setw(12) << theta << std::setw(12) << f.offset << std::setw(12) << f.amplitude << std::setw(12)
       << f.phase << std::setw(10) << f.frequency << std::setw(12) << f.visibility << std::setw(12) << f.residual_rms
       << (f.non_physical ? "  NON-PHYSICAL" : "") << '\n';
  }
  os.unsetf(std::ios::floatfield);
}

FileList relative_to(const fs::path& base, const std::vector<fs::path>& paths) {
  FileList out;
  for (const auto& p : paths) out.push_back(p.lexically_relative(base));
  return out;
}

std::vector<fs::path> write_fieldmaps(const SinglePhotonState& state, const GridSpec& grid, const fs::path& dir,
                                      std::ostream& log) {
  const auto field = render_mode(state, grid);
  const auto map = stokes(field);
  auto files = export_maps(map, dir, ExportFormat::CsvGrid);
  auto pngs = export_maps(map, dir, ExportFormat::Png);
  files.insert(files.end(), pngs.begin(), pngs.end());
  log << "rendered " << grid.size << "x" << grid.size << " field, integrated power " << format_double(field.total_power())
      << ", orientation winding " << format_double(std::round(orientation_winding(map, grid.waist) * 1e6) / 1e6)
      << '\n';
  return files;
}

}  // namespace

FileList cmd_simulate(const RunConfig& cfg_in, const CommandOptions& opts, std::ostream& log) {
  RunConfig cfg = cfg_in;
  if (opts.seed) cfg.experiment.seed = *opts.seed;
  const auto records = simulate_counts(cfg.experiment);
  const fs::path path = opts.out / "counts.csv";
  auto out = open_out(path);
  write_counts_csv(out, records);
  finish(out, path);
  log << "simulated " << records.size() << " settings (" << to_string(cfg.experiment.mode) << ", seed "
      << cfg.experiment.seed << ")\n";
  return relative_to(opts.out, {path});
}

FileList cmd_chsh(const fs::path& counts_csv, const ChshConfig& settings, const CommandOptions& opts,
                  std::ostream& table) {
  const CountTable counts(read_counts_file(counts_csv));
  const auto scan = scan_S(counts, settings.theta, settings.theta_prime, settings.chi_offset);
  print_scan(table, scan);
  return relative_to(opts.out, {write_scan_report(opts.out, "chsh_scan", scan, opts.format)});
}

FileList cmd_fringes(const fs::path& counts_csv, bool free_frequency, const CommandOptions& opts,
                     std::ostream& table) {
  const auto records = read_counts_file(counts_csv);
  std::map<double, FringeFit> fits;
  if (free_frequency) {
    std::map<double, std::vector<CountRecord>> groups;
    for (const auto& r : records) groups[r.theta].push_back(r);
    for (const auto& [theta, group] : groups) fits.emplace(theta, fit_fringes_free_frequency(group));
  } else {
    fits = fit_fringes_by_theta(records);
  }
  print_fits(table, fits);
  return relative_to(opts.out, {write_fit_report(opts.out, fits, opts.format)});
}

FileList cmd_render(const RunConfig& cfg, const std::optional<fs::path>& state_file, const CommandOptions& opts,
                    std::ostream& log) {
  const int m_max = cfg.experiment.m_max;
  SinglePhotonState state(m_max);
  if (state_file) {
    std::ifstream in(*state_file);
    if (!in) throw DataError("cannot open state file '" + state_file->string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    state = single_from_text(ss.str(), m_max);
  } else {
    state = propagate(make_pipeline(cfg.render.pipeline), render_input_state(cfg.render, m_max));
  }
  state = normalize(state);
  log << "rendering state:\n" << to_text(state);
  return relative_to(opts.out, write_fieldmaps(state, cfg.render.grid, opts.out, log));
}

RunConfig reproduction_config(std::uint64_t seed) {
  RunConfig cfg = default_run_config();
  auto& e = cfg.experiment;
  e.chi_list.clear();
  for (int k = 0; k < 32; ++k) e.chi_list.push_back(k * pi / 32);
  e.pair_rate = 2000.0;
  e.exposure = 1.0;
  e.visibility = 0.9;
  e.accidental_rate = 0.0;
  e.classical_noise = 0.01;
  e.seed = seed;
  return cfg;
}

FileList cmd_reproduce_paper(const CommandOptions& opts, std::ostream& log) {
  const RunConfig base = reproduction_config(opts.seed.value_or(20110101));
  std::vector<fs::path> files;

  {
    const fs::path path = opts.out / "config.yaml";
    auto out = open_out(path);
    out << serialize_config(base);
    finish(out, path);
    files.push_back(path);
  }

  // Coincidence fringes, fits and S(chi) scans for each experiment.
  json significance = json::array();
  std::ostringstream sig_csv;
  sig_csv << "mode,chi_rad,S,sigma_S,violation_sigmas,total_counts\n";
  const Mode modes[] = {Mode::SinglePhoton, Mode::TwoPhoton, Mode::Classical};
  for (std::size_t k = 0; k < 3; ++k) {
    ExperimentConfig e = base.experiment;
    e.mode = modes[k];
    e.seed = base.experiment.seed + k;
    const auto records = simulate_counts(e);
    const fs::path dir = opts.out / to_string(e.mode);
    {
      const fs::path path = dir / "counts.csv";
      auto out = open_out(path);
      write_counts_csv(out, records);
      finish(out, path);
      files.push_back(path);
    }
    files.push_back(write_fit_report(dir, fit_fringes_by_theta(records), opts.format));
    const CountTable table(records);
    files.push_back(write_scan_report(dir, "chsh_scan", scan_S(table), opts.format));

    const auto peak = chsh_S(table, ChshSettings{});
    double total = 0.0;
    for (const auto& r : records) total += r.counts;
    significance.push_back({{"mode", to_string(e.mode)},
                            {"chi_rad", peak.settings.chi},
                            {"S", peak.S},
                            {"sigma_S", peak.sigma_S},
                            {"violation_sigmas", finite_or_null(peak.violation_sigmas)},
                            {"total_counts", total}});
    sig_csv << to_string(e.mode) << ',' << format_double(peak.settings.chi) << ',' << format_double(peak.S) << ','
            << format_double(peak.sigma_S) << ',' << format_double(peak.violation_sigmas) << ','
            << format_double(total) << '\n';
    log << to_string(e.mode) << ": S(pi/16) = " << format_double(peak.S) << " +- " << format_double(peak.sigma_S)
        << " (" << format_double(std::round(peak.violation_sigmas * 100) / 100) << " sigma)\n";
  }
  {
    const fs::path path = opts.out / (opts.format == ReportFormat::Csv ? "significance.csv" : "significance.json");
    auto out = open_out(path);
    if (opts.format == ReportFormat::Csv) {
      out << sig_csv.str();
    } else {
      out << json{{"chsh_at_pi_over_16", significance}}.dump(2) << '\n';
    }
    finish(out, path);
    files.push_back(path);
  }

  // Ideal S(chi) from noiseless expected counts on a 64-point grid.
  {
    ExperimentConfig ideal = base.experiment;
    ideal.visibility = 1.0;
    ideal.mode = Mode::SinglePhoton;
    std::vector<double> chis;
    for (int k = 0; k < 64; ++k) chis.push_back(k * (pi / 2) / 64);
    std::vector<CountRecord> records;
    for (double t : ideal.theta_list)
      for (double c : chis) records.push_back({t, c, expected_counts(ideal, t, c), ideal.exposure});
    files.push_back(write_scan_report(opts.out, "chsh_ideal", scan_S(CountTable(records), 0.0, pi / 4, pi / 8, chis),
                                      opts.format));
  }

  // Polarization texture of the beam after the q-plate for H input.
  const auto mode = normalize(single_photon_prepared_state(base.experiment.m_max));
  auto maps = write_fieldmaps(mode, base.render.grid, opts.out / "fieldmap", log);
  files.insert(files.end(), maps.begin(), maps.end());
  return relative_to(opts.out, files);
}

// ---------------------------------------------------------------------------

fs::path manifest_path(const fs::path& out) {
  fs::path dir = fs::absolute(out).lexically_normal();
  if (!dir.has_filename()) dir = dir.parent_path();
  return dir.parent_path() / (dir.filename().string() + ".manifest.json");
}

void write_manifest(const RunManifest& m, const fs::path& out) {
  json files = json::array();
  for (const auto& f : m.outputs) files.push_back(f.generic_string());
  const json doc{{"command", m.command},      {"tool_version", m.tool_version}, {"seed", m.seed},
                 {"config", m.config_yaml},   {"outputs", files},              {"wall_clock_s", m.wall_clock_s},
                 {"output_dir", fs::absolute(out).lexically_normal().generic_string()}};
  const fs::path target = manifest_path(out);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary);
    if (!o) throw DataError("cannot write manifest '" + tmp.string() + "'");
    o << doc.dump(2) << '\n';
    o.flush();
    if (!o) throw DataError("write failed for manifest '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw DataError("cannot move manifest into place at '" + target.string() + "': " + ec.message());
}

}  // namespace spinorbit
