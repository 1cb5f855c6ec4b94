// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "spinorbit/analysis.hpp"
#include "spinorbit/elements.hpp"
#include "spinorbit/experiments.hpp"
#include "spinorbit/fieldmap.hpp"

using namespace spinorbit;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

const double kTsirelson = 2 * std::numbers::sqrt2;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double closed_form(double theta, double chi) {
  const double c = std::cos(theta - 2 * chi);
  return 0.5 * c * c;
}

ExperimentConfig grid_config(double visibility, int chi_points) {
  ExperimentConfig cfg;
  cfg.theta_list = {0.0, pi / 4, pi / 2, 3 * pi / 4};
  for (int k = 0; k < chi_points; ++k) cfg.chi_list.push_back(k * (pi / 2) / chi_points);
  cfg.visibility = visibility;
  return cfg;
}

CountTable noiseless_table(const ExperimentConfig& cfg) {
  std::vector<CountRecord> rec;
  for (double t : cfg.theta_list)
    for (double c : cfg.chi_list) rec.push_back({t, c, expected_counts(cfg, t, c), cfg.exposure});
  return CountTable(rec);
}

Outcome ac1() {
  const double s = 1 / std::sqrt(2.0);
  const SinglePhotonState target({{{Spin::R, 2}, s}, {{Spin::L, -2}, s}});
  const auto t0 = std::chrono::steady_clock::now();
  const double f = fidelity(apply(qplate(1), SinglePhotonState::horizontal(0)), target);
  const double dt = seconds_since(t0);
  return {std::abs(f - 1) <= 1e-12 && dt < 1e-3, "fidelity=" + num(f) + " time=" + num(dt * 1e3) + "ms"};
}

Outcome ac2() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      const double theta = i * pi / 64, chi = j * (pi / 2) / 64;
      worst = std::max(worst, std::abs(probability_single(theta, chi) - closed_form(theta, chi)));
    }
  const double dt = seconds_since(t0);
  return {worst <= 1e-12 && dt < 1.0, "max_err=" + num(worst) + " time=" + num(dt) + "s"};
}

Outcome ac3() {
  const double s = 1 / std::sqrt(2.0);
  auto h = [](int m) { return SinglePhotonState::horizontal(m); };
  const auto target = tensor(SinglePhotonState::basis(Spin::L, 0), h(2)).scaled(s) +
                      tensor(SinglePhotonState::basis(Spin::R, 0), h(-2)).scaled(s);
  // Pipeline: SPDC, keep |m| = 2, q-plate and single-mode fiber on arm A.
  const auto post = postselect_pm2_pair(SchmidtSpectrum::decaying());
  const auto out = normalize(propagate_arm({qplate(1), smf_coupler()}, post.pair, Arm::A));
  const double f = fidelity(reflect_oam(out, Arm::B), target);
  return {std::abs(f - 1) <= 1e-12, "fidelity=" + num(f) + " (arm-B OAM reflected)"};
}

Outcome ac4() {
  const auto table = noiseless_table(grid_config(1.0, 64));
  const auto scan = scan_S(table);
  double worst = 0, s0 = 0, s16 = 0;
  for (const auto& p : scan) {
    worst = std::max(worst, std::abs(p.result.S - kTsirelson * std::abs(std::sin(4 * p.chi + pi / 4))));
    if (std::abs(p.chi) < 1e-12) s0 = p.result.S;
    if (std::abs(p.chi - pi / 16) < 1e-12) s16 = p.result.S;
  }
  const bool ok = scan.size() == 64 && worst <= 1e-9 && std::abs(s16 - kTsirelson) <= 1e-9 && std::abs(s0 - 2) <= 1e-9;
  return {ok, "S(pi/16)=" + num(s16) + " S(0)=" + num(s0) + " curve_err=" + num(worst)};
}

Outcome ac5() {
  const auto cfg = grid_config(0.9, 32);
  const auto table = noiseless_table(cfg);
  double worst = 0;
  for (const auto& [theta, f] : fit_fringes_by_theta(table.records())) worst = std::max(worst, std::abs(f.visibility - 0.9));
  const double s = chsh_S(table, ChshSettings{}).S;
  return {worst <= 1e-9 && std::abs(s - 0.9 * kTsirelson) <= 1e-9 && std::abs(s - 2.546) < 1e-3,
          "visibility_err=" + num(worst) + " S=" + num(s)};
}

Outcome ac6() {
  const double hi = chsh_S(noiseless_table(grid_config(0.72, 16)), ChshSettings{}).S;
  const double lo = chsh_S(noiseless_table(grid_config(0.70, 16)), ChshSettings{}).S;
  return {hi > 2 + 1e-3 && lo < 2 - 1e-3, "S(V=0.72)=" + num(hi) + " S(V=0.70)=" + num(lo)};
}

Outcome ac7() {
  const auto t0 = std::chrono::steady_clock::now();
  int strong = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto cfg = grid_config(0.9, 16);
    cfg.seed = seed;
    strong += chsh_S(CountTable(simulate_counts(cfg)), ChshSettings{}).violation_sigmas >= 10;
  }
  std::vector<double> lx, ly;
  for (double rate : {200.0, 2000.0, 20000.0}) {
    double mean = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      auto cfg = grid_config(0.9, 16);
      cfg.pair_rate = rate;
      cfg.seed = 1000 + seed;
      const auto rec = simulate_counts(cfg);
      for (const auto& r : rec) total += r.counts / 50;
      mean += chsh_S(CountTable(rec), ChshSettings{}).violation_sigmas / 50;
    }
    lx.push_back(std::log(total));
    ly.push_back(std::log(mean));
  }
  // Least-squares slope of log(significance) against log(total counts).
  const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int k = 0; k < 3; ++k) sxy += (lx[k] - mx) * (ly[k] - my), sxx += (lx[k] - mx) * (lx[k] - mx);
  const double slope = sxy / sxx;
  const double dt = seconds_since(t0);
  return {strong >= 95 && std::abs(slope - 0.5) <= 0.05 && dt < 30,
          "seeds>=10sigma=" + std::to_string(strong) + "/100 slope=" + num(slope) + " time=" + num(dt) + "s"};
}

Outcome ac8() {
  const double n = 10000;
  const std::pair<double, double> settings[] = {{0.0, 0.0}, {0.0, pi / 8}, {pi / 4, 0.3}};
  bool ok = true;
  std::string detail;
  for (const auto& [theta, chi] : settings) {
    ExperimentConfig cfg;
    cfg.theta_list = {theta};
    cfg.chi_list.assign(static_cast<std::size_t>(n), chi);
    cfg.visibility = 0.9;
    cfg.seed = 8;
    const double lambda = expected_counts(cfg, theta, chi);
    const auto rec = simulate_counts(cfg);
    double mean = 0, m2 = 0;
    for (const auto& r : rec) mean += r.counts / n;
    for (const auto& r : rec) m2 += (r.counts - mean) * (r.counts - mean);
    const double var = m2 / (n - 1);
    const double zm = (mean - lambda) / std::sqrt(lambda / n);
    const double zv = (var - lambda) / std::sqrt((lambda + 2 * lambda * lambda) / n);
    ok = ok && std::abs(zm) < 5 && std::abs(zv) < 5;
    detail += "lambda=" + num(lambda) + " z_mean=" + num(zm) + " z_var=" + num(zv) + "; ";
  }
  return {ok, detail};
}

Outcome ac9() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto field = render_mode(apply(qplate(1), SinglePhotonState::horizontal(0)), GridSpec{256, 3.0, 1.0});
  const auto map = stokes(field);
  const double winding = orientation_winding(map, 1.0);
  const double dt = seconds_since(t0);
  const double peak = *std::max_element(map.s0.begin(), map.s0.end());
  double worst_s3 = 0;
  for (std::size_t k = 0; k < map.s0.size(); ++k) worst_s3 = std::max(worst_s3, std::abs(map.normalized(3, k)));
  const double axis = map.s0[field.index(128, 128)] / peak;
  return {worst_s3 <= 1e-12 && axis < 1e-12 && std::abs(winding + 2) < 1e-6 && dt < 5,
          "max|S3/S0|=" + num(worst_s3) + " axis/peak=" + num(axis) + " winding=" + num(winding) + " time=" +
              num(dt) + "s"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome ac10() {
  const fs::path base = fs::temp_directory_path() / "spinorbit_acceptance_repro";
  fs::remove_all(base);
  const fs::path a = base / "a", b = base / "b";
  for (const auto& dir : {a, b}) {
    const std::string cmd = std::string(SPINORBIT_CLI_PATH) + " reproduce-paper --seed 20110101 --out " + dir.string() + " >/dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "reproduce-paper failed"};
  }
  std::vector<fs::path> files_a, files_b;
  for (const auto& e : fs::recursive_directory_iterator(a)) files_a.push_back(fs::relative(e.path(), a));
  for (const auto& e : fs::recursive_directory_iterator(b)) files_b.push_back(fs::relative(e.path(), b));
  std::sort(files_a.begin(), files_a.end());
  std::sort(files_b.begin(), files_b.end());
  if (files_a != files_b) return {false, "directory listings differ"};
  std::size_t compared = 0;
  for (const auto& f : files_a) {
    if (fs::is_directory(a / f)) continue;
    if (slurp(a / f) != slurp(b / f)) return {false, "differs: " + f.string()};
    ++compared;
  }
  fs::remove_all(base);
  return {compared > 0, std::to_string(compared) + " files byte-identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1  q-plate entangled state", ac1},   {"AC2  single-photon fringe law", ac2},
      {"AC3  hybrid two-photon state", ac3},   {"AC4  ideal CHSH curve", ac4},
      {"AC5  visibility 0.9", ac5},            {"AC6  Bell threshold in V", ac6},
      {"AC7  statistical significance", ac7},  {"AC8  Poisson moments", ac8},
      {"AC9  vector-beam texture", ac9},       {"AC10 reproducible output tree", ac10},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %-34s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
