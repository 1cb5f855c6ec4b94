#pragma once

// Transverse field and Stokes maps of spin-orbit modes, each OAM component
// carried by a p = 0 Laguerre-Gauss profile.

#include <filesystem>
#include <string>
#include <vector>

#include "spinorbit/hilbert.hpp"

namespace spinorbit {

inline constexpr int kMinGridSize = 64;

struct GridSpec {
  int size = 256;            // pixels per side
  double half_extent = 3.0;  // in units of the waist
  double waist = 1.0;        // w0
  bool operator==(const GridSpec&) const = default;
};

// Square sample grid. Pixel (i, j) sits at x = (i - size/2) * step,
// y = (j - size/2) * step, so the beam axis is the sample (size/2, size/2).
class FieldGrid {
 public:
  FieldGrid(GridSpec spec);

  const GridSpec& spec() const { return spec_; }
  int size() const { return spec_.size; }
  double step() const;  // physical pixel pitch
  double coord(int i) const;
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * spec_.size + i; }

  std::vector<cplx>& e_l() { return e_l_; }
  std::vector<cplx>& e_r() { return e_r_; }
  const std::vector<cplx>& e_l() const { return e_l_; }
  const std::vector<cplx>& e_r() const { return e_r_; }

  // Sum of |E_L|^2 + |E_R|^2 times the pixel area.
  double total_power() const;

 private:
  GridSpec spec_;
  std::vector<cplx> e_l_;
  std::vector<cplx> e_r_;
};

// LG_{0,m}(r) e^{i m phi}, unit L2 norm over the plane.
cplx lg_mode(int m, double x, double y, double waist);

// Throws DomainError for grids below kMinGridSize or a non-positive extent.
FieldGrid render_mode(const SinglePhotonState& state, const GridSpec& spec);

namespace reference {
FieldGrid render_mode(const SinglePhotonState& state, const GridSpec& spec);
}  // namespace reference

struct StokesMap {
  GridSpec spec;
  std::vector<double> s0, s1, s2, s3;

  // S_k / S0, defined as 0 where S0 vanishes.
  double normalized(int k, std::size_t idx) const;
  // psi = atan2(S2, S1) / 2
  double orientation(std::size_t idx) const;
  // chi_e = asin(S3 / S0) / 2
  double ellipticity(std::size_t idx) const;
};

// S0 = |E_L|^2 + |E_R|^2, S3 = |E_L|^2 - |E_R|^2, S1 + i S2 = 2 E_L conj(E_R).
StokesMap stokes(const FieldGrid& field);

// Net rotation of the polarization orientation, in turns, along a circle of
// `radius` (physical units) around the axis. Orientation is unwrapped mod pi.
double orientation_winding(const StokesMap& map, double radius, int samples = 720);

enum class ExportFormat { CsvGrid, Png };

// Writes intensity, s1, s2, s3 (normalized by S0) and orientation maps into
// `dir`, returning the file paths. CSV grids start with
// `# width height half_extent_w0`, then one comma-separated row per y (row 0 is
// the most negative y). The CSV orientation map holds psi in radians; the PNG
// one is the intensity image overlaid with orientation line segments.
std::vector<std::filesystem::path> export_maps(const StokesMap& map, const std::filesystem::path& dir,
                                               ExportFormat format);

struct CsvGrid {
  int width = 0;
  int height = 0;
  double half_extent = 0.0;
  std::vector<double> values;  // row-major
};

CsvGrid read_csv_grid(const std::filesystem::path& path);

}  // namespace spinorbit
