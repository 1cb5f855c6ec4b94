#include "spinorbit/fieldmap.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include "spinorbit/errors.hpp"
#include "spinorbit/numfmt.hpp"

namespace spinorbit {

namespace fs = std::filesystem;
using std::numbers::pi;

FieldGrid::FieldGrid(GridSpec spec) : spec_(spec) {
  if (spec.size < kMinGridSize) {
    throw DomainError("grid of " + std::to_string(spec.size) + " px is too coarse (minimum " +
                      std::to_string(kMinGridSize) + ")");
  }
  if (!(spec.half_extent > 0.0) || !(spec.waist > 0.0)) throw DomainError("grid extent and waist must be positive");
  const auto n = static_cast<std::size_t>(spec.size) * spec.size;
  e_l_.assign(n, cplx{});
  e_r_.assign(n, cplx{});
}

double FieldGrid::step() const { return 2.0 * spec_.half_extent * spec_.waist / spec_.size; }

double FieldGrid::coord(int i) const { return (i - spec_.size / 2) * step(); }

double FieldGrid::total_power() const {
  double s = 0.0;
  for (std::size_t k = 0; k < e_l_.size(); ++k) s += std::norm(e_l_[k]) + std::norm(e_r_[k]);
  return s * step() * step();
}

cplx lg_mode(int m, double x, double y, double waist) {
  const int am = std::abs(m);
  const double norm = std::sqrt(2.0 / (pi * std::tgamma(am + 1.0))) / waist;
  const double scale = std::sqrt(2.0) / waist;
  // (r sqrt2/w0)^|m| e^{i m phi} = (sqrt2/w0)^|m| (x +- i y)^|m|
  const cplx z(x * scale, (m >= 0 ? y : -y) * scale);
  cplx zp(1.0, 0.0);
  for (int k = 0; k < am; ++k) zp *= z;
  return norm * zp * std::exp(-(x * x + y * y) / (waist * waist));
}

namespace {

struct ModeTerm {
  Spin spin;
  int oam;
  cplx amplitude;
};

std::vector<ModeTerm> terms_of(const SinglePhotonState& state) {
  std::vector<ModeTerm> out;
  for (const auto& [label, a] : state.amplitudes()) out.push_back({label.spin, label.oam, a});
  return out;
}

void render_row(FieldGrid& grid, const std::vector<ModeTerm>& terms, int j) {
  const double y = grid.coord(j);
  const double w0 = grid.spec().waist;
  for (int i = 0; i < grid.size(); ++i) {
    const double x = grid.coord(i);
    cplx el{}, er{};
    for (const auto& t : terms) {
      const cplx v = t.amplitude * lg_mode(t.oam, x, y, w0);
      (t.spin == Spin::L ? el : er) += v;
    }
    grid.e_l()[grid.index(i, j)] = el;
    grid.e_r()[grid.index(i, j)] = er;
  }
}

}  // namespace

FieldGrid render_mode(const SinglePhotonState& state, const GridSpec& spec) {
  FieldGrid grid(spec);
  const auto terms = terms_of(state);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < grid.size(); ++j) render_row(grid, terms, j);
  return grid;
}

namespace reference {

FieldGrid render_mode(const SinglePhotonState& state, const GridSpec& spec) {
  FieldGrid grid(spec);
  const auto terms = terms_of(state);
  for (int j = 0; j < grid.size(); ++j) render_row(grid, terms, j);
  return grid;
}

}  // namespace reference

// ---------------------------------------------------------------------------

double StokesMap::normalized(int k, std::size_t idx) const {
  if (s0[idx] == 0.0) return 0.0;
  switch (k) {
    case 1: return s1[idx] / s0[idx];
    case 2: return s2[idx] / s0[idx];
    case 3: return s3[idx] / s0[idx];
    default: return 1.0;
  }
}

double StokesMap::orientation(std::size_t idx) const { return 0.5 * std::atan2(s2[idx], s1[idx]); }

double StokesMap::ellipticity(std::size_t idx) const {
  return 0.5 * std::asin(std::clamp(normalized(3, idx), -1.0, 1.0));
}

StokesMap stokes(const FieldGrid& field) {
  StokesMap m;
  m.spec = field.spec();
  const std::size_t n = field.e_l().size();
  m.s0.resize(n);
  m.s1.resize(n);
  m.s2.resize(n);
  m.s3.resize(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const cplx el = field.e_l()[idx];
    const cplx er = field.e_r()[idx];
    const cplx cross = 2.0 * el * std::conj(er);
    m.s0[idx] = std::norm(el) + std::norm(er);
    m.s3[idx] = std::norm(el) - std::norm(er);
    m.s1[idx] = cross.real();
    m.s2[idx] = cross.imag();
  }
  return m;
}

namespace {

double bilinear(const std::vector<double>& values, const GridSpec& spec, double x, double y) {
  const double step = 2.0 * spec.half_extent * spec.waist / spec.size;
  const double fi = x / step + spec.size / 2;
  const double fj = y / step + spec.size / 2;
  const int i0 = std::clamp(static_cast<int>(std::floor(fi)), 0, spec.size - 2);
  const int j0 = std::clamp(static_cast<int>(std::floor(fj)), 0, spec.size - 2);
  const double tx = fi - i0, ty = fj - j0;
  auto at = [&](int i, int j) { return values[static_cast<std::size_t>(j) * spec.size + i]; };
  return (1 - tx) * (1 - ty) * at(i0, j0) + tx * (1 - ty) * at(i0 + 1, j0) + (1 - tx) * ty * at(i0, j0 + 1) +
         tx * ty * at(i0 + 1, j0 + 1);
}

}  // namespace

double orientation_winding(const StokesMap& map, double radius, int samples) {
  double total = 0.0;
  double prev = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double phi = 2.0 * pi * k / samples;
    const double x = radius * std::cos(phi), y = radius * std::sin(phi);
    const double psi = 0.5 * std::atan2(bilinear(map.s2, map.spec, x, y), bilinear(map.s1, map.spec, x, y));
    if (k > 0) total += std::remainder(psi - prev, pi);
    prev = psi;
  }
  return total / (2.0 * pi);
}

// ---------------------------------------------------------------------------

namespace {

void write_csv(const fs::path& path, const GridSpec& spec, const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << "# " << spec.size << ' ' << spec.size << ' ' << format_double(spec.half_extent) << '\n';
  std::string row;
  for (int j = 0; j < spec.size; ++j) {
    row.clear();
    for (int i = 0; i < spec.size; ++i) {
      if (i) row += ',';
      row += format_double(values[static_cast<std::size_t>(j) * spec.size + i]);
    }
    row += '\n';
    out << row;
  }
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

using Rgb = std::array<unsigned char, 3>;

struct Image {
  int width;
  int height;
  std::vector<Rgb> pixels;  // top row first
  Rgb& at(int i, int row) { return pixels[static_cast<std::size_t>(row) * width + i]; }
};

// Image row 0 is the largest y so +y points up.
Image make_image(const GridSpec& spec, const std::vector<double>& values, auto colormap) {
  Image img{spec.size, spec.size, std::vector<Rgb>(values.size())};
  for (int j = 0; j < spec.size; ++j)
    for (int i = 0; i < spec.size; ++i) img.at(i, spec.size - 1 - j) = colormap(values[static_cast<std::size_t>(j) * spec.size + i]);
  return img;
}

unsigned char to_byte(double v) { return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

Rgb grayscale(double v) {
  const auto g = to_byte(v);
  return {g, g, g};
}

// Blue (-1) through white (0) to red (+1).
Rgb diverging(double v) {
  v = std::clamp(v, -1.0, 1.0);
  if (v < 0) return {to_byte(1 + v), to_byte(1 + v), 255};
  return {255, to_byte(1 - v), to_byte(1 - v)};
}

void write_png(const fs::path& path, const Image& img) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
  if (!fp) throw DataError("cannot open '" + path.string() + "' for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw DataError("libpng initialisation failed for '" + path.string() + "'");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("libpng failed writing '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int row = 0; row < img.height; ++row) {
    auto* ptr = const_cast<png_bytep>(reinterpret_cast<const unsigned char*>(&img.pixels[static_cast<std::size_t>(row) * img.width]));
    png_write_row(png, ptr);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// Grayscale intensity with red orientation segments on a sparse lattice.
Image orientation_overlay(const StokesMap& map, const std::vector<double>& intensity) {
  const GridSpec& spec = map.spec;
  Image img = make_image(spec, intensity, grayscale);
  const int spacing = std::max(8, spec.size / 16);
  const double half_len = 0.4 * spacing;
  for (int j = spacing / 2; j < spec.size; j += spacing) {
    for (int i = spacing / 2; i < spec.size; i += spacing) {
      const auto idx = static_cast<std::size_t>(j) * spec.size + i;
      if (intensity[idx] < 0.05) continue;
      const double psi = map.orientation(idx);
      const int steps = static_cast<int>(2 * half_len) + 1;
      for (int s = 0; s <= steps; ++s) {
        const double t = -half_len + 2 * half_len * s / steps;
        const int pi_ = static_cast<int>(std::lround(i + t * std::cos(psi)));
        const int pj = static_cast<int>(std::lround(j + t * std::sin(psi)));
        if (pi_ < 0 || pj < 0 || pi_ >= spec.size || pj >= spec.size) continue;
        img.at(pi_, spec.size - 1 - pj) = {220, 30, 30};
      }
    }
  }
  return img;
}

}  // namespace

std::vector<fs::path> export_maps(const StokesMap& map, const fs::path& dir, ExportFormat format) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory '" + dir.string() + "': " + ec.message());

  const std::size_t n = map.s0.size();
  const double peak = n ? *std::max_element(map.s0.begin(), map.s0.end()) : 0.0;
  std::vector<double> intensity(n), psi(n);
  std::array<std::vector<double>, 3> reduced{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    intensity[k] = peak > 0 ? map.s0[k] / peak : 0.0;
    psi[k] = map.orientation(k);
    for (int c = 0; c < 3; ++c) reduced[c][k] = map.normalized(c + 1, k);
  }

  std::vector<fs::path> written;
  const char* names[] = {"s1", "s2", "s3"};
  if (format == ExportFormat::CsvGrid) {
    written.push_back(dir / "intensity.csv");
    write_csv(written.back(), map.spec, intensity);
    for (int c = 0; c < 3; ++c) {
      written.push_back(dir / (std::string(names[c]) + ".csv"));
      write_csv(written.back(), map.spec, reduced[c]);
    }
    written.push_back(dir / "orientation.csv");
    write_csv(written.back(), map.spec, psi);
  } else {
    written.push_back(dir / "intensity.png");
    write_png(written.back(), make_image(map.spec, intensity, grayscale));
    for (int c = 0; c < 3; ++c) {
      written.push_back(dir / (std::string(names[c]) + ".png"));
      write_png(written.back(), make_image(map.spec, reduced[c], diverging));
    }
    written.push_back(dir / "orientation.png");
    write_png(written.back(), orientation_overlay(map, intensity));
  }
  return written;
}

CsvGrid read_csv_grid(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  CsvGrid grid;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw DataError("'" + path.string() + "': missing '# width height half_extent_w0' header");
  }
  std::istringstream header(line.substr(2));
  std::string extent;
  if (!(header >> grid.width >> grid.height >> extent) || grid.width <= 0 || grid.height <= 0) {
    throw DataError("'" + path.string() + "': malformed grid header");
  }
  grid.half_extent = parse_double(extent, "half_extent");
  grid.values.reserve(static_cast<std::size_t>(grid.width) * grid.height);
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t start = 0;
    int cols = 0;
    while (true) {
      const auto comma = line.find(',', start);
      grid.values.push_back(parse_double(std::string_view(line).substr(start, comma - start), "grid value"));
      ++cols;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols != grid.width) {
      throw DataError("'" + path.string() + "': row " + std::to_string(rows + 1) + " has " + std::to_string(cols) +
                      " values, expected " + std::to_string(grid.width));
    }
    ++rows;
  }
  if (rows != grid.height) {
    throw DataError("'" + path.string() + "': " + std::to_string(rows) + " rows, expected " + std::to_string(grid.height));
  }
  return grid;
}

}  // namespace spinorbit
