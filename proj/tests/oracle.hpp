#pragma once

// Dense reference computations used only by the tests. States live in a
// 2 x (2*m_max+1) complex vector (spin-major, L then R); optics are built from
// Jones matrices in the (x, y) basis and rotated into the circular basis, so
// nothing here shares code with the sparse implementation.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "spinorbit/hilbert.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline int dim(int m_max) { return 2 * (2 * m_max + 1); }
inline int idx(int spin, int m, int m_max) { return spin * (2 * m_max + 1) + (m + m_max); }

inline Vec dense(const spinorbit::SinglePhotonState& s, int m_max) {
  Vec v = Vec::Zero(dim(m_max));
  for (const auto& [label, a] : s.amplitudes()) v(idx(label.spin == spinorbit::Spin::L ? 0 : 1, label.oam, m_max)) = a;
  return v;
}

// Circular basis vectors in Jones (x, y) coordinates, chosen so that linear
// polarization at theta is (e^{i theta}|L> + e^{-i theta}|R>)/sqrt2.
inline Eigen::Matrix2cd circular_to_jones() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd u;
  u << cplx(s, 0), cplx(s, 0),  //
      cplx(0, -s), cplx(0, s);
  return u;  // columns: L, R
}

inline Eigen::Matrix2cd to_circular(const Eigen::Matrix2cd& jones) {
  const auto u = circular_to_jones();
  return u.adjoint() * jones * u;
}

inline Eigen::Matrix2cd jones_hwp(double a) {
  Eigen::Matrix2cd m;
  m << std::cos(2 * a), std::sin(2 * a), std::sin(2 * a), -std::cos(2 * a);
  return m;
}

inline Eigen::Matrix2cd jones_polarizer(double a) {
  Eigen::Matrix2cd m;
  const double c = std::cos(a), s = std::sin(a);
  m << c * c, c * s, c * s, s * s;
  return m;
}

// Spin operator tensored with identity on OAM.
inline Mat spin_op(const Eigen::Matrix2cd& s, int m_max) {
  const int n = 2 * m_max + 1;
  Mat out = Mat::Zero(dim(m_max), dim(m_max));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < n; ++k) out(i * n + k, j * n + k) = s(i, j);
  return out;
}

// Linear polarization |theta> in the circular basis via Jones (cos, sin).
inline Eigen::Vector2cd linear_spin(double theta) {
  Eigen::Vector2cd j(std::cos(theta), std::sin(theta));
  return circular_to_jones().adjoint() * j;
}

// |chi>_o = (e^{2i chi}|+2> + e^{-2i chi}|-2>)/sqrt2 as a dense OAM vector.
inline Eigen::VectorXcd oam_orientation(double chi, int m_max) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * m_max + 1);
  v(m_max + 2) = std::polar(1.0 / std::sqrt(2.0), 2 * chi);
  v(m_max - 2) = std::polar(1.0 / std::sqrt(2.0), -2 * chi);
  return v;
}

inline Vec kron(const Eigen::Vector2cd& spin, const Eigen::VectorXcd& oam) {
  Vec out(2 * oam.size());
  out << spin(0) * oam, spin(1) * oam;
  return out;
}

// q-plate (q = 1) as an explicit matrix: |L,m> -> |R,m+2>, |R,m> -> |L,m-2>.
inline Mat qplate_matrix(int m_max) {
  Mat q = Mat::Zero(dim(m_max), dim(m_max));
  for (int m = -m_max; m <= m_max; ++m) {
    if (m + 2 <= m_max) q(idx(1, m + 2, m_max), idx(0, m, m_max)) = 1.0;
    if (m - 2 >= -m_max) q(idx(0, m - 2, m_max), idx(1, m, m_max)) = 1.0;
  }
  return q;
}

// Detection probability |<theta, chi| Q |H,0>|^2 by dense algebra.
inline double single_photon_probability(double theta, double chi, int m_max = 6) {
  Eigen::VectorXcd oam0 = Eigen::VectorXcd::Zero(2 * m_max + 1);
  oam0(m_max) = 1.0;
  const Vec input = kron(linear_spin(0.0), oam0);
  const Vec out = qplate_matrix(m_max) * input;
  const Vec bra = kron(linear_spin(theta), oam_orientation(chi, m_max));
  return std::norm(bra.dot(out));  // dot() conjugates the first argument
}

inline spinorbit::SinglePhotonState random_state(std::mt19937_64& rng, int oam_range, int m_max = 6,
                                                 bool normalized = true) {
  std::normal_distribution<double> g;
  spinorbit::SinglePhotonState::Amplitudes amps;
  for (auto spin : {spinorbit::Spin::L, spinorbit::Spin::R})
    for (int m = -oam_range; m <= oam_range; ++m) amps[{spin, m}] = cplx(g(rng), g(rng));
  spinorbit::SinglePhotonState s(amps, m_max);
  return normalized ? spinorbit::normalize(s) : s;
}

inline spinorbit::TwoPhotonState random_pair(std::mt19937_64& rng, int oam_range, int m_max = 6) {
  std::normal_distribution<double> g;
  spinorbit::TwoPhotonState::Amplitudes amps;
  for (auto sa : {spinorbit::Spin::L, spinorbit::Spin::R})
    for (int ma = -oam_range; ma <= oam_range; ++ma)
      for (auto sb : {spinorbit::Spin::L, spinorbit::Spin::R})
        for (int mb = -oam_range; mb <= oam_range; ++mb) amps[{{sa, ma}, {sb, mb}}] = cplx(g(rng), g(rng));
  return spinorbit::normalize(spinorbit::TwoPhotonState(amps, m_max));
}

}  // namespace oracle
