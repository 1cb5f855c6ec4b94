#pragma once

// Sparse state algebra for photons in spin (circular basis) x truncated OAM.

#include <complex>
#include <compare>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>

namespace spinorbit {

using cplx = std::complex<double>;

enum class Spin { L, R };

char spin_char(Spin s);
Spin flip(Spin s);

inline constexpr int kDefaultMaxOam = 6;
inline constexpr double kDropTolerance = 1e-15;
inline constexpr double kZeroNormTolerance = 1e-30;

struct ModeLabel {
  Spin spin;
  int oam;
  auto operator<=>(const ModeLabel&) const = default;
};

enum class Arm { A, B };

class SinglePhotonState {
 public:
  using Amplitudes = std::map<ModeLabel, cplx>;

  explicit SinglePhotonState(int m_max = kDefaultMaxOam);
  SinglePhotonState(Amplitudes amplitudes, int m_max = kDefaultMaxOam);
  SinglePhotonState(std::initializer_list<std::pair<const ModeLabel, cplx>> amplitudes,
                    int m_max = kDefaultMaxOam);

  // |spin, m>
  static SinglePhotonState basis(Spin spin, int oam, int m_max = kDefaultMaxOam);
  // Linear polarization at angle theta from horizontal:
  // (e^{i theta}|L> + e^{-i theta}|R>)/sqrt2, with |H> = (|L> + |R>)/sqrt2.
  static SinglePhotonState linear(double theta, int oam, int m_max = kDefaultMaxOam);
  static SinglePhotonState horizontal(int oam, int m_max = kDefaultMaxOam);
  static SinglePhotonState vertical(int oam, int m_max = kDefaultMaxOam);
  // OAM "orientation" superposition (e^{2i chi}|+2> + e^{-2i chi}|-2>)/sqrt2 with a fixed spin.
  static SinglePhotonState oam_orientation(double chi, Spin spin, int m_max = kDefaultMaxOam);

  const Amplitudes& amplitudes() const { return amps_; }
  int m_max() const { return m_max_; }
  bool empty() const { return amps_.empty(); }
  cplx amplitude(const ModeLabel& label) const;
  double norm_squared() const;

  // Same state with the first nonzero amplitude (in label order) made real positive.
  SinglePhotonState canonical_phase() const;
  SinglePhotonState scaled(cplx factor) const;
  SinglePhotonState with_max_oam(int m_max) const;

  friend SinglePhotonState operator+(const SinglePhotonState& a, const SinglePhotonState& b);

 private:
  Amplitudes amps_;
  int m_max_;
};

class TwoPhotonState {
 public:
  using Key = std::pair<ModeLabel, ModeLabel>;
  using Amplitudes = std::map<Key, cplx>;

  explicit TwoPhotonState(int m_max = kDefaultMaxOam);
  TwoPhotonState(Amplitudes amplitudes, int m_max = kDefaultMaxOam);

  const Amplitudes& amplitudes() const { return amps_; }
  int m_max() const { return m_max_; }
  bool empty() const { return amps_.empty(); }
  cplx amplitude(const ModeLabel& a, const ModeLabel& b) const;
  double norm_squared() const;

  TwoPhotonState canonical_phase() const;
  TwoPhotonState scaled(cplx factor) const;

  friend TwoPhotonState operator+(const TwoPhotonState& a, const TwoPhotonState& b);

 private:
  Amplitudes amps_;
  int m_max_;
};

SinglePhotonState normalize(const SinglePhotonState& state);
TwoPhotonState normalize(const TwoPhotonState& state);

// <a|b>, conjugate-linear in a.
cplx inner_product(const SinglePhotonState& a, const SinglePhotonState& b);
cplx inner_product(const TwoPhotonState& a, const TwoPhotonState& b);

TwoPhotonState tensor(const SinglePhotonState& a, const SinglePhotonState& b);

struct Projection {
  SinglePhotonState state;  // unnormalized conditional state of the other arm
  double probability;
};

// Contracts one arm with <bra|. Throws ZeroNorm when the result vanishes.
Projection project_arm(const TwoPhotonState& pair, Arm arm, const SinglePhotonState& bra);

double fidelity(const SinglePhotonState& a, const SinglePhotonState& b);
double fidelity(const TwoPhotonState& a, const TwoPhotonState& b);

// Canonical text form: one line per amplitude, sorted by label.
//   single: "<spin> <oam> <re> <im>"
//   pair:   "<spinA> <oamA> <spinB> <oamB> <re> <im>"
std::string to_text(const SinglePhotonState& state);
std::string to_text(const TwoPhotonState& state);
SinglePhotonState single_from_text(const std::string& text, int m_max = kDefaultMaxOam);

}  // namespace spinorbit
