#include "spinorbit/hilbert.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "spinorbit/errors.hpp"
#include "spinorbit/numfmt.hpp"

namespace spinorbit {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void check_range(int oam, int m_max) {
  if (std::abs(oam) > m_max) throw OamOverflow(oam, m_max);
}

template <typename Map>
void prune(Map& amps) {
  std::erase_if(amps, [](const auto& kv) { return std::abs(kv.second) < kDropTolerance; });
}

template <typename Map>
double sum_sq(const Map& amps) {
  double s = 0.0;
  for (const auto& [k, a] : amps) s += std::norm(a);
  return s;
}

template <typename Map>
cplx leading_phase(const Map& amps) {
  if (amps.empty()) return 1.0;
  const cplx a = amps.begin()->second;
  return std::conj(a) / std::abs(a);
}

}  // namespace

char spin_char(Spin s) { return s == Spin::L ? 'L' : 'R'; }
Spin flip(Spin s) { return s == Spin::L ? Spin::R : Spin::L; }

// ---------------------------------------------------------------------------
// SinglePhotonState

SinglePhotonState::SinglePhotonState(int m_max) : m_max_(m_max) {
  if (m_max < 2) throw DomainError("m_max must be at least 2, got " + std::to_string(m_max));
}

SinglePhotonState::SinglePhotonState(Amplitudes amplitudes, int m_max) : amps_(std::move(amplitudes)), m_max_(m_max) {
  if (m_max < 2) throw DomainError("m_max must be at least 2, got " + std::to_string(m_max));
  prune(amps_);
  for (const auto& [label, a] : amps_) check_range(label.oam, m_max_);
}

SinglePhotonState::SinglePhotonState(std::initializer_list<std::pair<const ModeLabel, cplx>> amplitudes, int m_max)
    : SinglePhotonState(Amplitudes(amplitudes), m_max) {}

SinglePhotonState SinglePhotonState::basis(Spin spin, int oam, int m_max) {
  return SinglePhotonState({{ModeLabel{spin, oam}, 1.0}}, m_max);
}

SinglePhotonState SinglePhotonState::linear(double theta, int oam, int m_max) {
  const cplx l = std::polar(kInvSqrt2, theta);
  const cplx r = std::polar(kInvSqrt2, -theta);
  return SinglePhotonState({{ModeLabel{Spin::L, oam}, l}, {ModeLabel{Spin::R, oam}, r}}, m_max).canonical_phase();
}

SinglePhotonState SinglePhotonState::horizontal(int oam, int m_max) { return linear(0.0, oam, m_max); }

SinglePhotonState SinglePhotonState::vertical(int oam, int m_max) { return linear(std::numbers::pi / 2, oam, m_max); }

SinglePhotonState SinglePhotonState::oam_orientation(double chi, Spin spin, int m_max) {
  return SinglePhotonState(
             {{ModeLabel{spin, 2}, std::polar(kInvSqrt2, 2 * chi)}, {ModeLabel{spin, -2}, std::polar(kInvSqrt2, -2 * chi)}},
             m_max)
      .canonical_phase();
}

cplx SinglePhotonState::amplitude(const ModeLabel& label) const {
  auto it = amps_.find(label);
  return it == amps_.end() ? cplx{} : it->second;
}

double SinglePhotonState::norm_squared() const { return sum_sq(amps_); }

SinglePhotonState SinglePhotonState::canonical_phase() const { return scaled(leading_phase(amps_)); }

SinglePhotonState SinglePhotonState::scaled(cplx factor) const {
  Amplitudes out;
  for (const auto& [label, a] : amps_) out.emplace(label, a * factor);
  return SinglePhotonState(std::move(out), m_max_);
}

SinglePhotonState SinglePhotonState::with_max_oam(int m_max) const { return SinglePhotonState(amps_, m_max); }

SinglePhotonState operator+(const SinglePhotonState& a, const SinglePhotonState& b) {
  SinglePhotonState::Amplitudes out = a.amps_;
  for (const auto& [label, amp] : b.amps_) out[label] += amp;
  return SinglePhotonState(std::move(out), std::max(a.m_max_, b.m_max_));
}

// ---------------------------------------------------------------------------
// TwoPhotonState

TwoPhotonState::TwoPhotonState(int m_max) : m_max_(m_max) {
  if (m_max < 2) throw DomainError("m_max must be at least 2, got " + std::to_string(m_max));
}

TwoPhotonState::TwoPhotonState(Amplitudes amplitudes, int m_max) : amps_(std::move(amplitudes)), m_max_(m_max) {
  if (m_max < 2) throw DomainError("m_max must be at least 2, got " + std::to_string(m_max));
  prune(amps_);
  for (const auto& [key, a] : amps_) {
    check_range(key.first.oam, m_max_);
    check_range(key.second.oam, m_max_);
  }
}

cplx TwoPhotonState::amplitude(const ModeLabel& a, const ModeLabel& b) const {
  auto it = amps_.find({a, b});
  return it == amps_.end() ? cplx{} : it->second;
}

double TwoPhotonState::norm_squared() const { return sum_sq(amps_); }

TwoPhotonState TwoPhotonState::canonical_phase() const { return scaled(leading_phase(amps_)); }

TwoPhotonState TwoPhotonState::scaled(cplx factor) const {
  Amplitudes out;
  for (const auto& [key, a] : amps_) out.emplace(key, a * factor);
  return TwoPhotonState(std::move(out), m_max_);
}

TwoPhotonState operator+(const TwoPhotonState& a, const TwoPhotonState& b) {
  TwoPhotonState::Amplitudes out = a.amps_;
  for (const auto& [key, amp] : b.amps_) out[key] += amp;
  return TwoPhotonState(std::move(out), std::max(a.m_max_, b.m_max_));
}

// ---------------------------------------------------------------------------
// Operations

SinglePhotonState normalize(const SinglePhotonState& state) {
  const double n2 = state.norm_squared();
  if (n2 <= kZeroNormTolerance) throw ZeroNorm("cannot normalize single-photon state");
  return state.scaled(1.0 / std::sqrt(n2));
}

TwoPhotonState normalize(const TwoPhotonState& state) {
  const double n2 = state.norm_squared();
  if (n2 <= kZeroNormTolerance) throw ZeroNorm("cannot normalize two-photon state");
  return state.scaled(1.0 / std::sqrt(n2));
}

cplx inner_product(const SinglePhotonState& a, const SinglePhotonState& b) {
  cplx s{};
  for (const auto& [label, amp] : a.amplitudes()) s += std::conj(amp) * b.amplitude(label);
  return s;
}

cplx inner_product(const TwoPhotonState& a, const TwoPhotonState& b) {
  cplx s{};
  for (const auto& [key, amp] : a.amplitudes()) s += std::conj(amp) * b.amplitude(key.first, key.second);
  return s;
}

TwoPhotonState tensor(const SinglePhotonState& a, const SinglePhotonState& b) {
  TwoPhotonState::Amplitudes out;
  for (const auto& [la, x] : a.amplitudes())
    for (const auto& [lb, y] : b.amplitudes()) out.emplace(TwoPhotonState::Key{la, lb}, x * y);
  return TwoPhotonState(std::move(out), std::max(a.m_max(), b.m_max()));
}

Projection project_arm(const TwoPhotonState& pair, Arm arm, const SinglePhotonState& bra) {
  SinglePhotonState::Amplitudes out;
  for (const auto& [key, amp] : pair.amplitudes()) {
    const auto& [la, lb] = key;
    if (arm == Arm::A) {
      out[lb] += std::conj(bra.amplitude(la)) * amp;
    } else {
      out[la] += std::conj(bra.amplitude(lb)) * amp;
    }
  }
  SinglePhotonState rest(std::move(out), pair.m_max());
  const double p = rest.norm_squared();
  if (p < kZeroNormTolerance) throw ZeroNorm("projection onto an orthogonal bra");
  return {std::move(rest), p};
}

double fidelity(const SinglePhotonState& a, const SinglePhotonState& b) { return std::norm(inner_product(a, b)); }

double fidelity(const TwoPhotonState& a, const TwoPhotonState& b) { return std::norm(inner_product(a, b)); }

std::string to_text(const SinglePhotonState& state) {
  std::string out;
  for (const auto& [label, a] : state.amplitudes()) {
    out += spin_char(label.spin);
    out += ' ' + std::to_string(label.oam) + ' ' + format_double(a.real()) + ' ' + format_double(a.imag()) + '\n';
  }
  return out;
}

std::string to_text(const TwoPhotonState& state) {
  std::string out;
  for (const auto& [key, a] : state.amplitudes()) {
    out += spin_char(key.first.spin);
    out += ' ' + std::to_string(key.first.oam) + ' ';
    out += spin_char(key.second.spin);
    out += ' ' + std::to_string(key.second.oam) + ' ' + format_double(a.real()) + ' ' + format_double(a.imag()) + '\n';
  }
  return out;
}

SinglePhotonState single_from_text(const std::string& text, int m_max) {
  SinglePhotonState::Amplitudes amps;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string spin, oam, re, im;
    if (!(fields >> spin >> oam >> re >> im) || (spin != "L" && spin != "R")) {
      throw DataError("state text line " + std::to_string(lineno) + ": expected '<L|R> <oam> <re> <im>'");
    }
    int m = 0;
    auto [end, ec] = std::from_chars(oam.data(), oam.data() + oam.size(), m);
    if (ec != std::errc{} || end != oam.data() + oam.size()) {
      throw DataError("state text line " + std::to_string(lineno) + ": bad OAM value '" + oam + "'");
    }
    amps[ModeLabel{spin == "L" ? Spin::L : Spin::R, m}] += cplx(parse_double(re), parse_double(im));
  }
  return SinglePhotonState(std::move(amps), m_max);
}

}  // namespace spinorbit
