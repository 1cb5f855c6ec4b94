#include "spinorbit/elements.hpp"

#include <cmath>
#include <utility>

#include "spinorbit/errors.hpp"

namespace spinorbit {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

constexpr int index_of(Spin s) { return s == Spin::L ? 0 : 1; }
constexpr Spin spin_of(int i) { return i == 0 ? Spin::L : Spin::R; }

// Rank-1 spin projector onto linear polarization at angle a.
SpinMatrix linear_projector(double a) {
  const std::array<cplx, 2> v{std::polar(kInvSqrt2, a), std::polar(kInvSqrt2, -a)};
  SpinMatrix m{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m[i][j] = v[i] * std::conj(v[j]);
  return m;
}

}  // namespace

ElementOp::ElementOp(std::string name, OpKind kind, Action action)
    : name_(std::move(name)), kind_(kind), action_(std::move(action)) {}

ElementOp spin_operator(std::string name, OpKind kind, const SpinMatrix& m) {
  return ElementOp(std::move(name), kind, [m](const ModeLabel& in) {
    Column col;
    const int j = index_of(in.spin);
    for (int i = 0; i < 2; ++i) {
      if (m[i][j] != cplx{}) col.push_back({ModeLabel{spin_of(i), in.oam}, m[i][j]});
    }
    return col;
  });
}

ElementOp qplate(int q, double efficiency) {
  if (q <= 0) throw DomainError("q-plate charge must be positive, got " + std::to_string(q));
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw DomainError("q-plate efficiency must lie in [0,1]");
  return ElementOp("qplate(q=" + std::to_string(q) + ")", OpKind::Unitary, [q, efficiency](const ModeLabel& in) {
    const int shift = in.spin == Spin::L ? 2 * q : -2 * q;
    return Column{{ModeLabel{flip(in.spin), in.oam + shift}, cplx(efficiency)}};
  });
}

ElementOp half_wave_plate(double axis_angle) {
  SpinMatrix m{};
  m[index_of(Spin::R)][index_of(Spin::L)] = std::polar(1.0, -2 * axis_angle);
  m[index_of(Spin::L)][index_of(Spin::R)] = std::polar(1.0, 2 * axis_angle);
  return spin_operator("hwp", OpKind::Unitary, m);
}

ElementOp polarizer(double axis_angle) { return spin_operator("polarizer", OpKind::Projector, linear_projector(axis_angle)); }

ElementOp pol_analyzer(double theta) { return spin_operator("pol_analyzer", OpKind::Projector, linear_projector(theta)); }

ElementOp sector_hologram_analyzer(double chi) {
  // <chi|+2> = e^{-2i chi}/sqrt2, <chi|-2> = e^{+2i chi}/sqrt2
  const cplx plus = std::polar(kInvSqrt2, -2 * chi);
  const cplx minus = std::polar(kInvSqrt2, 2 * chi);
  return ElementOp("sector_hologram", OpKind::Projector, [plus, minus](const ModeLabel& in) {
    if (in.oam == 2) return Column{{ModeLabel{in.spin, 0}, plus}};
    if (in.oam == -2) return Column{{ModeLabel{in.spin, 0}, minus}};
    return Column{};
  });
}

ElementOp smf_coupler() {
  return ElementOp("smf", OpKind::Projector, [](const ModeLabel& in) {
    return in.oam == 0 ? Column{{in, cplx(1.0)}} : Column{};
  });
}

ElementOp uniform_grating() {
  return ElementOp("grating", OpKind::Unitary, [](const ModeLabel& in) { return Column{{in, cplx(1.0)}}; });
}

SinglePhotonState apply(const ElementOp& op, const SinglePhotonState& state) {
  SinglePhotonState::Amplitudes out;
  for (const auto& [label, a] : state.amplitudes()) {
    for (const auto& [to, coeff] : op.column(label)) {
      if (std::abs(to.oam) > state.m_max()) throw OamOverflow(to.oam, state.m_max());
      out[to] += coeff * a;
    }
  }
  return SinglePhotonState(std::move(out), state.m_max());
}

SinglePhotonState propagate(const Pipeline& ops, const SinglePhotonState& state) {
  SinglePhotonState s = state;
  for (const auto& op : ops) s = apply(op, s);
  return s;
}

TwoPhotonState apply_arm(const ElementOp& op, const TwoPhotonState& pair, Arm arm) {
  TwoPhotonState::Amplitudes out;
  for (const auto& [key, a] : pair.amplitudes()) {
    const ModeLabel& acted = arm == Arm::A ? key.first : key.second;
    for (const auto& [to, coeff] : op.column(acted)) {
      if (std::abs(to.oam) > pair.m_max()) throw OamOverflow(to.oam, pair.m_max());
      const auto new_key = arm == Arm::A ? TwoPhotonState::Key{to, key.second} : TwoPhotonState::Key{key.first, to};
      out[new_key] += coeff * a;
    }
  }
  return TwoPhotonState(std::move(out), pair.m_max());
}

TwoPhotonState propagate_arm(const Pipeline& ops, const TwoPhotonState& pair, Arm arm) {
  TwoPhotonState s = pair;
  for (const auto& op : ops) s = apply_arm(op, s, arm);
  return s;
}

}  // namespace spinorbit
