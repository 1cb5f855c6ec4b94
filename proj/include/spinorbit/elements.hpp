#pragma once

// Linear maps on the single-photon space for the optical components of the
// spin-orbit setups: q-plate, wave plate, polarizer, sector hologram, fiber.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "spinorbit/hilbert.hpp"

namespace spinorbit {

enum class OpKind { Unitary, Projector };

struct Term {
  ModeLabel label;
  cplx amplitude;
};

// Image of one basis ket.
using Column = std::vector<Term>;

class ElementOp {
 public:
  using Action = std::function<Column(const ModeLabel&)>;

  ElementOp(std::string name, OpKind kind, Action action);

  const std::string& name() const { return name_; }
  OpKind kind() const { return kind_; }
  Column column(const ModeLabel& in) const { return action_(in); }

 private:
  std::string name_;
  OpKind kind_;
  Action action_;
};

// Ordered list of elements; the first entry acts first.
using Pipeline = std::vector<ElementOp>;

// Spin-only operator M (rows/cols indexed L=0, R=1) tensored with identity on OAM.
using SpinMatrix = std::array<std::array<cplx, 2>, 2>;
ElementOp spin_operator(std::string name, OpKind kind, const SpinMatrix& m);

// Tuned q-plate of charge q: |L,m> -> |R,m+2q>, |R,m> -> |L,m-2q>.
// `efficiency` scales every amplitude (1 for an ideal plate).
ElementOp qplate(int q, double efficiency = 1.0);

// Half-wave plate with fast axis at `axis_angle` from horizontal:
// |L> -> e^{-2i a}|R>, |R> -> e^{+2i a}|L>, so linear polarization at theta
// leaves at 2a - theta.
ElementOp half_wave_plate(double axis_angle);

// Ideal linear polarizer transmitting polarization at `axis_angle`.
ElementOp polarizer(double axis_angle);

// Projector onto |theta>_pi (x) 1_oam.
ElementOp pol_analyzer(double theta);

// Sector hologram at orientation chi followed by fiber coupling: projects the
// {+2,-2} OAM subspace onto |chi>_o and relabels the result to m = 0. Spin is
// untouched, every other OAM component is annihilated. Not idempotent, since
// its output (m = 0) lies outside its own support.
ElementOp sector_hologram_analyzer(double chi);

// Single-mode fiber: projector onto m = 0.
ElementOp smf_coupler();

// Uniform grating: identity on the modal space.
ElementOp uniform_grating();

// Throws OamOverflow when an output label exceeds the state's m_max.
SinglePhotonState apply(const ElementOp& op, const SinglePhotonState& state);
// Pipeline versions are named separately so calls with a temporary vector
// never resolve to std::apply through argument-dependent lookup.
SinglePhotonState propagate(const Pipeline& ops, const SinglePhotonState& state);

TwoPhotonState apply_arm(const ElementOp& op, const TwoPhotonState& pair, Arm arm);
TwoPhotonState propagate_arm(const Pipeline& ops, const TwoPhotonState& pair, Arm arm);

}  // namespace spinorbit
