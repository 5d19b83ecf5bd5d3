#include "qbs/apparatus.hpp"

#include <cmath>

namespace qbs {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr Amplitude kI{0.0, 1.0};

}  // namespace

PathState first_stage(double phi, Blocking blocking) {
  const Amplitude a1 = kInvSqrt2;
  const Amplitude a2 = kInvSqrt2 * std::polar(1.0, phi);
  switch (blocking) {
    case Blocking::BlockPath1:
      return {0.0, a2};
    case Blocking::BlockPath2:
      return {a1, 0.0};
    case Blocking::None:
      break;
  }
  return {a1, a2};
}

Unitary2 bs_matrix(double delta1, double delta2) {
  const Amplitude e1 = kInvSqrt2 * std::polar(1.0, delta1);
  const Amplitude e2 = kInvSqrt2 * std::polar(1.0, delta2);
  return Unitary2({e1, e1, e2, -e2});
}

JointState evolve(const ApparatusParams& params) {
  const auto& d = params.device;
  const JointState attached =
      tensor(first_stage(params.phi, params.blocking), std::sin(d.alpha), std::cos(d.alpha));
  return apply_on_path_sector(attached, bs_matrix(d.delta1, d.delta2), Ancilla::P);
}

std::array<Amplitude, 2> outcome_vector(double beta, AncillaOutcome outcome) {
  const double s = std::sin(beta);
  const double c = std::cos(beta);
  if (outcome == AncillaOutcome::B) return {s, c};
  return {c, -s};
}

double RunResult::detected() const {
  double total = 0.0;
  for (const auto& o : outcomes) total += o.joint.p1 + o.joint.p2;
  return total;
}

RunResult run(const ApparatusParams& params) {
  const JointState psi = evolve(params);
  RunResult result;
  for (AncillaOutcome o : kOutcomes) {
    const auto b = outcome_vector(params.device.beta, o);
    const Projection proj = project_ancilla(psi, b[0], b[1]);
    auto& r = result.outcomes[static_cast<std::size_t>(o)];
    r.path = proj.path;
    r.success_prob = proj.success_prob;
    r.joint = {std::norm(proj.path.amp1), std::norm(proj.path.amp2)};
    r.defined = proj.success_prob >= kMinSuccessProb;
    if (r.defined) {
      r.conditional = {r.joint.p1 / proj.success_prob, r.joint.p2 / proj.success_prob};
    }
  }
  return result;
}

PathState particle_state(double phi) {
  return {kInvSqrt2, kInvSqrt2 * std::polar(1.0, phi)};
}

PathState wave_state(double phi, double delta1, double delta2) {
  const Amplitude global = std::polar(1.0, phi / 2);
  return {global * std::cos(phi / 2) * std::polar(1.0, delta1),
          global * (-kI) * std::sin(phi / 2) * std::polar(1.0, delta2)};
}

}  // namespace qbs
