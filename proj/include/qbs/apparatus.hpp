#pragma once

#include <array>
#include <numbers>

#include "qbs/qcore.hpp"

namespace qbs {

enum class Blocking { None, BlockPath1, BlockPath2 };

/// Outcome of the ancilla measurement in the basis
/// |b> = sin(beta)|a> + cos(beta)|p>,  |b_perp> = cos(beta)|a> - sin(beta)|p>.
enum class AncillaOutcome { B = 0, BPerp = 1 };

inline constexpr std::array<AncillaOutcome, 2> kOutcomes{AncillaOutcome::B, AncillaOutcome::BPerp};

/// Everything about the bench except the interferometer phase and the blocker.
struct DeviceSettings {
  double alpha = std::numbers::pi / 4;  ///< q-BS preparation: sin(alpha)|a> + cos(alpha)|p>
  double beta = 0.0;                    ///< detection basis angle
  double delta1 = 0.0;                  ///< output phase on path 1 of the closed MZI
  double delta2 = 0.0;                  ///< output phase on path 2 of the closed MZI
};

struct ApparatusParams {
  DeviceSettings device;
  double phi = 0.0;
  Blocking blocking = Blocking::None;
};

inline ApparatusParams with_phase(const DeviceSettings& d, double phi,
                                  Blocking blocking = Blocking::None) {
  return {d, phi, blocking};
}

/// Path state after the first balanced splitter, the optional blocker and the phase.
PathState first_stage(double phi, Blocking blocking);

/// Balanced splitter with output phases; maps |particle> onto |wave> exactly.
Unitary2 bs_matrix(double delta1, double delta2);

/// Joint photon/q-BS state just before the ancilla is measured.
JointState evolve(const ApparatusParams& params);

/// Ancilla coefficients (on |a>, |p>) of the requested outcome vector.
std::array<Amplitude, 2> outcome_vector(double beta, AncillaOutcome outcome);

/// Conditional probabilities below this success probability are reported as 0.
inline constexpr double kMinSuccessProb = 1e-15;

struct OutcomeResult {
  PathState path;             ///< unnormalized, post-selected
  double success_prob = 0.0;  ///< probability of this ancilla outcome per emitted photon
  DetectorProbs conditional;  ///< zero when the outcome is (numerically) impossible
  DetectorProbs joint;        ///< p(detector j and outcome) per emitted photon
  bool defined = false;       ///< success_prob >= kMinSuccessProb
};

struct RunResult {
  std::array<OutcomeResult, 2> outcomes;

  [[nodiscard]] const OutcomeResult& operator[](AncillaOutcome o) const& {
    return outcomes[static_cast<std::size_t>(o)];
  }
  [[nodiscard]] OutcomeResult operator[](AncillaOutcome o) && {
    return outcomes[static_cast<std::size_t>(o)];
  }
  /// Sum of all joint probabilities; 1 - loss at the blocker.
  [[nodiscard]] double detected() const;
};

RunResult run(const ApparatusParams& params);

/// (|1> + e^{i phi}|2>)/sqrt(2).
PathState particle_state(double phi);

/// e^{i phi/2} (cos(phi/2) e^{i delta1}|1> - i sin(phi/2) e^{i delta2}|2>).
PathState wave_state(double phi, double delta1, double delta2);

}  // namespace qbs
