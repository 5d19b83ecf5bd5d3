#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qbs/apparatus.hpp"

namespace qbs {

struct ScanPoint {
  double phi = 0.0;
  double p2_cond = 0.0;
  double p1_cond = 0.0;
  double success_prob = 0.0;
};

/// Conditional detection probabilities for one ancilla outcome over a uniform phase grid.
struct FringeScan {
  std::vector<ScanPoint> entries;
  int undefined_points = 0;  ///< points where the outcome has success_prob < kMinSuccessProb
};

struct Estimate {
  double value = 0.0;
  std::optional<double> stderr_;  ///< absent for analytic (infinite-statistics) values
};

/// Wave/particle figures of merit. Analytic computations leave the standard errors empty.
struct DualityReport {
  Estimate V, D, sumVD;
  Estimate Vg, Dg, sumG;
  bool visibility_undefined = false;
  bool distinguishability_undefined = false;
  /// Some phase had a zero-probability outcome; its conditional probabilities were set to 0.
  bool has_impossible_points = false;
};

/// Samples phi = 2 pi k / grid_points, k = 0..grid_points-1, unblocked.
/// Throws std::invalid_argument if grid_points < 8 and std::domain_error if the outcome never occurs.
FringeScan fringe_scan(const DeviceSettings& device, AncillaOutcome outcome, int grid_points);

struct Extremum {
  double phi = 0.0;
  double value = 0.0;
};

struct Extrema {
  Extremum max;
  Extremum min;
};

/// Global extrema of a 2 pi periodic function. A coarse grid locates candidate
/// extrema and golden-section search refines each to |dphi| < tol. Points where
/// `f` returns nullopt are skipped. Returns nullopt if `f` is undefined on the whole grid.
using PhaseFunction = std::function<std::optional<double>(double)>;
std::optional<Extrema> periodic_extrema(const PhaseFunction& f, int grid_points = 720,
                                        double tol = 1e-10);

/// (p_max - p_min)/(p_max + p_min) of the conditional fringe on `detector`; 0 for a vanishing fringe.
double visibility(const DeviceSettings& device, AncillaOutcome outcome,
                  Path detector = Path::Two);

/// |N12 - N22|/(N12 + N22) from blocked-path joint probabilities on detector 2.
double distinguishability(const DeviceSettings& device, AncillaOutcome outcome);

/// Fills V, D and V^2 + D^2.
DualityReport duality_sum(const DeviceSettings& device, AncillaOutcome outcome);

/// Fills Vg, Dg and Vg^2 + Dg^2 from statistics summed over both ancilla outcomes.
DualityReport generalized_metrics(const DeviceSettings& device);

/// duality_sum and generalized_metrics merged into one report.
DualityReport full_report(const DeviceSettings& device, AncillaOutcome outcome);

/// sin^2(alpha)|particle><particle| + cos^2(alpha)|wave><wave|, trace 1.
PathDensity mixed_final_state(double alpha, double phi, double delta1, double delta2);

}  // namespace qbs
