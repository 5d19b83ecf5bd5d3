#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "qbs/apparatus.hpp"
#include "qbs/metrics.hpp"

namespace qbs {

/// Experimental imperfections applied on top of the ideal apparatus.
struct NoiseModel {
  double dark_rate = 0.0;           ///< mean dark/background counts per cell per grid point
  double contrast = 1.0;            ///< path-coherence attenuation before the q-BS, in [0, 1]
  double phase_jitter_sigma = 0.0;  ///< per-shot Gaussian phase noise, radians
  double efficiency = 1.0;          ///< per-photon detection probability, in (0, 1]

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct ShotPlan {
  std::uint64_t shots_per_point = 100000;
  std::vector<double> phi_grid;
  std::uint64_t seed = 0;

  void validate() const;

  /// 2 pi k / n for k = 0..n-1.
  static std::vector<double> uniform_grid(int n);
};

/// SplitMix64; satisfies UniformRandomBitGenerator. Small state so one can be
/// created per (grid point, shot) substream.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t state_;
};

/// Seed of the substream identified by (master, table, point, shot). Shot 0 is the
/// per-point stream; shots are numbered from 1.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t table, std::uint64_t point,
                             std::uint64_t shot);

/// Index of a (detector, outcome) count cell: 1B, 2B, 1B_perp, 2B_perp.
constexpr std::size_t cell_index(Path detector, AncillaOutcome outcome) {
  return static_cast<std::size_t>(detector) + 2 * static_cast<std::size_t>(outcome);
}

struct CountsRow {
  double phi = 0.0;
  std::array<std::uint64_t, 4> n{};
  std::uint64_t lost = 0;

  [[nodiscard]] std::uint64_t count(Path detector, AncillaOutcome outcome) const {
    return n[cell_index(detector, outcome)];
  }
};

struct CountsTable {
  Blocking blocking = Blocking::None;
  std::uint64_t shots_per_point = 0;
  std::vector<CountsRow> rows;
};

/// The three runs behind one set of estimates: open fringe and both blocked-path runs.
struct ExperimentCounts {
  CountsTable open;
  CountsTable block_path1;
  CountsTable block_path2;
};

/// Joint probabilities p(detector and outcome) in cell order, with the path
/// coherence entering the q-BS scaled by `contrast`.
std::array<double, 4> joint_probabilities(const ApparatusParams& params, double contrast);

/// Simulated photon counting for one blocker setting. Deterministic in plan.seed.
CountsTable sample_counts(const DeviceSettings& device, Blocking blocking, const NoiseModel& noise,
                          const ShotPlan& plan);

ExperimentCounts sample_experiment(const DeviceSettings& device, const NoiseModel& noise,
                                   const ShotPlan& plan);

/// Point estimates with first-order Poisson standard errors. V from the extremal
/// grid cells of the conditional fringe, D from blocked-run totals; generalized
/// values from counts summed over both ancilla outcomes.
DualityReport estimate_metrics(const ExperimentCounts& counts, AncillaOutcome outcome);

/// Same point estimates; standard errors from a Poisson resampling bootstrap.
DualityReport bootstrap_metrics(const ExperimentCounts& counts, AncillaOutcome outcome,
                                int resamples = 200, std::uint64_t seed = 0);

}  // namespace qbs
