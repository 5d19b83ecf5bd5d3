#include "qbs/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

namespace qbs {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t table_id(Blocking b) { return static_cast<std::uint64_t>(b) + 1; }

// Sequential-binomial multinomial draw over the 4 cells plus loss.
void draw_multinomial(SplitMix64& rng, std::uint64_t shots, const std::array<double, 4>& probs,
                      CountsRow& row) {
  std::uint64_t remaining = shots;
  double mass_left = 1.0;
  for (std::size_t k = 0; k < 4 && remaining > 0; ++k) {
    const double p = mass_left > 0.0 ? std::clamp(probs[k] / mass_left, 0.0, 1.0) : 0.0;
    std::uint64_t drawn = 0;
    if (p >= 1.0) {
      drawn = remaining;
    } else if (p > 0.0) {
      std::binomial_distribution<std::uint64_t> bin(remaining, p);
      drawn = bin(rng);
    }
    row.n[k] += drawn;
    remaining -= drawn;
    mass_left -= probs[k];
  }
  row.lost += remaining;
}

void draw_single_shot(SplitMix64& rng, const std::array<double, 4>& probs, double efficiency,
                      CountsRow& row) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    acc += probs[k];
    if (u < acc) {
      if (efficiency >= 1.0 || unif(rng) < efficiency) {
        ++row.n[k];
      } else {
        ++row.lost;
      }
      return;
    }
  }
  ++row.lost;
}

struct Ratio {
  double value = 0.0;
  double variance = 0.0;
  bool defined = false;
};

// hi/lo contrast (a - b)/(a + b) with first-order error propagation.
Ratio contrast_of(double a, double var_a, double b, double var_b) {
  const double s = a + b;
  if (s <= 0.0) return {};
  const double s2 = s * s;
  const double da = 2 * b / s2;
  const double db = 2 * a / s2;
  return {(a - b) / s, da * da * var_a + db * db * var_b, true};
}

struct Fraction {
  double p = 0.0;
  double variance = 0.0;
};

// Path-2 fraction n2/(n1 + n2) per row with binomial variance.
template <class CellSum>
Ratio fringe_visibility(const CountsTable& table, CellSum&& cells) {
  std::optional<Fraction> hi;
  std::optional<Fraction> lo;
  for (const auto& row : table.rows) {
    const auto [n1, n2] = cells(row);
    const double total = n1 + n2;
    if (total <= 0.0) continue;
    const Fraction f{n2 / total, (n2 / total) * (n1 / total) / total};
    if (!hi || f.p > hi->p) hi = f;
    if (!lo || f.p < lo->p) lo = f;
  }
  if (!hi) return {};
  return contrast_of(hi->p, hi->variance, lo->p, lo->variance);
}

template <class CellSum>
double table_total(const CountsTable& table, CellSum&& cell) {
  double total = 0.0;
  for (const auto& row : table.rows) total += cell(row);
  return total;
}

void fill_sum(const Estimate& x, const Estimate& y, Estimate& out) {
  out.value = x.value * x.value + y.value * y.value;
  if (x.stderr_ && y.stderr_) {
    const double gx = 2 * x.value * *x.stderr_;
    const double gy = 2 * y.value * *y.stderr_;
    out.stderr_ = std::sqrt(gx * gx + gy * gy);
  }
}

DualityReport estimate_core(const ExperimentCounts& c, AncillaOutcome o) {
  DualityReport rep;
  const Ratio v = fringe_visibility(c.open, [o](const CountsRow& r) {
    return std::pair<double, double>{static_cast<double>(r.count(Path::One, o)),
                                     static_cast<double>(r.count(Path::Two, o))};
  });
  rep.V = {v.value, std::sqrt(v.variance)};
  rep.visibility_undefined = !v.defined;

  auto path2 = [o](const CountsRow& r) { return static_cast<double>(r.count(Path::Two, o)); };
  const double n12 = table_total(c.block_path2, path2);
  const double n22 = table_total(c.block_path1, path2);
  const Ratio d = contrast_of(n12, n12, n22, n22);
  rep.D = {std::abs(d.value), std::sqrt(d.variance)};
  rep.distinguishability_undefined = !d.defined;
  fill_sum(rep.V, rep.D, rep.sumVD);

  const Ratio vg = fringe_visibility(c.open, [](const CountsRow& r) {
    return std::pair<double, double>{
        static_cast<double>(r.count(Path::One, AncillaOutcome::B) +
                            r.count(Path::One, AncillaOutcome::BPerp)),
        static_cast<double>(r.count(Path::Two, AncillaOutcome::B) +
                            r.count(Path::Two, AncillaOutcome::BPerp))};
  });
  rep.Vg = {vg.value, std::sqrt(vg.variance)};

  auto path2_both = [](const CountsRow& r) {
    return static_cast<double>(r.count(Path::Two, AncillaOutcome::B) +
                               r.count(Path::Two, AncillaOutcome::BPerp));
  };
  const double g12 = table_total(c.block_path2, path2_both);
  const double g22 = table_total(c.block_path1, path2_both);
  const Ratio dg = contrast_of(g12, g12, g22, g22);
  rep.Dg = {std::abs(dg.value), std::sqrt(dg.variance)};
  fill_sum(rep.Vg, rep.Dg, rep.sumG);
  return rep;
}

CountsTable poisson_resample(const CountsTable& t, SplitMix64& rng) {
  CountsTable out = t;
  for (auto& row : out.rows) {
    for (auto& n : row.n) {
      if (n == 0) continue;
      std::poisson_distribution<std::uint64_t> pois(static_cast<double>(n));
      n = pois(rng);
    }
  }
  return out;
}

}  // namespace

void NoiseModel::validate() const {
  if (!(dark_rate >= 0.0) || !std::isfinite(dark_rate))
    throw std::invalid_argument("noise: dark_rate must be finite and >= 0");
  if (!(contrast >= 0.0 && contrast <= 1.0))
    throw std::invalid_argument("noise: contrast must lie in [0, 1]");
  if (!(phase_jitter_sigma >= 0.0) || !std::isfinite(phase_jitter_sigma))
    throw std::invalid_argument("noise: phase_jitter_sigma must be finite and >= 0");
  if (!(efficiency > 0.0 && efficiency <= 1.0))
    throw std::invalid_argument("noise: efficiency must lie in (0, 1]");
}

void ShotPlan::validate() const {
  if (shots_per_point < 1) throw std::invalid_argument("plan: shots_per_point must be >= 1");
  if (phi_grid.empty()) throw std::invalid_argument("plan: phi grid is empty");
  for (std::size_t k = 0; k < phi_grid.size(); ++k) {
    if (!std::isfinite(phi_grid[k])) throw std::invalid_argument("plan: non-finite phase");
    if (k > 0 && !(phi_grid[k] > phi_grid[k - 1]))
      throw std::invalid_argument("plan: phi grid must be strictly increasing");
  }
}

std::vector<double> ShotPlan::uniform_grid(int n) {
  if (n < 1) throw std::invalid_argument("plan: grid needs at least one point");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = kTwoPi * k / n;
  return g;
}

SplitMix64::result_type SplitMix64::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t table, std::uint64_t point,
                             std::uint64_t shot) {
  std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h ^ table);
  h = mix64(h ^ point);
  return mix64(h ^ shot);
}

std::array<double, 4> joint_probabilities(const ApparatusParams& params, double contrast) {
  auto cells = [](const RunResult& r) {
    std::array<double, 4> p{};
    for (AncillaOutcome o : kOutcomes) {
      p[cell_index(Path::One, o)] = r[o].joint.p1;
      p[cell_index(Path::Two, o)] = r[o].joint.p2;
    }
    return p;
  };
  const auto coherent = cells(run(params));
  if (params.blocking != Blocking::None || contrast >= 1.0) return coherent;

  // Dephasing the path qubit mixes in the incoherent sum of the two single-path inputs.
  const auto via1 = cells(run({params.device, params.phi, Blocking::BlockPath2}));
  const auto via2 = cells(run({params.device, params.phi, Blocking::BlockPath1}));
  std::array<double, 4> p{};
  for (std::size_t k = 0; k < 4; ++k) {
    p[k] = contrast * coherent[k] + (1.0 - contrast) * (via1[k] + via2[k]);
  }
  return p;
}

CountsTable sample_counts(const DeviceSettings& device, Blocking blocking, const NoiseModel& noise,
                          const ShotPlan& plan) {
  noise.validate();
  plan.validate();
  CountsTable table;
  table.blocking = blocking;
  table.shots_per_point = plan.shots_per_point;
  table.rows.resize(plan.phi_grid.size());

  const std::uint64_t tid = table_id(blocking);
  for (std::size_t k = 0; k < plan.phi_grid.size(); ++k) {
    CountsRow& row = table.rows[k];
    row.phi = plan.phi_grid[k];
    SplitMix64 point_rng(substream_seed(plan.seed, tid, k, 0));

    if (noise.phase_jitter_sigma > 0.0) {
      std::normal_distribution<double> jitter(0.0, noise.phase_jitter_sigma);
      for (std::uint64_t s = 1; s <= plan.shots_per_point; ++s) {
        SplitMix64 shot_rng(substream_seed(plan.seed, tid, k, s));
        const double phi = row.phi + jitter(shot_rng);
        const auto probs = joint_probabilities({device, phi, blocking}, noise.contrast);
        draw_single_shot(shot_rng, probs, noise.efficiency, row);
      }
    } else {
      auto probs = joint_probabilities({device, row.phi, blocking}, noise.contrast);
      for (auto& p : probs) p *= noise.efficiency;
      draw_multinomial(point_rng, plan.shots_per_point, probs, row);
    }

    if (noise.dark_rate > 0.0) {
      std::poisson_distribution<std::uint64_t> dark(noise.dark_rate);
      for (auto& n : row.n) n += dark(point_rng);
    }
  }
  return table;
}

ExperimentCounts sample_experiment(const DeviceSettings& device, const NoiseModel& noise,
                                   const ShotPlan& plan) {
  return {sample_counts(device, Blocking::None, noise, plan),
          sample_counts(device, Blocking::BlockPath1, noise, plan),
          sample_counts(device, Blocking::BlockPath2, noise, plan)};
}

DualityReport estimate_metrics(const ExperimentCounts& counts, AncillaOutcome outcome) {
  return estimate_core(counts, outcome);
}

DualityReport bootstrap_metrics(const ExperimentCounts& counts, AncillaOutcome outcome,
                                int resamples, std::uint64_t seed) {
  if (resamples < 2) throw std::invalid_argument("bootstrap: need at least 2 resamples");
  DualityReport rep = estimate_core(counts, outcome);
  std::array<Estimate*, 6> fields{&rep.V, &rep.D, &rep.sumVD, &rep.Vg, &rep.Dg, &rep.sumG};
  std::array<double, 6> sum{};
  std::array<double, 6> sum_sq{};

  for (int r = 0; r < resamples; ++r) {
    SplitMix64 rng(substream_seed(seed, 0xb00757ULL, static_cast<std::uint64_t>(r), 0));
    const ExperimentCounts resampled{poisson_resample(counts.open, rng),
                                     poisson_resample(counts.block_path1, rng),
                                     poisson_resample(counts.block_path2, rng)};
    const DualityReport b = estimate_core(resampled, outcome);
    const std::array<double, 6> vals{b.V.value,  b.D.value,  b.sumVD.value,
                                     b.Vg.value, b.Dg.value, b.sumG.value};
    for (std::size_t i = 0; i < 6; ++i) {
      sum[i] += vals[i];
      sum_sq[i] += vals[i] * vals[i];
    }
  }
  const double n = resamples;
  for (std::size_t i = 0; i < 6; ++i) {
    const double mean = sum[i] / n;
    const double var = std::max(0.0, (sum_sq[i] - n * mean * mean) / (n - 1));
    fields[i]->stderr_ = std::sqrt(var);
  }
  return rep;
}

}  // namespace qbs
