#include "qbs/metrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qbs {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kMinDenominator = 1e-15;

double contrast_ratio(double hi, double lo) {
  const double sum = hi + lo;
  return sum < kMinDenominator ? 0.0 : (hi - lo) / sum;
}

// Maximizes f on [lo, hi]; undefined points count as -inf.
Extremum golden_section_max(const PhaseFunction& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.61803398874989484820;
  auto eval = [&](double x) {
    auto v = f(x);
    return v ? *v : -std::numeric_limits<double>::infinity();
  };
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = eval(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = eval(x1);
    }
  }
  return f1 >= f2 ? Extremum{x1, f1} : Extremum{x2, f2};
}

std::optional<Extremum> periodic_max(const PhaseFunction& f, int grid_points, double tol) {
  const double step = kTwoPi / grid_points;
  std::vector<std::optional<double>> samples(static_cast<std::size_t>(grid_points));
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    samples[k] = f(step * static_cast<double>(k));
    if (samples[k] && (!best || *samples[k] > *samples[*best])) best = k;
  }
  if (!best) return std::nullopt;

  const auto n = samples.size();
  std::vector<std::size_t> candidates{*best};
  for (std::size_t k = 0; k < n; ++k) {
    const auto& prev = samples[(k + n - 1) % n];
    const auto& cur = samples[k];
    const auto& next = samples[(k + 1) % n];
    if (!cur || k == *best) continue;
    if ((!prev || *cur > *prev) && (!next || *cur >= *next)) candidates.push_back(k);
  }

  Extremum result{step * static_cast<double>(*best), *samples[*best]};
  for (std::size_t k : candidates) {
    const double center = step * static_cast<double>(k);
    Extremum e = golden_section_max(f, center - step, center + step, tol);
    if (e.value > result.value) result = e;
  }
  result.phi = std::fmod(result.phi + kTwoPi, kTwoPi);
  return result;
}

std::optional<double> conditional_prob(const DeviceSettings& device, AncillaOutcome outcome,
                                       Path detector, double phi) {
  const RunResult res = run(with_phase(device, phi));
  const OutcomeResult& r = res[outcome];
  if (!r.defined) return std::nullopt;
  return detector == Path::One ? r.conditional.p1 : r.conditional.p2;
}

double blocked_joint_p2(const DeviceSettings& device, AncillaOutcome outcome, Blocking blocking) {
  return run(with_phase(device, 0.0, blocking))[outcome].joint.p2;
}

double blocked_combined_p2(const DeviceSettings& device, Blocking blocking) {
  const RunResult r = run(with_phase(device, 0.0, blocking));
  return r[AncillaOutcome::B].joint.p2 + r[AncillaOutcome::BPerp].joint.p2;
}

}  // namespace

FringeScan fringe_scan(const DeviceSettings& device, AncillaOutcome outcome, int grid_points) {
  if (grid_points < 8) throw std::invalid_argument("fringe_scan: grid_points must be >= 8");
  FringeScan scan;
  scan.entries.reserve(static_cast<std::size_t>(grid_points));
  for (int k = 0; k < grid_points; ++k) {
    const double phi = kTwoPi * k / grid_points;
    const RunResult res = run(with_phase(device, phi));
    const OutcomeResult& r = res[outcome];
    if (!r.defined) ++scan.undefined_points;
    scan.entries.push_back({phi, r.conditional.p2, r.conditional.p1, r.success_prob});
  }
  if (scan.undefined_points == grid_points) {
    throw std::domain_error("fringe_scan: the selected ancilla outcome never occurs");
  }
  return scan;
}

std::optional<Extrema> periodic_extrema(const PhaseFunction& f, int grid_points, double tol) {
  if (grid_points < 3) throw std::invalid_argument("periodic_extrema: grid too coarse");
  auto hi = periodic_max(f, grid_points, tol);
  if (!hi) return std::nullopt;
  const PhaseFunction neg = [&f](double x) -> std::optional<double> {
    auto v = f(x);
    if (!v) return std::nullopt;
    return -*v;
  };
  auto lo = periodic_max(neg, grid_points, tol);
  return Extrema{*hi, {lo->phi, -lo->value}};
}

double visibility(const DeviceSettings& device, AncillaOutcome outcome, Path detector) {
  auto ext = periodic_extrema(
      [&](double phi) { return conditional_prob(device, outcome, detector, phi); });
  if (!ext) throw std::domain_error("visibility: the selected ancilla outcome never occurs");
  return contrast_ratio(ext->max.value, ext->min.value);
}

double distinguishability(const DeviceSettings& device, AncillaOutcome outcome) {
  const double n22 = blocked_joint_p2(device, outcome, Blocking::BlockPath1);
  const double n12 = blocked_joint_p2(device, outcome, Blocking::BlockPath2);
  return std::abs(contrast_ratio(n12, n22));
}

DualityReport duality_sum(const DeviceSettings& device, AncillaOutcome outcome) {
  DualityReport rep;
  auto ext = periodic_extrema(
      [&](double phi) { return conditional_prob(device, outcome, Path::Two, phi); });
  if (!ext) throw std::domain_error("duality_sum: the selected ancilla outcome never occurs");
  rep.V.value = contrast_ratio(ext->max.value, ext->min.value);
  rep.visibility_undefined = ext->max.value + ext->min.value < kMinDenominator;

  const double n22 = blocked_joint_p2(device, outcome, Blocking::BlockPath1);
  const double n12 = blocked_joint_p2(device, outcome, Blocking::BlockPath2);
  rep.D.value = std::abs(contrast_ratio(n12, n22));
  rep.distinguishability_undefined = n12 + n22 < kMinDenominator;
  rep.sumVD.value = rep.V.value * rep.V.value + rep.D.value * rep.D.value;

  for (int k = 0; k < 720 && !rep.has_impossible_points; ++k) {
    rep.has_impossible_points = !run(with_phase(device, kTwoPi * k / 720))[outcome].defined;
  }
  return rep;
}

DualityReport generalized_metrics(const DeviceSettings& device) {
  DualityReport rep;
  auto combined_p2 = [&](double phi) -> std::optional<double> {
    const RunResult r = run(with_phase(device, phi));
    const double total = r.detected();
    if (total < kMinDenominator) return std::nullopt;
    return (r[AncillaOutcome::B].joint.p2 + r[AncillaOutcome::BPerp].joint.p2) / total;
  };
  auto ext = periodic_extrema(combined_p2);
  if (!ext) throw std::domain_error("generalized_metrics: no photons detected");
  rep.Vg.value = contrast_ratio(ext->max.value, ext->min.value);

  const double n22 = blocked_combined_p2(device, Blocking::BlockPath1);
  const double n12 = blocked_combined_p2(device, Blocking::BlockPath2);
  rep.Dg.value = std::abs(contrast_ratio(n12, n22));
  rep.sumG.value = rep.Vg.value * rep.Vg.value + rep.Dg.value * rep.Dg.value;
  return rep;
}

DualityReport full_report(const DeviceSettings& device, AncillaOutcome outcome) {
  DualityReport rep = duality_sum(device, outcome);
  const DualityReport g = generalized_metrics(device);
  rep.Vg = g.Vg;
  rep.Dg = g.Dg;
  rep.sumG = g.sumG;
  return rep;
}

PathDensity mixed_final_state(double alpha, double phi, double delta1, double delta2) {
  const double s2 = std::sin(alpha) * std::sin(alpha);
  const double c2 = std::cos(alpha) * std::cos(alpha);
  const PathDensity mix = s2 * PathDensity::outer(particle_state(phi)) +
                          c2 * PathDensity::outer(wave_state(phi, delta1, delta2));
  return (1.0 / mix.trace()) * mix;
}

}  // namespace qbs
