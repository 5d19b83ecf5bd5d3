#include "qbs/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbs {

namespace {

void require_normalized(Amplitude x, Amplitude y, const char* what) {
  const double n = std::norm(x) + std::norm(y);
  if (!std::isfinite(n) || std::abs(n - 1.0) > kExactTol) {
    throw std::invalid_argument(std::string(what) + ": coefficients are not normalized");
  }
}

}  // namespace

double JointState::norm2() const {
  double n = 0.0;
  for (const auto& a : v) n += std::norm(a);
  return n;
}

bool PathDensity::is_hermitian(double tol) const {
  return std::abs(m[0].imag()) <= tol && std::abs(m[3].imag()) <= tol &&
         std::abs(m[1] - std::conj(m[2])) <= tol;
}

double PathDensity::min_eigenvalue() const {
  const double a = m[0].real();
  const double d = m[3].real();
  const Amplitude b = 0.5 * (m[1] + std::conj(m[2]));
  const double mean = 0.5 * (a + d);
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  return mean - half_gap;
}

PathDensity PathDensity::outer(const PathState& s) {
  PathDensity r;
  const std::array<Amplitude, 2> x{s.amp1, s.amp2};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) r.m[2 * i + j] = x[i] * std::conj(x[j]);
  return r;
}

PathDensity operator+(const PathDensity& a, const PathDensity& b) {
  PathDensity r;
  for (std::size_t i = 0; i < 4; ++i) r.m[i] = a.m[i] + b.m[i];
  return r;
}

PathDensity operator*(double k, const PathDensity& a) {
  PathDensity r;
  for (std::size_t i = 0; i < 4; ++i) r.m[i] = k * a.m[i];
  return r;
}

Unitary2::Unitary2(const std::array<Amplitude, 4>& m) : m_(m) {
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      Amplitude g = std::conj(m_[i]) * m_[j] + std::conj(m_[2 + i]) * m_[2 + j];
      const double expect = i == j ? 1.0 : 0.0;
      if (!(std::abs(g - expect) <= kExactTol)) {
        throw std::invalid_argument("Unitary2: matrix is not unitary");
      }
    }
  }
}

Unitary2 Unitary2::identity() { return Unitary2({1.0, 0.0, 0.0, 1.0}); }

Unitary2 Unitary2::pauli_x() { return Unitary2({0.0, 1.0, 1.0, 0.0}); }

PathState Unitary2::apply(const PathState& s) const {
  return {m_[0] * s.amp1 + m_[1] * s.amp2, m_[2] * s.amp1 + m_[3] * s.amp2};
}

JointState tensor(const PathState& path, Amplitude anc_a, Amplitude anc_p) {
  require_normalized(anc_a, anc_p, "tensor");
  JointState s;
  s.at(Path::One, Ancilla::A) = path.amp1 * anc_a;
  s.at(Path::Two, Ancilla::A) = path.amp2 * anc_a;
  s.at(Path::One, Ancilla::P) = path.amp1 * anc_p;
  s.at(Path::Two, Ancilla::P) = path.amp2 * anc_p;
  return s;
}

JointState apply_on_path_sector(const JointState& state, const Unitary2& u, Ancilla sector) {
  JointState out = state;
  const PathState in{state.at(Path::One, sector), state.at(Path::Two, sector)};
  const PathState rotated = u.apply(in);
  out.at(Path::One, sector) = rotated.amp1;
  out.at(Path::Two, sector) = rotated.amp2;
  return out;
}

Projection project_ancilla(const JointState& state, Amplitude b_a, Amplitude b_p) {
  require_normalized(b_a, b_p, "project_ancilla");
  const Amplitude ca = std::conj(b_a);
  const Amplitude cp = std::conj(b_p);
  Projection r;
  r.path.amp1 = ca * state.at(Path::One, Ancilla::A) + cp * state.at(Path::One, Ancilla::P);
  r.path.amp2 = ca * state.at(Path::Two, Ancilla::A) + cp * state.at(Path::Two, Ancilla::P);
  r.success_prob = std::clamp(r.path.norm2(), 0.0, 1.0);
  return r;
}

PathDensity partial_trace_ancilla(const JointState& state) {
  PathDensity rho;
  for (Path i : {Path::One, Path::Two}) {
    for (Path j : {Path::One, Path::Two}) {
      rho.at(i, j) = state.at(i, Ancilla::A) * std::conj(state.at(j, Ancilla::A)) +
                     state.at(i, Ancilla::P) * std::conj(state.at(j, Ancilla::P));
    }
  }
  return rho;
}

DetectorProbs detector_probs(const PathDensity& rho) {
  return {rho.at(Path::One, Path::One).real(), rho.at(Path::Two, Path::Two).real()};
}

double overlap_modulus(const PathState& a, const PathState& b) {
  const double na = a.norm2();
  const double nb = b.norm2();
  if (na == 0.0 || nb == 0.0) return 0.0;
  const Amplitude ip = std::conj(a.amp1) * b.amp1 + std::conj(a.amp2) * b.amp2;
  return std::abs(ip) / std::sqrt(na * nb);
}

}  // namespace qbs
