#pragma once

#include <array>
#include <complex>
#include <cstddef>

namespace qbs {

using Amplitude = std::complex<double>;

/// Absolute tolerance for exact-arithmetic checks on 2- and 4-dim objects.
inline constexpr double kExactTol = 1e-12;

/// Photon path label. Serialized as 1 and 2.
enum class Path : std::size_t { One = 0, Two = 1 };

/// Ancilla (q-BS) basis label: |a> = beam splitter absent, |p> = present.
enum class Ancilla : std::size_t { A = 0, P = 1 };

/// Pure (possibly subnormalized) state of the photon's path degree of freedom.
struct PathState {
  Amplitude amp1{};
  Amplitude amp2{};

  [[nodiscard]] const Amplitude& operator[](Path p) const { return p == Path::One ? amp1 : amp2; }
  [[nodiscard]] double norm2() const { return std::norm(amp1) + std::norm(amp2); }
};

/// Photon path (x) ancilla state, basis order |1a>, |2a>, |1p>, |2p>.
struct JointState {
  std::array<Amplitude, 4> v{};

  static constexpr std::size_t index(Path p, Ancilla x) {
    return static_cast<std::size_t>(p) + 2 * static_cast<std::size_t>(x);
  }
  [[nodiscard]] const Amplitude& at(Path p, Ancilla x) const { return v[index(p, x)]; }
  [[nodiscard]] Amplitude& at(Path p, Ancilla x) { return v[index(p, x)]; }
  [[nodiscard]] double norm2() const;
};

/// 2x2 density operator on the path space, row-major in the |1>, |2> basis.
struct PathDensity {
  std::array<Amplitude, 4> m{};

  [[nodiscard]] const Amplitude& at(Path r, Path c) const {
    return m[2 * static_cast<std::size_t>(r) + static_cast<std::size_t>(c)];
  }
  [[nodiscard]] Amplitude& at(Path r, Path c) {
    return m[2 * static_cast<std::size_t>(r) + static_cast<std::size_t>(c)];
  }
  [[nodiscard]] double trace() const { return m[0].real() + m[3].real(); }
  [[nodiscard]] bool is_hermitian(double tol = kExactTol) const;
  /// Smallest eigenvalue of the Hermitian part.
  [[nodiscard]] double min_eigenvalue() const;

  static PathDensity outer(const PathState& s);
};

PathDensity operator+(const PathDensity& a, const PathDensity& b);
PathDensity operator*(double k, const PathDensity& a);

/// 2x2 unitary acting on the path space. Construction validates unitarity.
class Unitary2 {
 public:
  /// Row-major entries; throws std::invalid_argument unless m^dagger m = 1 to kExactTol.
  explicit Unitary2(const std::array<Amplitude, 4>& m);

  static Unitary2 identity();
  static Unitary2 pauli_x();

  [[nodiscard]] const Amplitude& at(std::size_t r, std::size_t c) const { return m_[2 * r + c]; }
  [[nodiscard]] PathState apply(const PathState& s) const;

 private:
  std::array<Amplitude, 4> m_;
};

/// path (x) (anc_a |a> + anc_p |p>). The ancilla coefficients must be normalized.
JointState tensor(const PathState& path, Amplitude anc_a, Amplitude anc_p);

/// Applies `u` to the two amplitudes carrying ancilla label `sector`, leaves the rest.
JointState apply_on_path_sector(const JointState& state, const Unitary2& u, Ancilla sector);

struct Projection {
  PathState path;  ///< unnormalized <b|psi>
  double success_prob = 0.0;
};

/// Inner product of the ancilla factor with b = b_a |a> + b_p |p>.
Projection project_ancilla(const JointState& state, Amplitude b_a, Amplitude b_p);

PathDensity partial_trace_ancilla(const JointState& state);

struct DetectorProbs {
  double p1 = 0.0;
  double p2 = 0.0;
};

DetectorProbs detector_probs(const PathDensity& rho);

/// |<a|b>| / (|a| |b|); 0 when either state vanishes. Insensitive to global phase.
double overlap_modulus(const PathState& a, const PathState& b);

}  // namespace qbs
