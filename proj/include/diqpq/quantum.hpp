#pragma once

#include <array>
#include <complex>
#include <utility>

#include "diqpq/rng.hpp"

namespace diqpq {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;

// Single-qubit measurement basis {|psi>, |psi_perp>} parameterized by one
// angle: |psi> = cos(psi/2)|0> + sin(psi/2)|1>,
//        |psi_perp> = sin(psi/2)|0> - cos(psi/2)|1>.
class QubitBasis {
  public:
    explicit QubitBasis(double angle);

    double angle() const { return angle_; }

    // outcome 0 -> |psi>, outcome 1 -> |psi_perp>.
    std::array<Complex, 2> vector(int outcome) const;

    static QubitBasis computational() { return QubitBasis(0.0); }
    static QubitBasis hadamard();

  private:
    double angle_;
};

// Pure state of the Bob/Alice qubit pair. Amplitude order is
// |b a>: amp(0,0), amp(0,1), amp(1,0), amp(1,1) with Bob's qubit first.
class TwoQubitState {
  public:
    TwoQubitState(Complex amp00, Complex amp01, Complex amp10, Complex amp11);

    Complex amp(int bob, int alice) const { return amps_[bob * 2 + alice]; }
    const std::array<Complex, 4>& amplitudes() const { return amps_; }

    double norm_squared() const;

  private:
    std::array<Complex, 4> amps_;
};

// Measurement settings of one Bell round.
struct SettingPair {
    int x = 0;  // Bob:   0 -> computational, 1 -> Hadamard
    int y = 0;  // Alice: 0 -> psi1, 1 -> psi2
};

// (1/sqrt2)(|0>|phi0> + |1>|phi1>) with phi0/phi1 at angles +-theta.
// theta must lie in (0, pi/2]; the closed end admits the maximally
// entangled point used throughout the worked examples.
TwoQubitState make_honest_state(double theta);

// alpha|0>|phi0> + beta|1>|phi1> with alpha = sqrt(1/2 + eps),
// beta = sqrt(1/2 - eps). eps = 0 reproduces the honest state.
TwoQubitState make_biased_state(double theta, double eps);

// Born probabilities p(a,b) of projecting Bob onto bobBasis outcome a and
// Alice onto aliceBasis outcome b. Indexed as [a * 2 + b]; sums to 1.
using JointDistribution = std::array<double, 4>;
JointDistribution joint_distribution(const TwoQubitState& state,
                                     const QubitBasis& bob_basis,
                                     const QubitBasis& alice_basis);

// Draws (a, b) from the distribution. Deterministic given rng state.
std::pair<int, int> sample_outcome(const JointDistribution& dist, RoundRng& rng);

}  // namespace diqpq
