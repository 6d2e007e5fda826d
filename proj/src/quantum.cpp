#include "diqpq/quantum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace diqpq {

namespace {

constexpr double kRenormLimit = 1e-9;

void check_angle_open_half(double theta, const char* what) {
    if (!(theta > 0.0 && theta <= std::numbers::pi / 2)) {
        throw std::domain_error(std::string(what) + " must lie in (0, pi/2]");
    }
}

}  // namespace

QubitBasis::QubitBasis(double angle) : angle_(angle) {
    if (!std::isfinite(angle)) {
        throw std::domain_error("basis angle must be finite");
    }
}

std::array<Complex, 2> QubitBasis::vector(int outcome) const {
    const double c = std::cos(angle_ / 2.0);
    const double s = std::sin(angle_ / 2.0);
    if (outcome == 0) {
        return {Complex(c, 0.0), Complex(s, 0.0)};
    }
    return {Complex(s, 0.0), Complex(-c, 0.0)};
}

QubitBasis QubitBasis::hadamard() { return QubitBasis(std::numbers::pi / 2); }

TwoQubitState::TwoQubitState(Complex amp00, Complex amp01, Complex amp10, Complex amp11)
    : amps_{amp00, amp01, amp10, amp11} {
    const double n2 = norm_squared();
    const double dev = std::abs(n2 - 1.0);
    if (dev >= kRenormLimit) {
        throw std::domain_error("two-qubit state is not normalized");
    }
    if (dev > 0.0) {
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& a : amps_) a *= inv;
    }
}

double TwoQubitState::norm_squared() const {
    double n2 = 0.0;
    for (const auto& a : amps_) n2 += std::norm(a);
    return n2;
}

TwoQubitState make_honest_state(double theta) {
    return make_biased_state(theta, 0.0);
}

TwoQubitState make_biased_state(double theta, double eps) {
    check_angle_open_half(theta, "theta");
    if (!(std::abs(eps) < 0.5)) {
        throw std::domain_error("bias eps must lie in (-1/2, 1/2)");
    }
    const double alpha = std::sqrt(0.5 + eps);
    const double beta = std::sqrt(0.5 - eps);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    // alpha |0>(c|0> + s|1>) + beta |1>(c|0> - s|1>)
    return TwoQubitState(alpha * c, alpha * s, beta * c, -beta * s);
}

JointDistribution joint_distribution(const TwoQubitState& state,
                                     const QubitBasis& bob_basis,
                                     const QubitBasis& alice_basis) {
    if (std::abs(state.norm_squared() - 1.0) > 1e-9) {
        throw std::domain_error("joint_distribution: state not normalized");
    }
    JointDistribution dist{};
    double total = 0.0;
    for (int a = 0; a < 2; ++a) {
        const auto vb = bob_basis.vector(a);
        for (int b = 0; b < 2; ++b) {
            const auto va = alice_basis.vector(b);
            Complex amp = 0.0;
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    amp += std::conj(vb[i] * va[j]) * state.amp(i, j);
                }
            }
            const double p = std::norm(amp);
            dist[a * 2 + b] = p;
            total += p;
        }
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::domain_error("joint_distribution: probabilities do not sum to 1");
    }
    return dist;
}

std::pair<int, int> sample_outcome(const JointDistribution& dist, RoundRng& rng) {
    const double u = rng.next_u01();
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
        acc += dist[k];
        if (u < acc) return {k / 2, k % 2};
    }
    return {1, 1};  // u landed in the rounding slack at the top
}

}  // namespace diqpq
