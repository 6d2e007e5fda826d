#include "diqpq/bell.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace diqpq {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kPi = std::numbers::pi;

void check_eps(double eps) {
    if (!(std::abs(eps) < 0.5)) {
        throw std::domain_error("eps must lie in (-1/2, 1/2)");
    }
}

void check_eta(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("eta must lie in (0, 1]");
    }
}

double eps_weight(double eps) { return 2.0 * std::sqrt(0.25 - eps * eps); }

}  // namespace

double loophole_closing_eta() { return 2.0 / (1.0 + std::numbers::sqrt2); }

void validate_angles(const BellAngles& angles) {
    if (!(angles.theta > 0.0 && angles.theta <= kHalfPi)) {
        throw std::domain_error("theta must lie in (0, pi/2]");
    }
    if (!(angles.psi1 > 0.0 && angles.psi1 < kHalfPi)) {
        throw std::domain_error("psi1 must lie in (0, pi/2)");
    }
    if (!(angles.psi2 > kHalfPi && angles.psi2 < kPi)) {
        throw std::domain_error("psi2 must lie in (pi/2, pi)");
    }
    if (std::abs(angles.psi1 + angles.psi2 - kPi) > 1e-12) {
        throw std::domain_error("psi1 + psi2 must equal pi");
    }
}

AttackRegionParams attack_region_params(const BellAngles& angles, double eta) {
    validate_angles(angles);
    check_eta(eta);
    AttackRegionParams p{};
    p.a = std::sin(angles.theta) * (std::sin(angles.psi1) + std::sin(angles.psi2));
    p.b = std::cos(angles.psi1) - std::cos(angles.psi2);
    p.c = (8.0 - 2.0 * p.a + p.b) * eta - 8.0 + 2.0 * p.a;
    return p;
}

int game_score(int a, int b, int x, int y) {
    return ((a ^ b) == (x & y)) ? 1 : 0;
}

double game_threshold(const BellAngles& angles) {
    validate_angles(angles);
    return chsh_ideal(angles) / 8.0 + 0.5;
}

double correlator(const TwoQubitState& state, int x, int y, const BellAngles& angles) {
    validate_angles(angles);
    const QubitBasis bob = (x == 0) ? QubitBasis::computational() : QubitBasis::hadamard();
    const QubitBasis alice((y == 0) ? angles.psi1 : angles.psi2);
    const auto dist = joint_distribution(state, bob, alice);
    return dist[0] - dist[1] - dist[2] + dist[3];
}

double chsh_ideal(const BellAngles& angles) {
    validate_angles(angles);
    return std::sin(angles.theta) * (std::sin(angles.psi1) + std::sin(angles.psi2)) +
           std::cos(angles.psi1) - std::cos(angles.psi2);
}

double biased_game_value(const BellAngles& angles, double eps) {
    validate_angles(angles);
    check_eps(eps);
    return std::sin(angles.theta) * (std::sin(angles.psi1) + std::sin(angles.psi2)) / 8.0 +
           (std::sqrt(0.25 - eps * eps) / 4.0) *
               (std::cos(angles.psi1) - std::cos(angles.psi2)) +
           0.5;
}

double biased_chsh_value(const BellAngles& angles, double eps) {
    validate_angles(angles);
    check_eps(eps);
    return std::sin(angles.theta) * (std::sin(angles.psi1) + std::sin(angles.psi2)) +
           eps_weight(eps) * (std::cos(angles.psi1) - std::cos(angles.psi2));
}

double eta_corrected_value_unchecked(const BellAngles& angles, double eta) {
    const double s = chsh_ideal(angles);
    return -8.0 + 3.0 * s + (8.0 - 2.0 * s) / eta;
}

double threshold_with_eta(const BellAngles& angles, double eta) {
    check_eta(eta);
    if (!(eta > loophole_closing_eta())) {
        throw std::domain_error("eta leaves the detection loophole open");
    }
    return eta_corrected_value_unchecked(angles, eta);
}

double attack_chsh_value(const BellAngles& angles, double eps, double eta) {
    check_eta(eta);
    const double s = biased_chsh_value(angles, eps);
    return (8.0 - 2.0 * s) / eta + 3.0 * s - 8.0;
}

double case2_eps_bound(const BellAngles& angles, double eta) {
    const auto p = attack_region_params(angles, eta);
    const double m = (3.0 * eta - 2.0) * p.b;
    const double disc = m * m - p.c * p.c;
    if (!(m > 0.0) || disc <= 0.0) return 0.0;
    return std::sqrt(disc) / (2.0 * m);
}

AttackRegion classify_attack_region(const BellAngles& angles, double eps, double eta) {
    check_eps(eps);
    check_eta(eta);
    if (eps == 0.0) return AttackRegion::NoAttack;
    const auto p = attack_region_params(angles, eta);
    const double case1_upper = (8.0 - 2.0 * p.a) / (8.0 - 2.0 * p.a + p.b);
    if (!(eta > loophole_closing_eta())) return AttackRegion::NoAttack;
    if (eta < case1_upper) return AttackRegion::Case1;
    // Beyond the Case-1 band C > 0; Case 2 extends up to eta < 1, since
    // (3 eta - 2) B - C = (8 - 2A - 2B)(1 - eta) and 8 - 2A - 2B > 0.
    if (eta > case1_upper && eta < 1.0 && std::abs(eps) < case2_eps_bound(angles, eta)) {
        return AttackRegion::Case2;
    }
    return AttackRegion::NoAttack;
}

double delta_lower_bound(double eta) {
    check_eta(eta);
    return 3.0 - 2.0 / eta;
}

double chsh_bound_given_delta(double s, double delta) {
    if (!(s >= -4.0 && s <= 4.0)) {
        throw std::domain_error("S must lie in [-4, 4]");
    }
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw std::domain_error("delta must lie in [0, 1]");
    }
    return 4.0 + (s - 4.0) * delta;
}

}  // namespace diqpq
