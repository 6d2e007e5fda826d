#pragma once

#include <cstdint>

namespace diqpq {

struct ProtocolParams;

// Per-trial ranges the Chernoff-Hoeffding bound is normalized to. Game
// scores live in [0,1]; test-statistic terms (-1)^(a+b+xy)/p(x,y) span
// [-4, 4]. The printed deviation formula corresponds to unit range.
inline constexpr double kGameStatRange = 1.0;
inline constexpr double kTestStatRange = 8.0;

struct ConcentrationBounds {
    double xi = 0.0;
    double nu = 0.0;
    double eps_chsh = 0.0;
    double eps_qpq = 0.0;
};

// Deviation budget of the certification sample:
// range * sqrt(ln(1/eps) / (2 ceil(gamma N))).
double xi(double gamma, std::uint64_t n, double eps_chsh, double range = kGameStatRange);

// Cross-sample deviation between the certification and key-phase blocks:
// range * sqrt((N - ceil(gN) + 1) floor((1-g)N)^2 ln(1/eps) / (2 ceil(gN) N^3)).
double nu(double gamma, std::uint64_t n, double eps_qpq, double range = kGameStatRange);

// Fraction of R honest certifications whose observed test statistic
// deviates from the analytic reference by at least xi (test-stat range).
double validate_concentration(const ProtocolParams& params, std::uint64_t repetitions);

}  // namespace diqpq
