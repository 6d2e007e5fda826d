#include "diqpq/finite_stats.hpp"

#include <cmath>
#include <stdexcept>

#include "diqpq/protocol.hpp"

namespace diqpq {

namespace {

void check_budget(double eps, const char* what) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw std::domain_error(std::string(what) + " must lie in (0, 1]");
    }
}

void check_split(double gamma, std::uint64_t n) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::domain_error("gamma must lie in (0, 1)");
    }
    if (n < 1) throw std::domain_error("pair count must be positive");
}

}  // namespace

double xi(double gamma, std::uint64_t n, double eps_chsh, double range) {
    check_split(gamma, n);
    check_budget(eps_chsh, "eps_chsh");
    const double cert = std::ceil(gamma * static_cast<double>(n));
    return range * std::sqrt(std::log(1.0 / eps_chsh) / (2.0 * cert));
}

double nu(double gamma, std::uint64_t n, double eps_qpq, double range) {
    check_split(gamma, n);
    check_budget(eps_qpq, "eps_qpq");
    const double nd = static_cast<double>(n);
    const double cert = std::ceil(gamma * nd);
    const double qpq = std::floor((1.0 - gamma) * nd);
    return range * std::sqrt((nd - cert + 1.0) * qpq * qpq * std::log(1.0 / eps_qpq) /
                             (2.0 * cert * nd * nd * nd));
}

double validate_concentration(const ProtocolParams& params, std::uint64_t repetitions) {
    validate_params(params);
    if (repetitions == 0) throw std::domain_error("repetitions must be positive");
    const double bound = xi(params.gamma, params.pairs, params.eps_chsh, kTestStatRange);
    const StateSource source = honest_source(params.angles.theta);
    const double reference = params.detector.eta == 1.0
                                 ? chsh_ideal(params.angles)
                                 : threshold_with_eta(params.angles, params.detector.eta);
    std::uint64_t failures = 0;
    for (std::uint64_t r = 0; r < repetitions; ++r) {
        ProtocolParams rep = params;
        rep.seed = RoundRng(params.seed, kStreamPolicy, r).next_u64();
        HonestClickPolicy clicks(params.detector.eta);
        const auto cert = run_certification(rep, source, clicks, CertMethod::Test);
        if (cert.reason == AbortReason::InsufficientData) {
            ++failures;
            continue;
        }
        if (std::abs(cert.observed - reference) >= bound) ++failures;
    }
    return static_cast<double>(failures) / static_cast<double>(repetitions);
}

}  // namespace diqpq
