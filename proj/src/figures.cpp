#include "diqpq/figures.hpp"

#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

namespace diqpq {
namespace {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void append_row(std::string& out, std::initializer_list<double> cells) {
  bool first = true;
  for (double c : cells) {
    if (!first) out += ',';
    out += fmt12(c);
    first = false;
  }
  out += '\n';
}

}  // namespace

std::string figure3_csv() {
  const double psi1 = std::numbers::pi / 4.0;
  const double psi2 = 3.0 * std::numbers::pi / 4.0;
  const int theta_steps = 64;
  const int eta_steps = 18;
  std::string out = "theta_rad,eta,threshold\n";
  for (int i = 1; i <= theta_steps; ++i) {
    double theta = (std::numbers::pi / 2.0) * static_cast<double>(i) / theta_steps;
    for (int j = 0; j < eta_steps; ++j) {
      double eta = 0.83 + (1.0 - 0.83) * static_cast<double>(j) / (eta_steps - 1);
      BellAngles angles{theta, psi1, psi2};
      append_row(out, {theta, eta, threshold_with_eta(angles, eta)});
    }
  }
  return out;
}

namespace {

std::string threshold_vs_theta_csv(double eta) {
  constexpr double kPsi[3][2] = {
      {std::numbers::pi / 4.0, 3.0 * std::numbers::pi / 4.0},
      {3.0 * std::numbers::pi / 16.0, 13.0 * std::numbers::pi / 16.0},
      {9.0 * std::numbers::pi / 32.0, 23.0 * std::numbers::pi / 32.0},
  };
  const int theta_steps = 128;
  std::string out = "theta_rad,psi1_rad,psi2_rad,threshold\n";
  for (const auto& psi : kPsi) {
    for (int i = 1; i <= theta_steps; ++i) {
      double theta = (std::numbers::pi / 2.0) * static_cast<double>(i) / theta_steps;
      BellAngles angles{theta, psi[0], psi[1]};
      double value = eta < 1.0 ? threshold_with_eta(angles, eta) : chsh_ideal(angles);
      append_row(out, {theta, psi[0], psi[1], value});
    }
  }
  return out;
}

}  // namespace

std::string figure4_csv() { return threshold_vs_theta_csv(1.0); }

std::string figure5_csv() { return threshold_vs_theta_csv(0.83); }

std::string figure_csv(int figure_id) {
  switch (figure_id) {
    case 3:
      return figure3_csv();
    case 4:
      return figure4_csv();
    case 5:
      return figure5_csv();
    default:
      throw std::invalid_argument("figure id must be 3, 4 or 5");
  }
}

std::string attack_scan_csv(const BellAngles& angles, double eps_min, double eps_max,
                            double eta_min, double eta_max, int resolution) {
  if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
  std::string out = "eps,eta,region,attack_value,threshold\n";
  for (int i = 0; i < resolution; ++i) {
    double eps = eps_min + (eps_max - eps_min) * static_cast<double>(i) / (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
      double eta = eta_min + (eta_max - eta_min) * static_cast<double>(j) / (resolution - 1);
      AttackRegion region = classify_attack_region(angles, eps, eta);
      double attack = attack_chsh_value(angles, eps, eta);
      double thr = eta_corrected_value_unchecked(angles, eta);
      out += fmt12(eps);
      out += ',';
      out += fmt12(eta);
      out += ',';
      switch (region) {
        case AttackRegion::Case1:
          out += "case1";
          break;
        case AttackRegion::Case2:
          out += "case2";
          break;
        default:
          out += "none";
          break;
      }
      out += ',';
      out += fmt12(attack);
      out += ',';
      out += fmt12(thr);
      out += '\n';
    }
  }
  return out;
}

}  // namespace diqpq
