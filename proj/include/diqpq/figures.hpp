#pragma once

#include <string>

#include "diqpq/bell.hpp"

namespace diqpq {

// CSV reproductions of the threshold plots. Numbers are written with 12
// significant digits in the C locale so output is byte-stable.

// Grid of the eta-corrected threshold over (theta, eta) at
// psi = (pi/4, 3pi/4). theta runs up to pi/2 and eta covers [0.83, 1].
std::string figure3_csv();

// Threshold vs theta at fixed eta for the three (psi1, psi2) pairs
// (pi/4, 3pi/4), (3pi/16, 13pi/16), (9pi/32, 23pi/32).
std::string figure4_csv();  // eta = 1
std::string figure5_csv();  // eta = 0.83

std::string figure_csv(int figure_id);

// Region sweep: one row per (eps, eta) grid cell with the classified
// region and both analytic statistics.
std::string attack_scan_csv(const BellAngles& angles, double eps_min, double eps_max,
                            double eta_min, double eta_max, int resolution);

}  // namespace diqpq
