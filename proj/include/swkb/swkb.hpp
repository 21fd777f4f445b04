#pragma once

#include <functional>
#include <string>

#include "swkb/catalog.hpp"

namespace swkb {

struct TurningPoints {
  double x1;
  double x2;
};

enum class Method { swkb_quadrature, contour, closed_form, numerov };
std::string to_string(Method m);

struct QuantizationResult {
  int n = 0;
  double energy = 0.0;
  Method method = Method::swkb_quadrature;
  double residual = 0.0;
  double error_estimate = 0.0;
};

struct SwkbOptions {
  double tol_integral = 1e-11;
  double tol_level = 1e-10;
  int order_start = 64;
  int order_max = 4096;
};

// The two real roots of E - omega^2 bracketing the classical region.
TurningPoints turning_points(const PotentialSpec& spec, double E);

// (1/pi) * integral of sqrt(E - omega^2) between the turning points.
double swkb_integral(const PotentialSpec& spec, double E, const SwkbOptions& opt = {});

// Energy with swkb_integral(E) = n hbar.
QuantizationResult solve_level(const PotentialSpec& spec, int n, const SwkbOptions& opt = {});

// Shared root bracketing for increasing functions of the energy on (lo, threshold).
// f must return value minus target; throws DomainError if no sign change is found
// below the threshold.
struct EnergyRoot {
  double energy;
  double residual;
  double bracket_width;
};
EnergyRoot solve_increasing(const std::function<double(double)>& f, double lo, double threshold,
                            double scale, double tol_f);

}  // namespace swkb
