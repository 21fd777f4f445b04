#pragma once

// Reference computations written independently of the library's algorithms.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "swkb/catalog.hpp"

namespace oracle {

using swkb::PotentialId;
using swkb::PotentialSpec;

// Superpotentials written directly in x.
inline std::function<double(double)> closed_omega(const PotentialSpec& s) {
  const double A = s.params.count("A") ? s.params.at("A") : 0.0;
  const double B = s.params.count("B") ? s.params.at("B") : 0.0;
  const double a = s.alpha;
  switch (s.id) {
    case PotentialId::eckart: return [=](double x) { return -A / std::tanh(a * x) + B / A; };
    case PotentialId::scarf2: return [=](double x) { return A * std::tanh(a * x) + B / std::cosh(a * x); };
    case PotentialId::rosen_morse2: return [=](double x) { return A * std::tanh(a * x) + B / A; };
    case PotentialId::poschl_teller:
      return [=](double x) { return A / std::tanh(a * x) - B / std::sinh(a * x); };
    case PotentialId::scarf1: return [=](double x) { return A * std::tan(a * x) - B / std::cos(a * x); };
    case PotentialId::rosen_morse1: return [=](double x) { return -A / std::tan(a * x) - B / A; };
    case PotentialId::nonexact1:
      return [](double x) {
        const double x2 = x * x;
        return (-6 - x2 + 3 * x2 * x2 + 2 * x2 * x2 * x2) / (x * (4 + 6 * x2 + 2 * x2 * x2));
      };
    default: return {};
  }
}

// Bisection on a sign change of E - w^2 located by scanning.
inline double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

struct Interval {
  double x1, x2;
};

// Classical interval of E - w(x)^2 > 0 on [lo, hi] by a fine scan and bisection.
inline Interval classical_interval(const std::function<double(double)>& w, double E, double lo, double hi) {
  auto g = [&](double x) { return E - w(x) * w(x); };
  const int N = 200000;
  double first = NAN, last = NAN;
  double xp = lo, gp = g(lo);
  for (int k = 1; k <= N; ++k) {
    const double x = lo + (hi - lo) * k / N;
    const double gx = g(x);
    if (gp <= 0 && gx > 0 && std::isnan(first)) first = bisect(g, xp, x);
    if (gp > 0 && gx <= 0) last = bisect(g, xp, x);
    xp = x;
    gp = gx;
  }
  if (std::isnan(first) || std::isnan(last)) throw std::runtime_error("oracle: no classical interval");
  return {first, last};
}

// Double-exponential (tanh-sinh) quadrature on [a, b].
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, double h = 1.0 / 64) {
  const double r = 0.5 * (b - a);
  const double half_pi = 0.5 * M_PI;
  double sum = 0.0;
  for (int k = -int(6.0 / h); k <= int(6.0 / h); ++k) {
    const double t = k * h;
    const double u = half_pi * std::sinh(t);
    const double xi = std::tanh(u);
    const double w = half_pi * std::cosh(t) / (std::cosh(u) * std::cosh(u));
    if (w < 1e-300) continue;
    // Distance to the nearest end, computed without cancellation.
    const double e = 1.0 / (std::exp(2 * std::abs(u)) + 1.0) * 2.0;
    const double x = xi >= 0 ? b - r * e : a + r * e;
    if (!(x > a && x < b)) continue;
    sum += w * f(x);
  }
  return sum * r * h;
}

// (1/pi) * integral of sqrt(E - w^2) across the classical interval.
inline double swkb_action(const PotentialSpec& s, double E) {
  const auto w = closed_omega(s);
  const double lo = std::isfinite(s.lo) ? s.lo + 1e-9 : -40.0 / s.alpha;
  const double hi = std::isfinite(s.hi) ? s.hi - 1e-9 : 40.0 / s.alpha;
  const Interval iv = classical_interval(w, E, lo, hi);
  auto f = [&](double x) { return std::sqrt(std::max(0.0, E - w(x) * w(x))); };
  return tanh_sinh(f, iv.x1, iv.x2) / M_PI;
}

}  // namespace oracle
