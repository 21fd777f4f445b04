#include "swkb/swkb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "swkb/quadrature.hpp"

namespace swkb {

std::string to_string(Method m) {
  switch (m) {
    case Method::swkb_quadrature: return "swkb_quadrature";
    case Method::contour: return "contour";
    case Method::closed_form: return "closed_form";
    case Method::numerov: return "numerov";
  }
  return "unknown";
}

namespace {

double classical_momentum2(const PotentialSpec& spec, double E, double x) {
  const double w = omega_x(spec, x);
  return E - w * w;
}

// Newton on E - omega^2(x), kept only while it lowers the residual.
double polish_turning_point(const PotentialSpec& spec, double E, double x) {
  for (int it = 0; it < 8; ++it) {
    if (!(x > spec.lo && x < spec.hi)) break;
    const double w = omega_x(spec, x), dw = omega_x_derivative(spec, x);
    const double F = E - w * w, dF = -2.0 * w * dw;
    if (dF == 0.0 || F == 0.0) break;
    const double cand = x - F / dF;
    if (!(cand > spec.lo && cand < spec.hi)) break;
    if (std::abs(classical_momentum2(spec, E, cand)) >= std::abs(F)) break;
    x = cand;
  }
  return x;
}

}  // namespace

TurningPoints turning_points(const PotentialSpec& spec, double E) {
  if (!(E > 0)) throw DomainError("turning_points: energy must be positive");
  const double thr = binding_threshold(spec);
  if (!(E < thr)) {
    std::ostringstream msg;
    msg << "unbound energy: E=" << E << " is not below the threshold " << thr << " of " << spec.key;
    throw UnboundEnergyError(msg.str());
  }
  const auto& num = spec.omega_y.num();
  const auto& den = spec.omega_y.den();
  const Polynomial<double> N = (den * den) * cplx(E) - num * num;

  constexpr double tol = 1e-6;
  std::vector<double> xs;
  for (const cplx& r : find_roots(N)) {
    bool on_axis = false;
    switch (spec.mapping) {
      case Mapping::identity: on_axis = std::abs(r.imag()) <= tol * std::max(1.0, std::abs(r)); break;
      case Mapping::exp: on_axis = r.real() > 0 && std::abs(r.imag()) <= tol * std::abs(r); break;
      case Mapping::exp_i: on_axis = std::abs(std::abs(r) - 1.0) <= tol; break;
    }
    if (!on_axis) continue;
    const double x = from_mapped(spec, r);
    if (x > spec.lo && x < spec.hi) xs.push_back(x);
  }
  if (xs.size() != 2) {
    std::ostringstream msg;
    msg << "unbound energy: " << xs.size() << " real turning points of " << spec.key << " at E=" << E;
    throw UnboundEnergyError(msg.str());
  }
  std::sort(xs.begin(), xs.end());
  TurningPoints tp{polish_turning_point(spec, E, xs[0]), polish_turning_point(spec, E, xs[1])};
  if (tp.x1 > tp.x2) std::swap(tp.x1, tp.x2);
  for (int k = 1; k < 8; ++k) {
    const double x = tp.x1 + (tp.x2 - tp.x1) * k / 8.0;
    if (x > tp.x1 && x < tp.x2 && !(classical_momentum2(spec, E, x) > 0)) {
      std::ostringstream msg;
      msg << "unbound energy: classical region of " << spec.key << " at E=" << E << " is not connected";
      throw UnboundEnergyError(msg.str());
    }
  }
  return tp;
}

double swkb_integral(const PotentialSpec& spec, double E, const SwkbOptions& opt) {
  if (E == 0.0) return 0.0;
  const TurningPoints tp = turning_points(spec, E);
  const double xm = 0.5 * (tp.x1 + tp.x2), xh = 0.5 * (tp.x2 - tp.x1);
  const double half_pi = 0.5 * std::numbers::pi;

  auto integrate = [&](int order) {
    const GaussRule& g = gauss_legendre(order);
    double acc = 0.0;
    for (int k = 0; k < order; ++k) {
      const double th = half_pi * g.x[k];
      const double x = std::clamp(xm + xh * std::sin(th), tp.x1, tp.x2);
      double p2 = 0.0;
      if (x > spec.lo && x < spec.hi) p2 = classical_momentum2(spec, E, x);
      acc += g.w[k] * std::sqrt(std::max(0.0, p2)) * xh * std::cos(th);
    }
    return acc * half_pi / std::numbers::pi;
  };

  int order = opt.order_start;
  double prev = integrate(order);
  while (2 * order <= opt.order_max) {
    order *= 2;
    const double cur = integrate(order);
    if (std::abs(cur - prev) <= opt.tol_integral * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw ConvergenceError("swkb_integral: Gauss-Legendre did not converge at order " +
                         std::to_string(order));
}

EnergyRoot solve_increasing(const std::function<double(double)>& f, double lo, double threshold,
                            double scale, double tol_f) {
  const double phi = std::numbers::phi;
  double a = lo, fa = f(lo);
  if (fa > 0) throw DomainError("energy bracket: function positive at the lower end");
  if (fa == 0) return {lo, 0.0, 0.0};

  double b = 0.0, fb = 0.0;
  bool found = false;
  if (std::isfinite(threshold)) {
    double gap = threshold - lo;
    const double floor_gap = 1e-9 * std::max(1.0, std::abs(threshold));
    while (gap > floor_gap) {
      gap /= phi;
      const double cand = threshold - gap;
      double fc;
      try {
        fc = f(cand);
      } catch (const UnboundEnergyError&) {
        break;
      }
      if (fc > 0) {
        b = cand;
        fb = fc;
        found = true;
        break;
      }
      a = cand;
      fa = fc;
    }
  } else {
    double step = scale;
    for (int k = 0; k < 200 && !found; ++k) {
      const double cand = a + step;
      const double fc = f(cand);
      if (fc > 0) {
        b = cand;
        fb = fc;
        found = true;
      } else {
        a = cand;
        fa = fc;
        step *= phi;
      }
    }
  }
  if (!found) throw DomainError("level is not bound: no bracket below the binding threshold");

  // Illinois variant of regula falsi.
  int side = 0;
  double c = a, fc = fa;
  for (int it = 0; it < 300; ++it) {
    c = (a * fb - b * fa) / (fb - fa);
    if (!(c > a && c < b)) c = 0.5 * (a + b);
    fc = f(c);
    if (fc == 0.0) return {c, 0.0, b - a};
    if (fc < 0) {
      a = c;
      fa = fc;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = c;
      fb = fc;
      if (side == +1) fa *= 0.5;
      side = +1;
    }
    if (std::abs(fc) <= 1e-3 * tol_f || (b - a) <= 1e-15 * std::max(1.0, std::abs(c))) break;
  }
  return {c, std::abs(fc), b - a};
}

QuantizationResult solve_level(const PotentialSpec& spec, int n, const SwkbOptions& opt) {
  if (n < 0) throw DomainError("level index must be non-negative");
  QuantizationResult r;
  r.n = n;
  r.method = Method::swkb_quadrature;
  if (n == 0) return r;
  auto f = [&](double E) { return swkb_integral(spec, E, opt) / spec.hbar - n; };
  const EnergyRoot root = solve_increasing(f, 0.0, binding_threshold(spec), 1.0, opt.tol_level);
  r.energy = root.energy;
  r.residual = root.residual;
  r.error_estimate = root.bracket_width;
  if (!(r.residual <= opt.tol_level)) {
    std::ostringstream msg;
    msg << "solve_level: residual " << r.residual << " above tolerance for n=" << n;
    throw ConvergenceError(msg.str());
  }
  return r;
}

}  // namespace swkb
