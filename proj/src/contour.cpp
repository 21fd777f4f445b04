#include "swkb/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace swkb {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }
}  // namespace

Contour Contour::circle(cplx c, double r) {
  Contour k;
  k.kind = Kind::circle;
  k.center = c;
  k.radius = r;
  return k;
}

Contour Contour::stadium(cplx a, cplx b, double clearance) {
  Contour k;
  k.kind = Kind::stadium;
  k.end_a = a;
  k.end_b = b;
  k.clearance = clearance;
  return k;
}

cplx Contour::chart_point(double t) const {
  if (kind == Kind::circle) return center + std::polar(radius, t);
  const cplx m = 0.5 * (end_a + end_b), d = 0.5 * (end_b - end_a);
  const double ad = std::abs(d);
  const double rho = (clearance + std::hypot(clearance, ad)) / ad;
  const cplx w = std::polar(rho, t);
  return m + 0.5 * d * (w + 1.0 / w);
}

cplx Contour::chart_tangent(double t) const {
  const cplx I(0, 1);
  if (kind == Kind::circle) return I * std::polar(radius, t);
  const cplx d = 0.5 * (end_b - end_a);
  const double ad = std::abs(d);
  const double rho = (clearance + std::hypot(clearance, ad)) / ad;
  const cplx w = std::polar(rho, t);
  return 0.5 * d * I * (w - 1.0 / w);
}

cplx Contour::point(double t) const {
  const cplx z = chart_point(t);
  return inverted ? 1.0 / z : z;
}

cplx BranchedIntegrand::prefactor(cplx y) const {
  cplx m(1);
  if (mapping == Mapping::exp) m = 1.0 / (alpha * y);
  else if (mapping == Mapping::exp_i) m = 1.0 / (cplx(0, alpha) * y);
  return m / denominator(y);
}

double segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a) * std::conj(ab)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double d1 = cross(q2 - q1, p1 - q1), d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1), d4 = cross(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  const double scale = 1e-14 * (std::abs(p2 - p1) + std::abs(q2 - q1)) *
                       (std::abs(p2 - p1) + std::abs(q2 - q1));
  auto on = [&](double d, cplx a, cplx b, cplx p) {
    return std::abs(d) <= scale && segment_distance(p, a, b) <= 1e-12 * (1 + std::abs(b - a));
  };
  return on(d1, q1, q2, p1) || on(d2, q1, q2, p2) || on(d3, p1, p2, q1) || on(d4, p1, p2, q2);
}

double CutPlane::distance_to_cuts(cplx p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : cuts) d = std::min(d, segment_distance(p, a, b));
  return d;
}

bool CutPlane::segment_admissible(cplx p, cplx q) const {
  for (const auto& [a, b] : cuts)
    if (segments_intersect(p, q, a, b)) return false;
  for (const auto& bp : branch_points)
    if (segment_distance(bp, p, q) < clearance) return false;
  return true;
}

std::vector<cplx> CutPlane::route(cplx from, cplx to) const {
  if (segment_admissible(from, to)) return {from, to};

  std::vector<cplx> nodes{from, to};
  for (double ring : {3.0, 12.0}) {
    for (const auto& bp : branch_points) {
      for (int k = 0; k < 8; ++k) {
        const cplx w = bp + std::polar(ring * clearance, (k + 0.5) * kTwoPi / 8.0);
        bool ok = distance_to_cuts(w) >= clearance;
        for (const auto& other : branch_points)
          if (std::abs(w - other) < 2.0 * clearance) ok = false;
        if (ok) nodes.push_back(w);
      }
    }
  }

  const std::size_t n = nodes.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> prev(n, -1);
  std::vector<bool> settled(n, false);
  dist[0] = 0.0;
  for (std::size_t iter = 0; iter < n; ++iter) {
    int u = -1;
    for (std::size_t i = 0; i < n; ++i)
      if (!settled[i] && (u < 0 || dist[i] < dist[u])) u = static_cast<int>(i);
    if (u < 0 || !std::isfinite(dist[u])) break;
    settled[u] = true;
    if (u == 1) break;
    for (std::size_t v = 0; v < n; ++v) {
      if (settled[v]) continue;
      const double nd = dist[u] + std::abs(nodes[v] - nodes[u]);
      if (nd < dist[v] && segment_admissible(nodes[u], nodes[v])) {
        dist[v] = nd;
        prev[v] = u;
      }
    }
  }
  if (!settled[1]) {
    std::ostringstream msg;
    msg << "no cut-avoiding path from " << from << " to " << to;
    throw ConvergenceError(msg.str());
  }
  std::vector<cplx> path;
  for (int v = 1; v >= 0; v = prev[v]) path.push_back(nodes[v]);
  return {path.rbegin(), path.rend()};
}

cplx contour_integral(const Contour& c, const BranchedIntegrand& f, int n_points) {
  if (n_points < 16) throw DomainError("contour_integral: n_points below minimum of 16");
  auto q = [&](cplx y) { return f.radicand(y); };
  const std::vector<cplx> zeros = f.radicand.degree() > 0 ? find_roots(f.radicand) : std::vector<cplx>{};
  ContinuationOptions opt;
  opt.zeros = zeros;

  const cplx y0 = c.point(0.0);
  std::vector<cplx> lead = c.anchor_path;
  lead.push_back(y0);
  const BranchedSqrtState start = continue_sqrt(f.anchor, lead, q, opt);

  BranchedSqrtState s = start;
  cplx sum(0);
  for (int k = 0; k < n_points; ++k) {
    const double t = kTwoPi * k / n_points;
    if (k > 0) {
      const cplx y = c.point(t);
      s = continue_sqrt(s, std::span<const cplx>(&y, 1), q, opt);
    }
    const cplx zeta = c.chart_point(t), dzeta = c.chart_tangent(t);
    cplx g = f(s.point, s.value) * dzeta;
    if (c.inverted) g /= zeta * zeta;
    sum += g;
  }
  s = continue_sqrt(s, std::span<const cplx>(&y0, 1), q, opt);
  if (std::abs(s.value - start.value) > 1e-6 * (1.0 + std::abs(start.value)))
    throw DomainError("contour_integral: contour encloses an odd number of branch points");

  cplx result = sum / static_cast<double>(n_points);
  return c.orientation == Orientation::clockwise ? -result : result;
}

ContourValue contour_integral_converged(const Contour& c, const BranchedIntegrand& f,
                                        QuadratureOptions opt) {
  int n = opt.n_start;
  cplx prev = contour_integral(c, f, n);
  while (2 * n <= opt.n_max) {
    n *= 2;
    const cplx cur = contour_integral(c, f, n);
    const double err = std::abs(cur - prev);
    if (err <= opt.tol * std::max(1.0, std::abs(cur))) return {cur, err, n};
    prev = cur;
  }
  std::ostringstream msg;
  msg << "contour quadrature did not converge with " << n << " points";
  throw ConvergenceError(msg.str());
}

}  // namespace swkb
