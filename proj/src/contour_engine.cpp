#include "swkb/contour_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace swkb {

std::string to_string(CutKind k) {
  switch (k) {
    case CutKind::classical: return "classical";
    case CutKind::mirror: return "mirror";
    case CutKind::other: return "other";
  }
  return "other";
}

std::string to_string(MirrorMap m) {
  switch (m) {
    case MirrorMap::none: return "none";
    case MirrorMap::negate: return "y->-y";
    case MirrorMap::invert: return "y->1/y";
    case MirrorMap::negate_invert: return "y->-1/y";
  }
  return "none";
}

cplx apply(MirrorMap m, cplx y) {
  switch (m) {
    case MirrorMap::none: return y;
    case MirrorMap::negate: return -y;
    case MirrorMap::invert: return 1.0 / y;
    case MirrorMap::negate_invert: return -1.0 / y;
  }
  return y;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTolQuad = 1e-11;

double sort_angle(cplx y) {
  double a = std::arg(y);
  if (a < -1e-12) a += kTwoPi;
  return std::max(a, 0.0);
}

void sort_points(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    const double ra = std::abs(a), rb = std::abs(b);
    if (std::abs(ra - rb) > 1e-9 * std::max(1.0, std::max(ra, rb))) return ra < rb;
    return sort_angle(a) < sort_angle(b);
  });
}

// Groups numerically split multiple roots and returns cluster centroids.
std::vector<cplx> distinct(const std::vector<cplx>& roots, double rel = 1e-4) {
  std::vector<cplx> out;
  std::vector<int> count;
  for (const cplx& r : roots) {
    bool merged = false;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (std::abs(out[k] - r) <= rel * std::max(1.0, std::abs(r))) {
        out[k] = (out[k] * static_cast<double>(count[k]) + r) / static_cast<double>(count[k] + 1);
        ++count[k];
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.push_back(r);
      count.push_back(1);
    }
  }
  return out;
}

// Minimal total-length perfect matching by dynamic programming over subsets.
std::vector<std::pair<int, int>> min_weight_matching(const std::vector<cplx>& p) {
  const int n = static_cast<int>(p.size());
  if (n % 2) throw DomainError("census: odd number of non-classical branch points");
  if (n > 20) throw DomainError("census: too many branch points for exact matching");
  const int full = (1 << n) - 1;
  std::vector<double> best(1 << n, std::numeric_limits<double>::infinity());
  std::vector<int> choice(1 << n, -1);
  best[full] = 0.0;
  // best[mask]: cheapest matching of the points not in mask.
  for (int mask = full - 1; mask >= 0; --mask) {
    int i = 0;
    while (mask & (1 << i)) ++i;
    for (int j = i + 1; j < n; ++j) {
      if (mask & (1 << j)) continue;
      const int next = mask | (1 << i) | (1 << j);
      const double c = std::abs(p[i] - p[j]) + best[next];
      if (c < best[mask]) {
        best[mask] = c;
        choice[mask] = j;
      }
    }
  }
  std::vector<std::pair<int, int>> pairs;
  int mask = 0;
  while (mask != full) {
    int i = 0;
    while (mask & (1 << i)) ++i;
    const int j = choice[mask];
    pairs.emplace_back(i, j);
    mask |= (1 << i) | (1 << j);
  }
  return pairs;
}

bool same_point(cplx a, cplx b) { return std::abs(a - b) <= 1e-7 * (1.0 + std::abs(a)); }

}  // namespace

SingularityCensus census(const PotentialSpec& spec, double E) {
  SingularityCensus c;
  c.energy = E;
  const auto& num = spec.omega_y.num();
  const auto& den = spec.omega_y.den();

  std::vector<cplx> poles = distinct(find_roots(den));
  if (spec.mapping != Mapping::identity) {
    bool has_zero = false;
    for (auto& p : poles)
      if (std::abs(p) <= 1e-9) {
        p = 0.0;
        has_zero = true;
      }
    if (!has_zero) poles.push_back(0.0);
  }
  sort_points(poles);
  c.fixed_poles = poles;
  c.infinity = true;

  const TurningPoints tp = turning_points(spec, E);
  const cplx y1 = to_mapped(spec, tp.x1), y2 = to_mapped(spec, tp.x2);
  const Polynomial<double> N = (den * den) * cplx(E) - num * num;
  std::vector<cplx> bp = find_roots(N);
  auto nearest = [&](cplx y) {
    return static_cast<int>(std::min_element(bp.begin(), bp.end(), [&](cplx a, cplx b) {
                              return std::abs(a - y) < std::abs(b - y);
                            }) - bp.begin());
  };
  const int i1 = nearest(y1);
  int i2 = nearest(y2);
  if (i1 == i2) throw DomainError("census: turning points coincide with one branch point");
  const cplx c1 = bp[i1], c2 = bp[i2];
  std::vector<cplx> rest;
  for (int k = 0; k < static_cast<int>(bp.size()); ++k)
    if (k != i1 && k != i2) rest.push_back(bp[k]);

  std::vector<BranchCut> others;
  for (const auto& [i, j] : min_weight_matching(rest)) others.push_back({rest[i], rest[j], CutKind::other});

  // Mirror: first involution that preserves E - omega^2 and sends the classical
  // cut onto a different cut.
  auto Q = [&](cplx y) { return E - std::pow(spec.omega_y(y), 2); };
  const cplx probes[] = {{0.31, 0.47}, {-0.73, 0.29}, {1.37, -0.61}, {0.52, -1.21}};
  for (MirrorMap m : {MirrorMap::negate, MirrorMap::invert, MirrorMap::negate_invert}) {
    bool symmetric = true;
    for (const cplx& y : probes)
      if (std::abs(Q(apply(m, y)) - Q(y)) > 1e-9 * (1.0 + std::abs(Q(y)))) symmetric = false;
    if (!symmetric) continue;
    const cplx m1 = apply(m, c1), m2 = apply(m, c2);
    if ((same_point(m1, c1) && same_point(m2, c2)) || (same_point(m1, c2) && same_point(m2, c1)))
      continue;
    for (auto& cut : others) {
      if ((same_point(cut.a, m1) && same_point(cut.b, m2)) || (same_point(cut.a, m2) && same_point(cut.b, m1))) {
        cut.kind = CutKind::mirror;
        c.mirror = m;
        break;
      }
    }
    if (c.mirror != MirrorMap::none) break;
  }

  c.branch_points = bp;
  sort_points(c.branch_points);
  c.branch_cuts.push_back({c1, c2, CutKind::classical});
  for (const auto& cut : others)
    if (cut.kind == CutKind::mirror) c.branch_cuts.push_back(cut);
  for (const auto& cut : others)
    if (cut.kind == CutKind::other) c.branch_cuts.push_back(cut);

  for (std::size_t i = 0; i < c.branch_cuts.size(); ++i)
    for (std::size_t j = i + 1; j < c.branch_cuts.size(); ++j)
      if (segments_intersect(c.branch_cuts[i].a, c.branch_cuts[i].b, c.branch_cuts[j].a, c.branch_cuts[j].b))
        throw DomainError("census: branch cuts intersect; contour decomposition undefined");
  return c;
}

ContourProblem::ContourProblem(const PotentialSpec& spec, double E) : spec_(spec) {
  census_ = census(spec, E);
  const auto& num = spec.omega_y.num();
  const auto& den = spec.omega_y.den();

  // Scaled by the closest pair of singular points: mirror maps such as y -> 1/y
  // spread the census over decades, so the widest separation is no guide.
  std::vector<cplx> marks = census_.branch_points;
  marks.insert(marks.end(), census_.fixed_poles.begin(), census_.fixed_poles.end());
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < marks.size(); ++i)
    for (std::size_t j = i + 1; j < marks.size(); ++j) closest = std::min(closest, std::abs(marks[i] - marks[j]));
  plane_.branch_points = census_.branch_points;
  for (const auto& cut : census_.branch_cuts) plane_.cuts.emplace_back(cut.a, cut.b);
  plane_.clearance = 1e-3 * (std::isfinite(closest) ? closest : 1.0);

  f_.radicand = (den * den) * cplx(E) - num * num;
  f_.denominator = den;
  f_.mapping = spec.mapping;
  f_.alpha = spec.alpha;

  // Just below the classical cut in x, where sqrt(E - omega^2) is positive.
  const TurningPoints tp = turning_points(spec, E);
  const double eps = 1e-3 * std::abs(tp.x2 - tp.x1);
  const cplx ya = to_mapped(spec, cplx(0.5 * (tp.x1 + tp.x2), -eps));
  cplx root = std::sqrt(E - std::pow(spec.omega_y(ya), 2));
  if (root.real() < 0) root = -root;
  f_.anchor = {ya, root * den(ya)};
}

void ContourProblem::attach_anchor_path(Contour& c) const {
  c.anchor_path = plane_.route(f_.anchor.point, c.point(0.0));
}

Contour ContourProblem::pole_contour(cplx pole) const {
  double gap = std::numeric_limits<double>::infinity();
  for (const cplx& p : census_.fixed_poles)
    if (p != pole) gap = std::min(gap, std::abs(p - pole));
  for (const cplx& b : census_.branch_points) gap = std::min(gap, std::abs(b - pole));
  gap = std::min(gap, plane_.distance_to_cuts(pole));
  const double r = std::max(0.5 * gap, plane_.clearance);
  if (!(gap > r + plane_.clearance)) {
    std::ostringstream msg;
    msg << "pole at " << pole << " is within " << gap << " of other singular structure; "
        << "circle cannot keep clearance " << plane_.clearance;
    throw DomainError(msg.str());
  }
  Contour c = Contour::circle(pole, r);
  attach_anchor_path(c);
  return c;
}

Contour ContourProblem::infinity_contour() const {
  double rmax = 0.0;
  for (const cplx& p : census_.fixed_poles) rmax = std::max(rmax, std::abs(p));
  for (const cplx& b : census_.branch_points) rmax = std::max(rmax, std::abs(b));
  const double R = 4.0 * std::max(rmax, 1e-300);
  Contour c = Contour::circle(0.0, 1.0 / R);
  c.inverted = true;
  attach_anchor_path(c);
  return c;
}

Contour ContourProblem::cut_contour(const BranchCut& cut) const {
  const cplx m = 0.5 * (cut.a + cut.b), d = 0.5 * (cut.b - cut.a);
  // Modulus of the exterior Joukowski preimage of a point.
  auto preimage = [&](cplx s) {
    const cplx z = (s - m) / d;
    const cplx r = std::sqrt(z * z - 1.0);
    return std::max(std::abs(z + r), std::abs(z - r));
  };
  double rmax = std::numeric_limits<double>::infinity();
  for (const cplx& p : census_.fixed_poles) rmax = std::min(rmax, preimage(p));
  for (const cplx& b : census_.branch_points)
    if (!same_point(b, cut.a) && !same_point(b, cut.b)) rmax = std::min(rmax, preimage(b));
  for (const auto& [a, b] : plane_.cuts) {
    if (same_point(a, cut.a) && same_point(b, cut.b)) continue;
    for (int k = 0; k <= 32; ++k) rmax = std::min(rmax, preimage(a + (b - a) * (k / 32.0)));
  }
  double rho = std::isfinite(rmax) ? std::sqrt(rmax) : 2.0;
  const double ad = std::abs(d);
  // Keep the ellipse tips at least one clearance away from the branch points.
  const double rho_min = [&] {
    const double a_major = ad + plane_.clearance;
    return (a_major + std::sqrt(a_major * a_major - ad * ad)) / ad;
  }();
  if (rho < rho_min) {
    if (rho_min >= rmax) {
      std::ostringstream msg;
      msg << "cut (" << cut.a << ", " << cut.b << ") is too crowded for a clearance of "
          << plane_.clearance;
      throw DomainError(msg.str());
    }
    rho = rho_min;
  }
  const double clearance = 0.5 * ad * (rho - 1.0 / rho);
  Contour c = Contour::stadium(cut.a, cut.b, clearance);
  attach_anchor_path(c);
  return c;
}

ContourValue ContourProblem::evaluate(const Contour& c) const {
  return contour_integral_converged(c, f_, quad_);
}

cplx pole_contribution(const PotentialSpec& spec, double E, cplx pole) {
  const ContourProblem cp(spec, E);
  bool known = false;
  for (const cplx& p : cp.singularities().fixed_poles)
    if (same_point(p, pole)) {
      pole = p;
      known = true;
    }
  if (!known) {
    std::ostringstream msg;
    msg << pole << " is not a fixed pole of " << spec.key;
    throw DomainError(msg.str());
  }
  return cp.evaluate(cp.pole_contour(pole)).value;
}

cplx infinity_contribution(const PotentialSpec& spec, double E) {
  const ContourProblem cp(spec, E);
  return cp.evaluate(cp.infinity_contour()).value;
}

ContourDecomposition decompose(const PotentialSpec& spec, double E) {
  const ContourProblem cp(spec, E);
  const auto& cs = cp.singularities();
  ContourDecomposition d;
  d.energy = E;
  cplx total = 0.0;
  for (const cplx& p : cs.fixed_poles) {
    const cplx v = cp.evaluate(cp.pole_contour(p)).value;
    d.J_gamma.push_back({p, v});
    total += v;
  }
  d.J_GammaR = cp.evaluate(cp.infinity_contour()).value;
  for (const auto& cut : cs.branch_cuts) {
    const cplx v = cp.evaluate(cp.cut_contour(cut)).value;
    total += v;
    switch (cut.kind) {
      case CutKind::classical: d.J_classical_cut = v; break;
      case CutKind::mirror: d.J_mirror_cut = v; break;
      case CutKind::other:
        d.other_cuts.push_back(cut);
        d.J_other_cuts.push_back(v);
        break;
    }
  }
  d.closure_residual = std::abs(d.J_GammaR - total);
  return d;
}

namespace {

// Real part of J_GammaR - sum J_gamma; the imaginary part must vanish.
double pole_side(const PotentialSpec& spec, double E) {
  const ContourProblem cp(spec, E);
  cplx v = cp.evaluate(cp.infinity_contour()).value;
  for (const cplx& p : cp.singularities().fixed_poles) v -= cp.evaluate(cp.pole_contour(p)).value;
  if (std::abs(v.imag()) > 10 * kTolQuad * std::max(1.0, std::abs(v))) {
    std::ostringstream msg;
    msg << "pole-side sum at E=" << E << " has imaginary part " << v.imag();
    throw ConvergenceError(msg.str());
  }
  return v.real();
}

}  // namespace

QuantizationResult quantize_by_contours(const PotentialSpec& spec, int n, double tol) {
  if (n < 0) throw DomainError("level index must be non-negative");
  const double probe = solve_level(spec, 1).energy;
  for (const auto& cut : census(spec, probe).branch_cuts)
    if (cut.kind == CutKind::other)
      throw DomainError(spec.key +
                        ": branch cuts other than the classical and mirror cuts are present, so the "
                        "pole-only condition does not close; use defect_report");
  QuantizationResult r;
  r.n = n;
  r.method = Method::contour;
  if (n == 0) return r;
  auto f = [&](double E) {
    if (E == 0.0) return -2.0 * n;
    return pole_side(spec, E) / spec.hbar - 2.0 * n;
  };
  const EnergyRoot root = solve_increasing(f, 0.0, binding_threshold(spec), 1.0, tol);
  r.energy = root.energy;
  r.residual = root.residual;
  r.error_estimate = root.bracket_width;
  if (!(r.residual <= tol)) {
    std::ostringstream msg;
    msg << "quantize_by_contours: residual " << r.residual << " above tolerance for n=" << n;
    throw ConvergenceError(msg.str());
  }
  return r;
}

DefectReport defect_report(const PotentialSpec& spec, double E_exact, int n) {
  DefectReport r;
  r.id = spec.key;
  r.n = n;
  r.E_exact = E_exact;
  r.J_swkb = swkb_integral(spec, E_exact);
  r.J_obc_indirect = 2.0 * (n * spec.hbar - r.J_swkb);
  cplx direct = 0.0;
  if (E_exact != 0.0) {
    // At E = 0 the radicand is -omega^2, a perfect square: no cuts at all.
    const ContourProblem cp(spec, E_exact);
    for (const auto& cut : cp.singularities().branch_cuts) {
      if (cut.kind != CutKind::other) continue;
      direct += cp.evaluate(cp.cut_contour(cut)).value;
      ++r.other_cut_count;
    }
  }
  r.J_obc_direct = direct.real();
  r.J_obc_direct_imag = direct.imag();
  r.consistency_gap = std::abs(direct - r.J_obc_indirect);
  return r;
}

}  // namespace swkb
