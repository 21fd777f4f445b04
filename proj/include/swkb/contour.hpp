#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "swkb/branch.hpp"
#include "swkb/polynomial.hpp"

namespace swkb {

enum class Orientation { counterclockwise, clockwise };

// Measure factor dx/dy of the variable mapping.
enum class Mapping { identity, exp, exp_i };

// A closed path. Circles may live in the inverted chart z = 1/y, which is how
// the point at infinity is reached.
struct Contour {
  enum class Kind { circle, stadium };
  Kind kind = Kind::circle;
  cplx center{};        // circle
  double radius = 1.0;  // circle
  cplx end_a{}, end_b{};  // stadium: segment endpoints
  double clearance = 0.0;  // stadium: semi-minor axis of the confocal ellipse
  Orientation orientation = Orientation::counterclockwise;
  bool inverted = false;  // circle drawn in z = 1/y
  std::vector<cplx> anchor_path;  // y-plane polyline ending at point(0)

  static Contour circle(cplx c, double r);
  // Confocal ellipse around the segment [a, b] with semi-minor axis `clearance`.
  static Contour stadium(cplx a, cplx b, double clearance);

  // Chart coordinate and derivative at parameter t in [0, 2 pi).
  cplx chart_point(double t) const;
  cplx chart_tangent(double t) const;
  // Image in the y-plane.
  cplx point(double t) const;
};

// f(y) = sqrt(N(y)) / D(y) * m(y) with m the mapping measure; sqrt(N) is tracked
// from `anchor`.
struct BranchedIntegrand {
  Polynomial<double> radicand;
  Polynomial<double> denominator{cplx(1)};
  Mapping mapping = Mapping::identity;
  double alpha = 1.0;
  BranchedSqrtState anchor{cplx(0), cplx(1)};

  cplx prefactor(cplx y) const;
  cplx operator()(cplx y, cplx sqrt_radicand) const { return sqrt_radicand * prefactor(y); }
};

// Branch points joined by straight cuts, with shortest-path routing that never
// crosses a cut nor comes within `clearance` of a branch point.
struct CutPlane {
  std::vector<cplx> branch_points;
  std::vector<std::pair<cplx, cplx>> cuts;
  double clearance = 1e-3;

  bool segment_admissible(cplx p, cplx q) const;
  double distance_to_cuts(cplx p) const;
  std::vector<cplx> route(cplx from, cplx to) const;
};

double segment_distance(cplx p, cplx a, cplx b);
bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2);

// (1/2 pi) times the closed integral, trapezoidal in the contour parameter.
cplx contour_integral(const Contour& c, const BranchedIntegrand& f, int n_points);

struct QuadratureOptions {
  int n_start = 512;
  int n_max = 1 << 17;
  double tol = 1e-11;
};

struct ContourValue {
  cplx value;
  double error_estimate;
  int n_points;
};

// Doubles n_points until two successive results agree within tol.
ContourValue contour_integral_converged(const Contour& c, const BranchedIntegrand& f,
                                        QuadratureOptions opt = {});

}  // namespace swkb
