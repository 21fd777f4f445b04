#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "swkb/branch.hpp"
#include "swkb/contour.hpp"
#include "swkb/polynomial.hpp"
#include "swkb/quadrature.hpp"

using namespace swkb;

namespace {

// Eigenvalues of the companion matrix: an oracle independent of the iterative root finder.
std::vector<cplx> companion_roots(const std::vector<cplx>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C);
  std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return r;
}

// Greedy one-to-one matching distance between two root sets.
double match_distance(std::vector<cplx> a, std::vector<cplx> b) {
  double worst = 0.0;
  for (const cplx& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

Polynomial<double> from_vector(const std::vector<cplx>& c) {
  Polynomial<double>::Coeffs v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t k = 0; k < c.size(); ++k) v(static_cast<Eigen::Index>(k)) = c[k];
  return Polynomial<double>(v);
}

}  // namespace

TEST_SUITE("complex_plane") {
  TEST_CASE("roots of y^2 - 1") {
    const auto r = find_roots(Polynomial<double>{-1.0, 0.0, 1.0});
    REQUIRE(r.size() == 2);
    CHECK(match_distance(r, {1.0, -1.0}) < 1e-14);
  }

  TEST_CASE("roots agree with the companion-matrix eigenvalues") {
    std::mt19937 rng(12345);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 40; ++trial) {
      const int deg = 2 + trial % 11;
      std::vector<cplx> c(deg + 1);
      for (auto& x : c) x = cplx(nd(rng), nd(rng));
      const auto p = from_vector(c);
      const auto r = find_roots(p);
      REQUIRE(static_cast<int>(r.size()) == deg);
      CHECK(match_distance(r, companion_roots(c)) < 1e-9);
      for (const cplx& z : r) CHECK(std::abs(p(z)) <= 1e-10 * p.magnitude_at(z));
    }
  }

  TEST_CASE("repeated and zero roots are reported with multiplicity") {
    // y^2 (y - 1)^3 (y + 2)
    const Polynomial<double> p = Polynomial<double>::monomial(2) * Polynomial<double>::linear_factor(1.0) *
                                 Polynomial<double>::linear_factor(1.0) * Polynomial<double>::linear_factor(1.0) *
                                 Polynomial<double>::linear_factor(-2.0);
    const auto r = find_roots(p);
    REQUIRE(r.size() == 6);
    CHECK(std::count(r.begin(), r.end(), cplx(0.0)) == 2);
    int near_one = 0;
    for (const cplx& z : r)
      if (std::abs(z - 1.0) < 1e-4) ++near_one;
    CHECK(near_one == 3);
    CHECK(match_distance(r, {0.0, 0.0, 1.0, 1.0, 1.0, -2.0}) < 1e-4);
  }

  TEST_CASE("polynomial invariants and arithmetic") {
    const Polynomial<double> p{1.0, 2.0, 0.0, 0.0};
    CHECK(p.degree() == 1);
    CHECK(p.leading() == cplx(2.0));
    const Polynomial<double> q = p * p - Polynomial<double>{1.0, 4.0, 4.0};
    CHECK(q.is_zero());
    CHECK(derivative(Polynomial<double>{5.0, 3.0, 2.0})(cplx(2.0)) == cplx(11.0));
    CHECK_THROWS_AS(find_roots(Polynomial<double>{0.0}), DomainError);
  }

  TEST_CASE("rational function cancels common roots") {
    const RationalFunction<double> r(Polynomial<double>{-1.0, 0.0, 1.0}, Polynomial<double>{-1.0, 1.0});
    CHECK(r.den().degree() == 0);
    CHECK(r.num().degree() == 1);
    CHECK(std::abs(r(cplx(3.0)) - 4.0) < 1e-12);
  }

  TEST_CASE("rational derivative matches central differences") {
    const RationalFunction<double> r(Polynomial<double>{1.0, -2.0, 0.5, 1.0}, Polynomial<double>{2.0, 0.0, 1.0});
    const auto dr = r.derivative();
    for (double x : {-1.3, 0.2, 0.9, 2.5}) {
      const double h = 1e-5;
      const cplx fd = (r(cplx(x + h)) - r(cplx(x - h))) / (2 * h);
      CHECK(std::abs(dr(cplx(x)) - fd) < 1e-8);
    }
  }

  TEST_CASE("sqrt continuation follows the product of principal square roots") {
    // q(y) = (y - a)(y - b); continuous-argument product formula as the oracle.
    const cplx a(-1.0, 0.0), b(1.0, 0.0);
    auto q = [&](cplx y) { return (y - a) * (y - b); };
    const int steps = 400;
    std::vector<cplx> loop;
    const cplx c(1.0, 0.0);
    for (int k = 1; k <= steps; ++k) loop.push_back(c + 0.5 * std::polar(1.0, 2 * std::numbers::pi * k / steps));
    BranchedSqrtState s{c + 0.5, std::sqrt(q(c + 0.5))};
    double arg_a = std::arg(s.point - a), arg_b = std::arg(s.point - b);
    cplx prev = s.point;
    for (const cplx& y : loop) {
      s = continue_sqrt(s, std::span<const cplx>(&y, 1), q);
      arg_a += std::arg((y - a) / (prev - a));
      arg_b += std::arg((y - b) / (prev - b));
      prev = y;
      const cplx oracle = std::sqrt(std::abs(y - a) * std::abs(y - b)) * std::polar(1.0, 0.5 * (arg_a + arg_b));
      CHECK(std::abs(s.value - oracle) < 1e-12);
      CHECK(std::abs(s.value * s.value - q(y)) <= 1e-12 * (1.0 + std::abs(q(y))));
    }
    // Going once around one branch point flips the sheet.
    CHECK(std::abs(s.value + std::sqrt(q(c + 0.5))) < 1e-12);
  }

  TEST_CASE("sqrt continuation through a branch point is refused") {
    auto q = [](cplx y) { return y; };
    BranchedSqrtState s{cplx(-1.0, 0.0), cplx(0.0, 1.0)};
    const cplx target(0.0, 0.0);
    CHECK_THROWS_AS(continue_sqrt(s, std::span<const cplx>(&target, 1), q), BranchAmbiguityError);
    const cplx beyond(1.0, 1e-300);
    CHECK_THROWS_AS(continue_sqrt(s, std::span<const cplx>(&beyond, 1), q), BranchAmbiguityError);
  }

  TEST_CASE("known zeros keep a long step from skipping a pair of branch points") {
    // Passing just below both roots of y^2 - 0.01 turns the phase by -pi.
    auto q = [](cplx y) { return y * y - 0.01; };
    const cplx from(1.0, -1e-3), to(-1.0, -1e-3);
    const BranchedSqrtState s{from, std::sqrt(q(from))};
    const cplx zeros[] = {0.1, -0.1};
    ContinuationOptions opt;
    opt.zeros = zeros;
    const BranchedSqrtState r = continue_sqrt(s, std::span<const cplx>(&to, 1), q, opt);
    // Oracle: the product of principal roots of the two factors is analytic off the real segment
    // (-inf, 0.1], and this path stays below it.
    const cplx oracle = std::sqrt(to - 0.1) * std::sqrt(to + 0.1);
    CHECK(std::abs(s.value - std::sqrt(from - 0.1) * std::sqrt(from + 0.1)) < 1e-12);
    CHECK(std::abs(r.value - oracle) < 1e-12);
    CHECK(r.value.real() < 0.0);
  }

  TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    for (int n : {4, 16, 64}) {
      const GaussRule& g = gauss_legendre(n);
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += g.w[i] * std::pow(g.x[i], 2 * k);
        CHECK(std::abs(s - 2.0 / (2 * k + 1)) < 1e-13);
      }
    }
  }

  TEST_CASE("trapezoid contour integral of a branched function") {
    // (1/2 pi) * contour integral of sqrt(y^2 - 1) on |y| = 3: the 1/y coefficient is -1/2.
    BranchedIntegrand f;
    f.radicand = Polynomial<double>{-1.0, 0.0, 1.0};
    f.anchor = {cplx(3.0), std::sqrt(cplx(8.0))};
    Contour c = Contour::circle(0.0, 3.0);
    const ContourValue v = contour_integral_converged(c, f);
    CHECK(std::abs(v.value - cplx(0.0, -0.5)) < 1e-12);
    c.orientation = Orientation::clockwise;
    CHECK(std::abs(contour_integral_converged(c, f).value - cplx(0.0, 0.5)) < 1e-12);
  }

  TEST_CASE("contour around one branch point is rejected") {
    BranchedIntegrand f;
    f.radicand = Polynomial<double>{-1.0, 0.0, 1.0};
    f.anchor = {cplx(1.5), std::sqrt(cplx(1.25))};
    const Contour c = Contour::circle(1.0, 0.5);
    CHECK_THROWS_AS(contour_integral(c, f, 64), DomainError);
    CHECK_THROWS_AS(contour_integral(c, f, 8), DomainError);
  }

  TEST_CASE("stadium contour encloses a cut") {
    // Ellipse around [-1, 1]: (1/2 pi) * integral of sqrt(y^2 - 1) equals the circle value.
    BranchedIntegrand f;
    f.radicand = Polynomial<double>{-1.0, 0.0, 1.0};
    Contour c = Contour::stadium(-1.0, 1.0, 0.05);
    const cplx y0 = c.point(0.0);
    f.anchor = {cplx(5.0), std::sqrt(cplx(24.0))};
    c.anchor_path = {cplx(5.0)};
    CHECK(std::abs(y0.imag()) < 1e-12);
    CHECK(std::abs(contour_integral_converged(c, f).value - cplx(0.0, -0.5)) < 1e-10);
  }

  TEST_CASE("cut plane routing avoids cuts and branch points") {
    CutPlane plane;
    plane.branch_points = {cplx(-1, 0), cplx(1, 0)};
    plane.cuts = {{cplx(-1, 0), cplx(1, 0)}};
    plane.clearance = 1e-3;
    CHECK_FALSE(plane.segment_admissible(cplx(0, -1), cplx(0, 1)));
    CHECK(plane.segment_admissible(cplx(-2, -1), cplx(-2, 1)));
    const auto path = plane.route(cplx(0, -0.5), cplx(0, 0.5));
    REQUIRE(path.size() >= 2);
    cplx prev(0, -0.5);
    for (const cplx& p : path) {
      CHECK(plane.segment_admissible(prev, p));
      prev = p;
    }
    CHECK(std::abs(path.back() - cplx(0, 0.5)) < 1e-15);
  }
}
