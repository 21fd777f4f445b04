#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swkb/contour_engine.hpp"
#include "swkb/oracle.hpp"

using namespace swkb;

namespace {

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

double mid_energy(const PotentialSpec& s) {
  if (s.key == "nonexact1") return 2.5;
  if (s.key == "nonexact2") return 0.04;
  if (s.key == "nonexact3") return 0.5 * binding_threshold(s);
  return closed_form_energy(s, 1);
}

}  // namespace

TEST_SUITE("contour_engine") {
  TEST_CASE("Eckart census") {
    const auto cs = census(make_potential("eckart"), 189.0);
    REQUIRE(cs.fixed_poles.size() == 3);
    CHECK(near(cs.fixed_poles[0], 0.0, 1e-12));
    CHECK(near(cs.fixed_poles[1], 1.0, 1e-12));
    CHECK(near(cs.fixed_poles[2], -1.0, 1e-12));
    CHECK(cs.infinity);
    CHECK(cs.branch_points.size() == 4);
    REQUIRE(cs.branch_cuts.size() == 2);
    CHECK(cs.branch_cuts[0].kind == CutKind::classical);
    CHECK(cs.branch_cuts[1].kind == CutKind::mirror);
    CHECK(cs.mirror == MirrorMap::negate);
    // The classical cut joins the images of the turning points.
    const TurningPoints tp = turning_points(make_potential("eckart"), 189.0);
    const double y1 = std::exp(tp.x1), y2 = std::exp(tp.x2);
    const auto& c = cs.branch_cuts[0];
    CHECK(std::min(std::abs(c.a - y1), std::abs(c.a - y2)) < 1e-9);
    CHECK(std::min(std::abs(c.b - y1), std::abs(c.b - y2)) < 1e-9);
  }

  TEST_CASE("non-exact census has twelve branch points") {
    const auto cs = census(make_potential("nonexact1"), 1.0);
    REQUIRE(cs.fixed_poles.size() == 5);
    const double r2 = std::sqrt(2.0);
    const cplx expected[] = {0.0, cplx(0, 1), cplx(0, -1), cplx(0, r2), cplx(0, -r2)};
    for (int k = 0; k < 5; ++k) CHECK(near(cs.fixed_poles[k], expected[k], 1e-10));
    CHECK(cs.branch_points.size() == 12);
    CHECK(cs.branch_cuts.size() == 6);
    int other = 0;
    for (const auto& c : cs.branch_cuts) other += c.kind == CutKind::other;
    CHECK(other == 4);
  }

  TEST_CASE("Eckart pole contributions") {
    const auto e = make_potential("eckart");
    CHECK(near(pole_contribution(e, 189.0, 0.0), -10.0, 1e-9));
    CHECK(near(pole_contribution(e, 189.0, 1.0), 1.0, 1e-9));
    CHECK(near(pole_contribution(e, 189.0, -1.0), 1.0, 1e-9));
    CHECK(near(infinity_contribution(e, 189.0), -6.0, 1e-9));
    CHECK_THROWS_AS(pole_contribution(e, 189.0, cplx(0.5, 0.0)), DomainError);
  }

  TEST_CASE("pole contributions follow the tabulated formulas") {
    for (const std::string key : {"eckart", "scarf2", "rosen_morse2", "poschl_teller", "rosen_morse1"}) {
      const auto spec = make_potential(key);
      CAPTURE(key);
      const double E1 = closed_form_energy(spec, 1);
      const double above = spec.bound_count && *spec.bound_count <= 2 ? binding_threshold(spec) : closed_form_energy(spec, 2);
      for (double E : {E1, 0.5 * (E1 + above)}) {
        for (const auto& g : spec.fixed_poles) {
          const cplx v = g.at_infinity ? infinity_contribution(spec, E) : pole_contribution(spec, E, g.location);
          CAPTURE(g.formula);
          CHECK(near(v, g.value(E), 1e-9));
        }
      }
    }
  }

  TEST_CASE("Scarf I contributions carry the opposite orientation to the table") {
    const auto spec = make_potential("scarf1", {{"A", 3.0}, {"B", 1.0}});
    const double E = closed_form_energy(spec, 1);
    for (const auto& g : spec.fixed_poles) {
      const cplx v = g.at_infinity ? infinity_contribution(spec, E) : pole_contribution(spec, E, g.location);
      CHECK(near(v, -g.value(E), 1e-9));
    }
  }

  TEST_CASE("contour closure for every entry") {
    for (const auto& spec : catalog_list()) {
      CAPTURE(spec.key);
      const auto d = decompose(spec, mid_energy(spec));
      CHECK(d.closure_residual <= 1e-9);
    }
  }

  TEST_CASE("classical cut integral equals the real-axis action") {
    for (const auto& spec : catalog_list()) {
      if (spec.partial) continue;
      CAPTURE(spec.key);
      const double E = mid_energy(spec);
      const auto d = decompose(spec, E);
      CHECK(near(d.J_classical_cut, swkb_integral(spec, E), 1e-9));
      if (d.J_mirror_cut) CHECK(near(*d.J_mirror_cut, d.J_classical_cut, 1e-9));
    }
  }

  TEST_CASE("anchor paths stay admissible") {
    const ContourProblem cp(make_potential("nonexact1"), 1.0);
    for (const cplx& p : cp.singularities().fixed_poles) {
      const Contour c = cp.pole_contour(p);
      REQUIRE(!c.anchor_path.empty());
      CHECK(near(c.anchor_path.front(), cp.integrand().anchor.point, 1e-15));
      cplx prev = c.anchor_path.front();
      for (std::size_t k = 1; k < c.anchor_path.size(); ++k) {
        CHECK(cp.cut_plane().segment_admissible(prev, c.anchor_path[k]));
        prev = c.anchor_path[k];
      }
      CHECK(cp.cut_plane().segment_admissible(prev, c.point(0.0)));
    }
  }

  TEST_CASE("contour quantization") {
    const auto e = make_potential("eckart");
    const auto r = quantize_by_contours(e, 1);
    CHECK(std::abs(r.energy - 189.0) < 1e-6);
    CHECK(r.method == Method::contour);
    CHECK(quantize_by_contours(e, 0).energy == 0.0);
    CHECK(std::abs(quantize_by_contours(make_potential("scarf2"), 2).energy - 8.0) < 1e-6);
    CHECK_THROWS_AS(quantize_by_contours(make_potential("nonexact1"), 1), DomainError);
  }

  TEST_CASE("defect of the non-exact entry") {
    const auto ne = make_potential("nonexact1");
    const DefectReport d = defect_report(ne, 4.0, 1);
    CHECK(d.other_cut_count == 4);
    const double indirect = 2.0 * (1.0 - oracle::swkb_action(ne, 4.0));
    CHECK(std::abs(d.J_obc_indirect - indirect) < 1e-9);
    CHECK(std::abs(d.J_obc_direct_imag) < 1e-9);
    CHECK(d.consistency_gap <= 1e-6);
    CHECK(d.J_obc_direct > 1e-3);
    const DefectReport zero = defect_report(make_potential("eckart"), 189.0, 1);
    CHECK(zero.other_cut_count == 0);
    CHECK(std::abs(zero.J_obc_indirect) < 1e-9);
  }
}
