#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "swkb/catalog.hpp"
#include "swkb/oracle.hpp"

using namespace swkb;

TEST_SUITE("schrodinger_oracle") {
  TEST_CASE("free particle in a box") {
    OracleProblem p;
    p.potential = [](double) { return 0.0; };
    p.left = {Boundary::Kind::dirichlet, 0.0};
    p.right = {Boundary::Kind::dirichlet, std::numbers::pi};
    for (int n = 0; n < 4; ++n) {
      const NumerovResult r = numerov_solve(p, n);
      CHECK(std::abs(r.energy - (n + 1.0) * (n + 1.0)) < 1e-9);
      CHECK(r.solution.node_count == n);
    }
    p.hbar = 0.5;
    CHECK(std::abs(numerov_solve(p, 1).energy - 1.0) < 1e-9);
  }

  TEST_CASE("harmonic oscillator grows its box") {
    OracleProblem p;
    p.potential = [](double x) { return x * x; };
    p.left = {Boundary::Kind::decaying, -1.5};
    p.right = {Boundary::Kind::decaying, 1.5};
    for (int n = 0; n < 4; ++n) {
      const NumerovResult r = numerov_solve(p, n);
      CHECK(std::abs(r.energy - (2.0 * n + 1.0)) < 1e-8);
      CHECK(r.solution.x_max > 4.0);
    }
  }

  TEST_CASE("radial hydrogen with an inverse-square wall") {
    // -psi'' + (2/x^2 - 2/x) psi = E psi: s = 2, E_n = -1/(n + 2)^2.
    OracleProblem p;
    p.potential = [](double x) { return 2.0 / (x * x) - 2.0 / x; };
    p.left.kind = Boundary::Kind::singular;
    p.left.x = 0.0;
    p.left.exponent = 2.0;
    p.left.laurent = {2.0, -2.0};
    p.left.series_radius = 0.05;
    p.right = {Boundary::Kind::decaying, 30.0};
    for (int n = 0; n < 3; ++n) CHECK(std::abs(numerov_solve(p, n).energy + 1.0 / ((n + 2.0) * (n + 2.0))) < 1e-8);
  }

  TEST_CASE("Frobenius coefficients") {
    Boundary b;
    b.kind = Boundary::Kind::singular;
    b.exponent = 2.0;
    b.laurent = {2.0, -2.0};
    const auto a = frobenius_coefficients(b, -0.25, 1.0);
    // psi = x^2 exp(-x/2) for the hydrogen ground state.
    CHECK(std::abs(a[1] + 0.5) < 1e-15);
    CHECK(std::abs(a[2] - 0.125) < 1e-15);
  }

  TEST_CASE("catalog spectra start at zero and follow the closed form") {
    for (const std::string key : {"eckart", "scarf2", "poschl_teller", "scarf1", "rosen_morse1"}) {
      const auto spec = make_potential(key);
      CAPTURE(key);
      const NumerovResult r0 = numerov_solve(spec, 0);
      CHECK(std::abs(r0.energy) < 1e-6);
      const NumerovResult r1 = numerov_solve(spec, 1);
      CHECK(std::abs(r1.energy - closed_form_energy(spec, 1)) < 1e-6 * (1 + closed_form_energy(spec, 1)));
      CHECK(r1.error_estimate < 1e-6);
      CHECK(numerov_recurrence_residual(r1.solution, oracle_problem(spec)) < 1e-10);
    }
  }

  TEST_CASE("levels beyond the bound count are refused") {
    CHECK_THROWS_AS(numerov_solve(make_potential("eckart"), 3), DomainError);
    CHECK_THROWS_AS(numerov_solve(make_potential("poschl_teller"), 2), DomainError);
  }

  TEST_CASE("node count gives the quantum action") {
    const auto e = make_potential("eckart");
    for (int n = 0; n < 3; ++n) {
      const NumerovResult r = numerov_solve(e, n);
      const QuantumAction qa = quantum_action(r.solution, e, r.energy);
      CHECK(qa.nodes_inside == n);
      CHECK(qa.value == doctest::Approx(n * e.hbar));
      CHECK_FALSE(qa.ambiguous);
    }
  }

  TEST_CASE("quantum Hamilton-Jacobi residual shrinks with the grid") {
    const auto e = make_potential("eckart");
    NumerovOptions coarse, fine;
    coarse.points = 4001;
    coarse.richardson = false;
    fine.points = 8001;
    fine.richardson = false;
    const auto rc = numerov_solve(e, 1, coarse), rf = numerov_solve(e, 1, fine);
    const double qc = qhj_residual(rc.solution, e, rc.energy), qf = qhj_residual(rf.solution, e, rf.energy);
    CHECK(qf < 1e-4 * (1 + 189.0));
    CHECK(qc / qf >= 3.0);
  }

  TEST_CASE("wavefunction CSV") {
    OracleProblem p;
    p.potential = [](double) { return 0.0; };
    p.left = {Boundary::Kind::dirichlet, 0.0};
    p.right = {Boundary::Kind::dirichlet, 1.0};
    const GridSolution s = solve_on_grid(p, 0, 17);
    std::ostringstream os;
    write_wavefunction_csv(os, s);
    const std::string out = os.str();
    CHECK(out.rfind("x,psi\n0,0\n", 0) == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 18);
    double norm = 0.0;
    for (std::size_t i = 0; i + 1 < s.psi.size(); ++i)
      norm += 0.5 * s.step * (s.psi[i] * s.psi[i] + s.psi[i + 1] * s.psi[i + 1]);
    CHECK(std::abs(norm - 1.0) < 1e-12);
  }
}
