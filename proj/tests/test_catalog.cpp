#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "swkb/catalog.hpp"
#include "swkb/catalog_json.hpp"

using namespace swkb;
using oracle::closed_omega;

namespace {

double interior_point(const PotentialSpec& s, double t) {
  const double lo = std::isfinite(s.lo) ? s.lo : -6.0;
  const double hi = std::isfinite(s.hi) ? s.hi : 6.0;
  return lo + (hi - lo) * t;
}

}  // namespace

TEST_SUITE("potential_catalog") {
  TEST_CASE("catalog lists every entry") {
    const auto keys = catalog_keys();
    CHECK(keys.size() == 9);
    for (const auto& k : keys) CHECK(make_potential(k).key == k);
    CHECK_THROWS_AS(make_potential("nope"), DomainError);
  }

  TEST_CASE("mapped superpotentials agree with the x-space forms") {
    for (const auto& spec : catalog_list()) {
      const auto w = closed_omega(spec);
      if (!w) continue;
      CAPTURE(spec.key);
      for (int k = 1; k < 100; ++k) {
        const double x = interior_point(spec, k / 100.0);
        if (x == 0.0) continue;
        CHECK(std::abs(omega_x(spec, x) - w(x)) <= 1e-12 * (1.0 + std::abs(w(x))));
        const cplx wy = spec.omega_y(to_mapped(spec, cplx(x)));
        CHECK(std::abs(wy.imag()) <= 1e-12 * (1.0 + std::abs(wy)));
      }
    }
  }

  TEST_CASE("Eckart superpotential and partner potential") {
    const auto e = make_potential("eckart");
    CHECK(std::abs(omega_x(e, 40.0) - 15.0) < 1e-12);
    const double expected = 257.0 - 32.0 / std::tanh(1.0);
    CHECK(std::abs(v_minus(e, 1.0) - expected) < 1e-10);
    CHECK(std::abs(binding_threshold(e) - 225.0) < 1e-12);
    REQUIRE(endpoint_residue(e, 0.0).has_value());
    CHECK(std::abs(*endpoint_residue(e, 0.0) + 1.0) < 1e-12);
  }

  TEST_CASE("partner potential uses the exact derivative") {
    for (const auto& spec : catalog_list()) {
      CAPTURE(spec.key);
      for (double t : {0.13, 0.37, 0.61, 0.88}) {
        const double x = interior_point(spec, t);
        const double h = 1e-5 * std::max(1.0, std::abs(x));
        const double dw = (omega_x(spec, x + h) - omega_x(spec, x - h)) / (2 * h);
        const double w = omega_x(spec, x);
        const double ref = w * w - spec.hbar * dw;
        CHECK(std::abs(v_minus(spec, x) - ref) <= 1e-8 * (1.0 + std::abs(ref)));
      }
    }
  }

  TEST_CASE("outside the domain is an error") {
    const auto e = make_potential("eckart");
    CHECK_THROWS_AS(omega_x(e, -1.0), DomainError);
    CHECK_THROWS_AS(v_minus(e, 0.0), DomainError);
    const auto s1 = make_potential("scarf1");
    CHECK_THROWS_AS(omega_x(s1, 2.0), DomainError);
  }

  TEST_CASE("closed-form spectra") {
    const auto e = make_potential("eckart");
    CHECK(closed_form_energy(e, 0) == doctest::Approx(0.0));
    CHECK(std::abs(closed_form_energy(e, 1) - 189.0) < 1e-12);
    CHECK(e.bound_count == 3);
    CHECK_THROWS_AS(closed_form_energy(e, 3), DomainError);
    CHECK(std::abs(closed_form_energy(make_potential("scarf2"), 1) - 5.0) < 1e-12);
    CHECK(std::abs(closed_form_energy(make_potential("scarf1"), 2) - 8.0) < 1e-12);
    CHECK_THROWS_AS(closed_form_energy(make_potential("nonexact2"), 1), DomainError);
  }

  TEST_CASE("bound levels lie below the asymptotic barrier") {
    for (const auto& spec : catalog_list()) {
      if (!spec.exact || !spec.bound_count) continue;
      CAPTURE(spec.key);
      for (int n = 0; n < *spec.bound_count; ++n) CHECK(closed_form_energy(spec, n) < binding_threshold(spec));
    }
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(make_potential("eckart", {{"B", 0.5}}), DomainError);
    CHECK_THROWS_AS(make_potential("eckart", {{"C", 1.0}}), DomainError);
    CHECK_THROWS_AS(make_potential("scarf1", {{"A", 0.5}, {"B", 1.0}}), DomainError);
    CHECK_THROWS_AS(make_potential("poschl_teller", {{"A", 5.0}, {"B", 2.0}}), DomainError);
    CHECK_THROWS_AS(make_potential("eckart", {}, -1.0), DomainError);
    CHECK_NOTHROW(make_potential("eckart", {{"B", 9.0}}));
  }

  TEST_CASE("JSON round trip") {
    for (const auto& spec : catalog_list()) {
      CAPTURE(spec.key);
      const auto doc = to_json(spec);
      const auto back = spec_from_json(doc);
      CHECK(back.key == spec.key);
      CHECK(back.params == spec.params);
      CHECK(to_json(back) == doc);
    }
    auto doc = to_json(make_potential("eckart"));
    CHECK(doc["domain"][1] == "inf");
    CHECK(doc["omega"]["den"][2][0] == 1.0);
    doc["omega"]["num"][0][0] = 3.0;
    CHECK_THROWS_AS(spec_from_json(doc), DomainError);
    auto doc2 = to_json(make_potential("eckart", {{"B", 9.0}}));
    CHECK(spec_from_json(doc2).params.at("B") == 9.0);
    doc2["mapping"] = "identity";
    CHECK_THROWS_AS(spec_from_json(doc2), DomainError);
    CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"params", {}}}), DomainError);
  }
}
