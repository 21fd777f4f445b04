#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swkb/contour.hpp"
#include "swkb/polynomial.hpp"

namespace swkb {

enum class PotentialId {
  eckart,
  scarf2,
  rosen_morse2,
  poschl_teller,
  scarf1,
  rosen_morse1,
  nonexact1,
  nonexact2,
  nonexact3
};

using ParamMap = std::map<std::string, double>;

// Tabulated contribution of one fixed pole, as a function of E.
struct GoldenPole {
  bool at_infinity = false;
  cplx location{};
  std::function<cplx(double)> value;
  std::string formula;
};

struct PotentialSpec {
  PotentialId id{};
  std::string key;   // command-line identifier
  std::string name;  // display name
  ParamMap params;
  double hbar = 1.0;
  double lo = 0.0, hi = 0.0;  // open domain in x, possibly infinite
  Mapping mapping = Mapping::identity;
  double alpha = 1.0;  // mapping scale
  RationalFunction<double> omega_y;
  std::vector<GoldenPole> fixed_poles;
  // Closed-form E_n; empty when the entry has none.
  std::function<double(int)> spectrum;
  // Number of bound levels from the closed form; nullopt if unlimited or unknown.
  std::optional<int> bound_count;
  bool exact = false;    // SWKB claimed exact
  bool partial = false;  // interpretation uncertain, not used for acceptance
};

const std::vector<std::string>& catalog_keys();
PotentialId parse_potential_id(std::string_view key);

// One entry with default parameters, overridden by `params`; validated.
PotentialSpec make_potential(std::string_view key, const ParamMap& params = {}, double hbar = 1.0);
PotentialSpec make_potential(PotentialId id, const ParamMap& params = {}, double hbar = 1.0);

std::vector<PotentialSpec> catalog_list(double hbar = 1.0);

// Throws DomainError when n is outside the bound range or no closed form exists.
double closed_form_energy(const PotentialSpec& spec, int n);

cplx to_mapped(const PotentialSpec& spec, cplx x);
cplx mapped_jacobian(const PotentialSpec& spec, cplx y);  // dy/dx at y
double from_mapped(const PotentialSpec& spec, cplx y);   // x for a y on the real image

// omega(x), d omega/dx and V_- = omega^2 - hbar omega'; x must be inside the domain.
double omega_x(const PotentialSpec& spec, double x);
double omega_x_derivative(const PotentialSpec& spec, double x);
double v_minus(const PotentialSpec& spec, double x);

// Residue of omega(x) at a finite domain end, or nullopt if omega is regular there.
std::optional<double> endpoint_residue(const PotentialSpec& spec, double x_end);

// min over both domain ends of lim omega^2; +inf for confining ends.
double binding_threshold(const PotentialSpec& spec);

}  // namespace swkb
