#include "swkb/catalog.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace swkb {

namespace {

using Poly = Polynomial<double>;
const cplx I(0, 1);
constexpr double kInf = std::numeric_limits<double>::infinity();

cplx csqrt(cplx z) { return std::sqrt(z); }

double get(const ParamMap& p, const std::string& k) { return p.at(k); }

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError("parameter constraint violated: " + what);
}

GoldenPole pole(cplx at, std::function<cplx(double)> f, std::string formula) {
  return {false, at, std::move(f), std::move(formula)};
}
GoldenPole infinity(std::function<cplx(double)> f, std::string formula) {
  return {true, cplx(0), std::move(f), std::move(formula)};
}

// Largest count of consecutive n >= 0 satisfying pred, capped to keep loops finite.
int count_levels(const std::function<bool(int)>& pred) {
  int n = 0;
  while (n < 100000 && pred(n)) ++n;
  return n;
}

struct Entry {
  PotentialId id;
  const char* key;
  const char* name;
  ParamMap defaults;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {PotentialId::eckart, "eckart", "Eckart", {{"A", 1}, {"B", 16}, {"alpha", 1}}},
      {PotentialId::scarf2, "scarf2", "Scarf II (hyperbolic)", {{"A", 3}, {"B", 1}, {"alpha", 1}}},
      {PotentialId::rosen_morse2, "rosen_morse2", "Rosen-Morse II (hyperbolic)",
       {{"A", 4}, {"B", 2}, {"alpha", 1}}},
      {PotentialId::poschl_teller, "poschl_teller", "Generalised Poschl-Teller",
       {{"A", 2}, {"B", 5}, {"alpha", 1}}},
      {PotentialId::scarf1, "scarf1", "Scarf I (trigonometric)", {{"A", 1}, {"B", 0.5}, {"alpha", 1}}},
      {PotentialId::rosen_morse1, "rosen_morse1", "Rosen-Morse I (trigonometric)",
       {{"A", 1}, {"B", 1}, {"alpha", 1}}},
      {PotentialId::nonexact1, "nonexact1", "Non-exact case 1", {}},
      {PotentialId::nonexact2, "nonexact2", "Non-exact case 2", {}},
      {PotentialId::nonexact3, "nonexact3", "Non-exact case 3 (partial)",
       {{"lambda", 0.5}, {"mu0", 4}, {"nu", 1}}},
  };
  return e;
}

const Entry& entry(PotentialId id) {
  for (const auto& e : entries())
    if (e.id == id) return e;
  throw DomainError("unknown potential id");
}

void build_eckart(PotentialSpec& s) {
  const double A = get(s.params, "A"), B = get(s.params, "B"), al = get(s.params, "alpha"), h = s.hbar;
  require(A > 0 && al > 0, "Eckart requires A > 0, alpha > 0");
  require(B > A * A, "Eckart requires B > A^2");
  s.mapping = Mapping::exp;
  s.alpha = al;
  s.lo = 0;
  s.hi = kInf;
  // -A (y^2+1)/(y^2-1) + B/A
  s.omega_y = {Poly{-A - B / A, 0, B / A - A}, Poly{-1, 0, 1}};
  s.spectrum = [=](int n) {
    const double k = n * al * h + A;
    return A * A + B * B / (A * A) - B * B / (k * k) - k * k;
  };
  s.bound_count = count_levels([=](int n) { return std::pow(n * al * h + A, 2) < B; });
  s.fixed_poles = {
      pole(0, [=](double E) { return I * csqrt(E - std::pow(A + B / A, 2)) / al; }, "i sqrt(E-(A+B/A)^2)/alpha"),
      pole(1, [=](double) { return cplx(A / al); }, "A/alpha"),
      pole(-1, [=](double) { return cplx(A / al); }, "A/alpha"),
      infinity([=](double E) { return -csqrt(std::pow(B / A - A, 2) - E) / al; },
               "-sqrt((B/A-A)^2-E)/alpha"),
  };
  s.exact = true;
}

void build_scarf2(PotentialSpec& s) {
  const double A = get(s.params, "A"), B = get(s.params, "B"), al = get(s.params, "alpha"), h = s.hbar;
  require(A > 0 && al > 0, "Scarf II requires A > 0, alpha > 0");
  s.mapping = Mapping::exp;
  s.alpha = al;
  s.lo = -kInf;
  s.hi = kInf;
  // A tanh + B sech = (A (y^2-1) + 2 B y)/(y^2+1)
  s.omega_y = {Poly{-A, 2 * B, A}, Poly{1, 0, 1}};
  s.spectrum = [=](int n) { return A * A - std::pow(A - n * al * h, 2); };
  s.bound_count = count_levels([=](int n) { return A - n * al * h > 0; });
  s.fixed_poles = {
      pole(0, [=](double E) { return -I * csqrt(E - A * A) / al; }, "-i sqrt(E-A^2)/alpha"),
      pole(I, [=](double) { return (I * B - A) / al; }, "(iB-A)/alpha"),
      pole(-I, [=](double) { return -(I * B + A) / al; }, "-(iB+A)/alpha"),
      infinity([=](double E) { return I * csqrt(E - A * A) / al; }, "i sqrt(E-A^2)/alpha"),
  };
  s.exact = true;
}

void build_rosen_morse2(PotentialSpec& s) {
  const double A = get(s.params, "A"), B = get(s.params, "B"), al = get(s.params, "alpha"), h = s.hbar;
  require(A > 0 && al > 0, "Rosen-Morse II requires A > 0, alpha > 0");
  require(B < A * A, "Rosen-Morse II requires B < A^2");
  s.mapping = Mapping::exp;
  s.alpha = al;
  s.lo = -kInf;
  s.hi = kInf;
  // A tanh + B/A
  s.omega_y = {Poly{-A + B / A, 0, A + B / A}, Poly{1, 0, 1}};
  s.spectrum = [=](int n) {
    const double k = A - n * al * h;
    return A * A + B * B / (A * A) - k * k - B * B / (k * k);
  };
  s.bound_count = count_levels([=](int n) { return A - n * al * h > std::sqrt(std::abs(B)); });
  s.fixed_poles = {
      pole(0, [=](double E) { return -I * csqrt(E - std::pow(A - B / A, 2)) / al; },
           "-i sqrt(E-(A-B/A)^2)/alpha"),
      pole(I, [=](double) { return cplx(-A / al); }, "-A/alpha"),
      pole(-I, [=](double) { return cplx(-A / al); }, "-A/alpha"),
      infinity([=](double E) { return I * csqrt(E - std::pow(A + B / A, 2)) / al; },
               "i sqrt(E-(A+B/A)^2)/alpha"),
  };
  s.exact = true;
}

void build_poschl_teller(PotentialSpec& s) {
  const double A = get(s.params, "A"), B = get(s.params, "B"), al = get(s.params, "alpha"), h = s.hbar;
  require(A > 0 && al > 0, "Poschl-Teller requires A > 0, alpha > 0");
  require(A < B, "Poschl-Teller requires A < B");
  s.mapping = Mapping::exp;
  s.alpha = al;
  s.lo = 0;
  s.hi = kInf;
  // A coth - B cosech = (A (y^2+1) - 2 B y)/(y^2-1)
  s.omega_y = {Poly{A, -2 * B, A}, Poly{-1, 0, 1}};
  s.spectrum = [=](int n) { return A * A - std::pow(A - n * al * h, 2); };
  s.bound_count = count_levels([=](int n) { return A - n * al * h > 0; });
  s.fixed_poles = {
      pole(0, [=](double E) { return -I * csqrt(E - A * A) / al; }, "-i sqrt(E-A^2)/alpha"),
      pole(1, [=](double) { return cplx(-(A - B) / al); }, "-(A-B)/alpha"),
      pole(-1, [=](double) { return cplx(-(A + B) / al); }, "-(A+B)/alpha"),
      infinity([=](double E) { return I * csqrt(E - A * A) / al; }, "i sqrt(E-A^2)/alpha"),
  };
  s.exact = true;
}

void build_scarf1(PotentialSpec& s) {
  const double A = get(s.params, "A"), B = get(s.params, "B"), al = get(s.params, "alpha"), h = s.hbar;
  require(al > 0, "Scarf I requires alpha > 0");
  require(A > std::abs(B), "Scarf I requires A > |B|");
  s.mapping = Mapping::exp_i;
  s.alpha = al;
  s.lo = -std::numbers::pi / (2 * al);
  s.hi = std::numbers::pi / (2 * al);
  // A tan - B sec = (-iA (y^2-1) - 2 B y)/(y^2+1)
  s.omega_y = {Poly{I * A, -2 * B, -I * A}, Poly{1, 0, 1}};
  s.spectrum = [=](int n) { return std::pow(A + n * al * h, 2) - A * A; };
  s.fixed_poles = {
      pole(0, [=](double E) { return csqrt(E + A * A) / al; }, "sqrt(E+A^2)/alpha"),
      pole(I, [=](double) { return cplx(-(A - B) / al); }, "-(A-B)/alpha"),
      pole(-I, [=](double) { return cplx(-(A + B) / al); }, "-(A+B)/alpha"),
      infinity([=](double E) { return -csqrt(E + A * A) / al; }, "-sqrt(E+A^2)/alpha"),
  };
  s.exact = true;
}

void build_rosen_morse1(PotentialSpec& s) {
  const double A = get(s.params, "A"), B = get(s.params, "B"), al = get(s.params, "alpha"), h = s.hbar;
  require(A > 0 && al > 0, "Rosen-Morse I requires A > 0, alpha > 0");
  s.mapping = Mapping::exp_i;
  s.alpha = al;
  s.lo = 0;
  s.hi = std::numbers::pi / al;
  // -A cot - B/A with cot = i (y^2+1)/(y^2-1)
  s.omega_y = {Poly{-I * A + B / A, 0, -I * A - B / A}, Poly{-1, 0, 1}};
  s.spectrum = [=](int n) {
    const double k = A + n * al * h;
    return k * k - A * A + B * B / (A * A) - B * B / (k * k);
  };
  s.fixed_poles = {
      pole(0, [=](double E) { return -csqrt(E + std::pow(A + I * B / A, 2)) / al; },
           "-sqrt(E+(A+iB/A)^2)/alpha"),
      pole(1, [=](double) { return cplx(A / al); }, "A/alpha"),
      pole(-1, [=](double) { return cplx(A / al); }, "A/alpha"),
      infinity([=](double E) { return csqrt(E + std::pow(A - I * B / A, 2)) / al; },
               "sqrt(E+(A-iB/A)^2)/alpha"),
  };
  s.exact = true;
}

void build_nonexact1(PotentialSpec& s) {
  const double h = s.hbar;
  s.mapping = Mapping::identity;
  s.alpha = 1;
  s.lo = 0;
  s.hi = kInf;
  // (2x^6+3x^4-x^2-6) / (2x (x^2+1)(x^2+2))
  s.omega_y = {Poly{-6, 0, -1, 0, 3, 0, 2}, Poly{0, 4, 0, 6, 0, 2}};
  // Pole-only quantisation: J_GammaR - sum J_gamma = E/2 = 2 n hbar.
  s.spectrum = [=](int n) { return 4.0 * n * h; };
  const double r2 = std::sqrt(2.0);
  s.fixed_poles = {
      pole(0, [](double) { return cplx(1.5); }, "3/2"),
      pole(I, [](double) { return cplx(-1); }, "-1"),
      pole(-I, [](double) { return cplx(-1); }, "-1"),
      pole(I * r2, [](double) { return cplx(1); }, "1"),
      pole(-I * r2, [](double) { return cplx(1); }, "1"),
      infinity([](double E) { return cplx(2 * E + 1.5); }, "2E+3/2"),
  };
}

void build_nonexact2(PotentialSpec& s) {
  s.mapping = Mapping::identity;
  s.alpha = 1;
  s.lo = 0;
  s.hi = kInf;
  // (x^6-16x^4-56x^3-108x^2-240x-192) / (4x (x^2+2x+2)(x^3+6x^2+16x+24))
  const Poly den = Poly{0, 4} * Poly{2, 2, 1} * Poly{24, 16, 6, 1};
  s.omega_y = {Poly{-192, -240, -108, -56, -16, 0, 1}, den};
}

void build_nonexact3(PotentialSpec& s) {
  const double lam = get(s.params, "lambda"), mu0 = get(s.params, "mu0");
  require(lam > 0 && lam < 1, "non-exact case 3 requires 0 < lambda < 1");
  require(mu0 > 0, "non-exact case 3 requires mu0 > 0");
  // y = tanh x = (u-1)/(u+1) with u = exp(2x);
  // omega = (1-l^2)/2 y (y^2-1) + mu0 l^2 y over the common denominator (u+1)^3.
  s.mapping = Mapping::exp;
  s.alpha = 2;
  s.lo = -kInf;
  s.hi = kInf;
  const Poly um1{-1, 1}, up1{1, 1};
  const Poly num = Poly{0, -2.0 * (1 - lam * lam)} * um1 + (mu0 * lam * lam) * (um1 * up1 * up1);
  s.omega_y = {num, up1 * up1 * up1};
  s.partial = true;
}

}  // namespace

const std::vector<std::string>& catalog_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& e : entries()) k.emplace_back(e.key);
    return k;
  }();
  return keys;
}

PotentialId parse_potential_id(std::string_view key) {
  for (const auto& e : entries())
    if (key == e.key) return e.id;
  throw DomainError("unknown potential id '" + std::string(key) + "'");
}

PotentialSpec make_potential(std::string_view key, const ParamMap& params, double hbar) {
  return make_potential(parse_potential_id(key), params, hbar);
}

PotentialSpec make_potential(PotentialId id, const ParamMap& params, double hbar) {
  const Entry& e = entry(id);
  if (!(hbar > 0)) throw DomainError("parameter constraint violated: hbar must be positive");
  PotentialSpec s;
  s.id = id;
  s.key = e.key;
  s.name = e.name;
  s.params = e.defaults;
  s.hbar = hbar;
  for (const auto& [k, v] : params) {
    if (!s.params.count(k)) throw DomainError("unknown parameter '" + k + "' for " + s.key);
    if (!std::isfinite(v)) throw DomainError("parameter '" + k + "' must be finite");
    s.params[k] = v;
  }
  switch (id) {
    case PotentialId::eckart: build_eckart(s); break;
    case PotentialId::scarf2: build_scarf2(s); break;
    case PotentialId::rosen_morse2: build_rosen_morse2(s); break;
    case PotentialId::poschl_teller: build_poschl_teller(s); break;
    case PotentialId::scarf1: build_scarf1(s); break;
    case PotentialId::rosen_morse1: build_rosen_morse1(s); break;
    case PotentialId::nonexact1: build_nonexact1(s); break;
    case PotentialId::nonexact2: build_nonexact2(s); break;
    case PotentialId::nonexact3: build_nonexact3(s); break;
  }
  return s;
}

std::vector<PotentialSpec> catalog_list(double hbar) {
  std::vector<PotentialSpec> out;
  for (const auto& e : entries()) out.push_back(make_potential(e.id, {}, hbar));
  return out;
}

double closed_form_energy(const PotentialSpec& spec, int n) {
  if (!spec.spectrum) throw DomainError(spec.key + " has no closed-form spectrum");
  if (n < 0) throw DomainError("level index must be non-negative");
  if (spec.bound_count && n >= *spec.bound_count) {
    std::ostringstream msg;
    msg << spec.key << " has " << *spec.bound_count << " bound states; n=" << n << " is not bound";
    throw DomainError(msg.str());
  }
  return spec.spectrum(n);
}

cplx to_mapped(const PotentialSpec& spec, cplx x) {
  switch (spec.mapping) {
    case Mapping::identity: return x;
    case Mapping::exp: return std::exp(spec.alpha * x);
    case Mapping::exp_i: return std::exp(I * spec.alpha * x);
  }
  return x;
}

cplx mapped_jacobian(const PotentialSpec& spec, cplx y) {
  switch (spec.mapping) {
    case Mapping::identity: return 1.0;
    case Mapping::exp: return spec.alpha * y;
    case Mapping::exp_i: return I * spec.alpha * y;
  }
  return 1.0;
}

double from_mapped(const PotentialSpec& spec, cplx y) {
  switch (spec.mapping) {
    case Mapping::identity: return y.real();
    case Mapping::exp: return std::log(std::abs(y)) / spec.alpha;
    case Mapping::exp_i: {
      double x = std::arg(y) / spec.alpha;
      const double period = 2 * std::numbers::pi / spec.alpha;
      while (x <= spec.lo) x += period;
      while (x >= spec.hi && x - period > spec.lo) x -= period;
      return x;
    }
  }
  return y.real();
}

namespace {

cplx checked_y(const PotentialSpec& spec, double x) {
  if (!(x > spec.lo && x < spec.hi)) {
    std::ostringstream msg;
    msg << "x=" << x << " outside the domain of " << spec.key;
    throw DomainError(msg.str());
  }
  const cplx y = to_mapped(spec, x);
  if (spec.omega_y.den()(y) == cplx(0)) throw DomainError("x is a pole of omega");
  return y;
}

cplx ipow(cplx z, int k) {
  cplx r(1.0);
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

// p(y)/q(y) without overflow: for |y| > 1 both are evaluated as reversed polynomials in 1/y.
cplx ratio(const Poly& p, const Poly& q, cplx y) {
  if (std::abs(y) <= 1.0) return p(y) / q(y);
  const cplx z = 1.0 / y;
  auto reversed = [&](const Poly& a) {
    cplx acc(0.0);
    for (int k = 0; k <= a.degree(); ++k) acc = acc * z + a[k];
    return acc;
  };
  const int shift = p.degree() - q.degree();
  const cplx scale = shift >= 0 ? ipow(y, shift) : ipow(z, -shift);
  return reversed(p) / reversed(q) * scale;
}

}  // namespace

double omega_x(const PotentialSpec& spec, double x) {
  const cplx y = checked_y(spec, x);
  return ratio(spec.omega_y.num(), spec.omega_y.den(), y).real();
}

double omega_x_derivative(const PotentialSpec& spec, double x) {
  const cplx y = checked_y(spec, x);
  const Poly& n = spec.omega_y.num();
  const Poly& d = spec.omega_y.den();
  Poly top = derivative(n) * d - n * derivative(d);
  // The exponential maps have dy/dx proportional to y; fold that y into the numerator.
  cplx jac(1.0);
  switch (spec.mapping) {
    case Mapping::identity: break;
    case Mapping::exp: top = top * Poly{0, 1}; jac = spec.alpha; break;
    case Mapping::exp_i: top = top * Poly{0, 1}; jac = I * spec.alpha; break;
  }
  return (ratio(top, d * d, y) * jac).real();
}

double v_minus(const PotentialSpec& spec, double x) {
  const double w = omega_x(spec, x);
  return w * w - spec.hbar * omega_x_derivative(spec, x);
}

std::optional<double> endpoint_residue(const PotentialSpec& spec, double x_end) {
  if (!std::isfinite(x_end)) return std::nullopt;
  const cplx y = to_mapped(spec, x_end);
  const auto& den = spec.omega_y.den();
  const double scale = den.magnitude_at(y);
  if (std::abs(den(y)) > 1e-12 * scale) return std::nullopt;
  const cplx res_y = spec.omega_y.num()(y) / derivative(den)(y);
  return (res_y / mapped_jacobian(spec, y)).real();
}

double binding_threshold(const PotentialSpec& spec) {
  const auto& num = spec.omega_y.num();
  const auto& den = spec.omega_y.den();
  auto at_infinity_y = [&]() -> double {
    if (num.degree() > den.degree()) return kInf;
    if (num.degree() < den.degree()) return 0.0;
    return std::norm(num.leading() / den.leading());
  };
  auto at_zero_y = [&]() -> double {
    if (std::abs(den[0]) == 0.0) return kInf;
    return std::norm(num[0] / den[0]);
  };
  auto end_value = [&](double x, bool upper) -> double {
    if (std::isfinite(x)) {
      if (endpoint_residue(spec, x)) return kInf;
      return std::norm(spec.omega_y(to_mapped(spec, x)));
    }
    switch (spec.mapping) {
      case Mapping::identity: return at_infinity_y();
      case Mapping::exp: return upper ? at_infinity_y() : at_zero_y();
      case Mapping::exp_i: return kInf;
    }
    return kInf;
  };
  return std::min(end_value(spec.lo, false), end_value(spec.hi, true));
}

}  // namespace swkb
