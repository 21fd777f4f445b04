#include "swkb/catalog_json.hpp"

#include <cmath>
#include <limits>

#include "swkb/errors.hpp"

namespace swkb {

std::string to_string(Mapping m) {
  switch (m) {
    case Mapping::identity: return "identity";
    case Mapping::exp: return "exp";
    case Mapping::exp_i: return "exp_i";
  }
  return "unknown";
}

namespace {

using nlohmann::json;

json encode_end(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double decode_end(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw DomainError("domain end '" + s + "' is not a number");
  }
  return j.get<double>();
}

json encode_poly(const Polynomial<double>& p) {
  json out = json::array();
  for (Eigen::Index k = 0; k < p.coeffs().size(); ++k) out.push_back({p[k].real(), p[k].imag()});
  return out;
}

std::vector<cplx> decode_poly(const json& j) {
  std::vector<cplx> c;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw DomainError("polynomial coefficient must be [re, im]");
    c.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return c;
}

bool same_poly(const std::vector<cplx>& given, const Polynomial<double>& p, double scale) {
  std::vector<cplx> g = given;
  while (!g.empty() && g.back() == cplx(0.0)) g.pop_back();
  if (static_cast<Eigen::Index>(g.size()) != p.coeffs().size()) return false;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (std::abs(g[k] - p[static_cast<Eigen::Index>(k)]) > 1e-12 * scale) return false;
  return true;
}

}  // namespace

nlohmann::json to_json(const PotentialSpec& spec) {
  json params = json::object();
  for (const auto& [k, v] : spec.params) params[k] = v;
  return json{{"id", spec.key},
              {"params", params},
              {"hbar", spec.hbar},
              {"domain", json::array({encode_end(spec.lo), encode_end(spec.hi)})},
              {"mapping", to_string(spec.mapping)},
              {"omega", {{"num", encode_poly(spec.omega_y.num())}, {"den", encode_poly(spec.omega_y.den())}}}};
}

PotentialSpec spec_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.contains("id")) throw DomainError("catalog document has no id");
    ParamMap params;
    if (doc.contains("params"))
      for (const auto& [k, v] : doc.at("params").items()) params[k] = v.get<double>();
    const double hbar = doc.value("hbar", 1.0);
    PotentialSpec spec = make_potential(doc.at("id").get<std::string>(), params, hbar);

    if (doc.contains("mapping") && doc.at("mapping").get<std::string>() != to_string(spec.mapping))
      throw DomainError("mapping does not match catalog entry " + spec.key);
    if (doc.contains("domain")) {
      const auto& d = doc.at("domain");
      if (!d.is_array() || d.size() != 2) throw DomainError("domain must be [a, b]");
      const double a = decode_end(d[0]), b = decode_end(d[1]);
      auto differs = [](double u, double v) {
        if (std::isinf(u) || std::isinf(v)) return u != v;
        return std::abs(u - v) > 1e-12 * std::max(1.0, std::abs(v));
      };
      if (differs(a, spec.lo) || differs(b, spec.hi))
        throw DomainError("domain does not match catalog entry " + spec.key);
    }
    if (doc.contains("omega")) {
      const auto& w = doc.at("omega");
      const auto num = decode_poly(w.at("num")), den = decode_poly(w.at("den"));
      // Compare after normalising the leading denominator coefficient.
      const cplx lead_given = den.empty() ? cplx(0.0) : den.back();
      const cplx lead_spec = spec.omega_y.den().leading();
      if (lead_given == cplx(0.0)) throw DomainError("omega denominator is zero");
      const cplx r = lead_spec / lead_given;
      std::vector<cplx> ns, ds;
      for (const auto& c : num) ns.push_back(c * r);
      for (const auto& c : den) ds.push_back(c * r);
      const double scale = std::max(spec.omega_y.num().max_abs_coeff(), spec.omega_y.den().max_abs_coeff());
      if (!same_poly(ns, spec.omega_y.num(), scale) || !same_poly(ds, spec.omega_y.den(), scale))
        throw DomainError("omega coefficients do not match catalog entry " + spec.key +
                          " at the given parameters");
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed catalog document: ") + e.what());
  }
}

}  // namespace swkb
