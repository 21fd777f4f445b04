#include "swkb/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "swkb/catalog_json.hpp"
#include "swkb/errors.hpp"

namespace swkb {

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

cplx snap_roundoff(cplx v) {
  const double tol = 1e-12 * std::abs(v);
  double re = std::abs(v.real()) <= tol ? 0.0 : v.real();
  double im = std::abs(v.imag()) <= tol ? 0.0 : v.imag();
  if (re == 0.0) re = 0.0;  // drop the sign of negative zero
  if (im == 0.0) im = 0.0;
  return {re, im};
}

std::string format_complex(cplx v) {
  v = snap_roundoff(v);
  const double re = v.real(), im = v.imag();
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", re, im);
  return buf;
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw DomainError("unknown format '" + s + "' (csv or json)");
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(cplx v) const { return "\"" + format_complex(v) + "\""; }
    std::string operator()(const std::string& v) const { return csv_escape(v); }
  };
  return std::visit(V{}, c);
}

nlohmann::json json_cell(const Cell& c) {
  struct V {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(long long v) const { return v; }
    nlohmann::json operator()(double v) const {
      if (!std::isfinite(v)) return format_real(v);
      return v;
    }
    nlohmann::json operator()(cplx v) const {
      v = snap_roundoff(v);
      return nlohmann::json::array({v.real(), v.imag()});
    }
    nlohmann::json operator()(const std::string& v) const { return v; }
  };
  return std::visit(V{}, c);
}

std::string params_text(const ParamMap& p) {
  std::string s;
  for (const auto& [k, v] : p) {
    if (!s.empty()) s += ";";
    s += k + "=" + format_real(v);
  }
  return s;
}

}  // namespace

void write_csv(std::ostream& os, const Report& r) {
  bool first = true;
  for (const Table& t : r.tables) {
    if (!first) os << "\n";
    first = false;
    os << "# " << t.title << " id=" << r.id << " hbar=" << format_real(r.hbar);
    if (!r.params.empty()) os << " params=" << params_text(r.params);
    os << "\n";
    for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
    os << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << csv_cell(row[k]);
      os << "\n";
    }
  }
}

void write_json(std::ostream& os, const Report& r) {
  nlohmann::json doc;
  doc["id"] = r.id;
  doc["params"] = nlohmann::json::object();
  for (const auto& [k, v] : r.params) doc["params"][k] = v;
  doc["hbar"] = r.hbar;
  for (const Table& t : r.tables) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
      nlohmann::json o = nlohmann::json::object();
      for (std::size_t k = 0; k < row.size() && k < t.columns.size(); ++k) o[t.columns[k]] = json_cell(row[k]);
      rows.push_back(std::move(o));
    }
    doc[t.title] = std::move(rows);
  }
  os << doc.dump(2) << "\n";
}

void write_report(std::ostream& os, const Report& r, Format f) {
  if (f == Format::csv) write_csv(os, r); else write_json(os, r);
}

Method parse_method(const std::string& s) {
  if (s == "swkb" || s == "swkb_quadrature") return Method::swkb_quadrature;
  if (s == "contour") return Method::contour;
  if (s == "closed_form" || s == "closed") return Method::closed_form;
  if (s == "numerov") return Method::numerov;
  throw DomainError("unknown method '" + s + "' (swkb, contour, closed_form, numerov)");
}

QuantizationResult run_method(const PotentialSpec& spec, int n, Method m, const ReportOptions& opt) {
  switch (m) {
    case Method::swkb_quadrature: return solve_level(spec, n, opt.swkb);
    case Method::contour: return quantize_by_contours(spec, n, opt.tol_contour);
    case Method::closed_form: {
      QuantizationResult r;
      r.n = n;
      r.method = Method::closed_form;
      r.energy = closed_form_energy(spec, n);
      return r;
    }
    case Method::numerov: {
      const NumerovResult nr = numerov_solve(spec, n, opt.numerov);
      if (!opt.dump_wavefunction.empty()) {
        const std::string path = opt.dump_wavefunction + "_" + spec.key + "_n" + std::to_string(n) + ".csv";
        std::ofstream out(path);
        if (!out) throw DomainError("cannot write " + path);
        write_wavefunction_csv(out, nr.solution);
      }
      QuantizationResult r;
      r.n = n;
      r.method = Method::numerov;
      r.energy = nr.energy;
      r.residual = numerov_recurrence_residual(nr.solution, oracle_problem(spec));
      r.error_estimate = nr.error_estimate;
      return r;
    }
  }
  throw DomainError("unknown method");
}

ComparisonReport compare_levels(const PotentialSpec& spec, int levels, const ReportOptions& opt) {
  if (levels < 1) throw DomainError("--levels must be at least 1");
  ComparisonReport c;
  c.id = spec.key;
  c.params = spec.params;
  c.hbar = spec.hbar;
  for (int n = 0; n < levels; ++n) {
    ComparisonRow row;
    row.n = n;
    if (spec.spectrum) row.closed_form = run_method(spec, n, Method::closed_form, opt);
    row.swkb = run_method(spec, n, Method::swkb_quadrature, opt);
    try {
      row.contour = run_method(spec, n, Method::contour, opt);
    } catch (const DomainError&) {
      // Entries with extra branch cuts have no pole-only condition.
    }
    row.numerov = run_method(spec, n, Method::numerov, opt);
    std::vector<double> e;
    for (const auto* q : {&row.closed_form, &row.swkb, &row.contour, &row.numerov})
      if (*q) e.push_back((*q)->energy);
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    row.max_pairwise_gap = *hi - *lo;
    c.rows.push_back(row);
  }
  return c;
}

Report to_report(const ComparisonReport& c) {
  Report r{c.id, c.params, c.hbar, {}};
  Table t;
  t.title = "comparison";
  t.columns = {"n", "E_closed_form", "E_swkb", "res_swkb", "E_contour", "res_contour",
               "E_numerov", "err_numerov", "max_pairwise_gap"};
  auto energy = [](const std::optional<QuantizationResult>& q) -> Cell {
    return q ? Cell(q->energy) : Cell{};
  };
  auto resid = [](const std::optional<QuantizationResult>& q) -> Cell {
    return q ? Cell(q->residual) : Cell{};
  };
  for (const auto& row : c.rows) {
    t.rows.push_back({static_cast<long long>(row.n), energy(row.closed_form), energy(row.swkb),
                      resid(row.swkb), energy(row.contour), resid(row.contour), energy(row.numerov),
                      row.numerov ? Cell(row.numerov->error_estimate) : Cell{}, row.max_pairwise_gap});
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report spectrum_report(const PotentialSpec& spec, int levels, Method m, const ReportOptions& opt) {
  if (levels < 1) throw DomainError("--levels must be at least 1");
  Report r{spec.key, spec.params, spec.hbar, {}};
  Table t;
  t.title = "spectrum";
  t.columns = {"n", "energy", "method", "residual", "error_estimate"};
  for (int n = 0; n < levels; ++n) {
    const QuantizationResult q = run_method(spec, n, m, opt);
    t.rows.push_back({static_cast<long long>(n), q.energy, to_string(q.method), q.residual, q.error_estimate});
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report contours_report(const PotentialSpec& spec, double E) {
  const ContourDecomposition d = decompose(spec, E);
  Report r{spec.key, spec.params, spec.hbar, {}};
  Table t;
  t.title = "contours";
  t.columns = {"kind", "location", "end", "value", "method"};
  for (const auto& p : d.J_gamma) t.rows.push_back({std::string("pole"), p.location, Cell{}, p.value, std::string("contour")});
  t.rows.push_back({std::string("infinity"), Cell{}, Cell{}, d.J_GammaR, std::string("contour")});
  {
    const ContourProblem cp(spec, E);
    std::size_t k = 0;
    for (const auto& cut : cp.singularities().branch_cuts) {
      cplx v = d.J_classical_cut;
      if (cut.kind == CutKind::mirror) v = d.J_mirror_cut.value_or(cplx{});
      if (cut.kind == CutKind::other) v = d.J_other_cuts.at(k++);
      t.rows.push_back({"cut_" + to_string(cut.kind), cut.a, cut.b, v, std::string("contour")});
    }
  }
  t.rows.push_back({std::string("closure_residual"), Cell{}, Cell{}, d.closure_residual, std::string("contour")});
  r.tables.push_back(std::move(t));
  return r;
}

Report census_report(const PotentialSpec& spec, double E) {
  const SingularityCensus cs = census(spec, E);
  Report r{spec.key, spec.params, spec.hbar, {}};
  Table t;
  t.title = "census";
  t.columns = {"kind", "location", "end"};
  for (const cplx& p : cs.fixed_poles) t.rows.push_back({std::string("pole"), p, Cell{}});
  if (cs.infinity) t.rows.push_back({std::string("pole_infinity"), Cell{}, Cell{}});
  for (const cplx& b : cs.branch_points) t.rows.push_back({std::string("branch_point"), b, Cell{}});
  for (const auto& c : cs.branch_cuts) t.rows.push_back({"cut_" + to_string(c.kind), c.a, c.b});
  r.tables.push_back(std::move(t));
  Table s;
  s.title = "summary";
  s.columns = {"energy", "poles", "branch_points", "cuts", "mirror"};
  s.rows.push_back({E, static_cast<long long>(cs.fixed_poles.size() + (cs.infinity ? 1 : 0)),
                    static_cast<long long>(cs.branch_points.size()),
                    static_cast<long long>(cs.branch_cuts.size()), to_string(cs.mirror)});
  r.tables.push_back(std::move(s));
  return r;
}

Report defect_report_table(const PotentialSpec& spec, int n, const ReportOptions& opt) {
  const Method m = spec.spectrum ? Method::closed_form : Method::numerov;
  const QuantizationResult exact = run_method(spec, n, m, opt);
  const DefectReport d = defect_report(spec, exact.energy, n);
  Report r{spec.key, spec.params, spec.hbar, {}};
  Table t;
  t.title = "defect";
  t.columns = {"n", "E_exact", "E_exact_method", "J_swkb", "J_obc_direct", "J_obc_direct_imag",
               "J_obc_indirect", "consistency_gap", "other_cuts"};
  t.rows.push_back({static_cast<long long>(n), d.E_exact, to_string(m), d.J_swkb, d.J_obc_direct,
                    d.J_obc_direct_imag, d.J_obc_indirect, d.consistency_gap,
                    static_cast<long long>(d.other_cut_count)});
  r.tables.push_back(std::move(t));
  return r;
}

Report catalog_report(double hbar) {
  Report r{"catalog", {}, hbar, {}};
  Table t;
  t.title = "catalog";
  t.columns = {"id", "name", "params", "mapping", "domain_lo", "domain_hi", "exact", "bound_count"};
  for (const auto& s : catalog_list(hbar)) {
    t.rows.push_back({s.key, s.name, params_text(s.params), to_string(s.mapping), s.lo, s.hi,
                      std::string(s.exact ? "yes" : (s.partial ? "partial" : "no")),
                      s.bound_count ? Cell(static_cast<long long>(*s.bound_count)) : Cell{}});
  }
  r.tables.push_back(std::move(t));
  return r;
}

}  // namespace swkb
