#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "swkb/catalog.hpp"
#include "swkb/contour_engine.hpp"
#include "swkb/oracle.hpp"
#include "swkb/swkb.hpp"

namespace swkb {

// One table cell; monostate renders as an empty field.
using Cell = std::variant<std::monostate, long long, double, cplx, std::string>;

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// A report is a header (entry, parameters) plus one or more tables.
struct Report {
  std::string id;
  ParamMap params;
  double hbar = 1.0;
  std::vector<Table> tables;
};

enum class Format { csv, json };
Format parse_format(const std::string& s);

// CSV: 12 significant digits, complex cells quoted as "re+imi", tables separated by a blank line.
void write_csv(std::ostream& os, const Report& r);
void write_json(std::ostream& os, const Report& r);
void write_report(std::ostream& os, const Report& r, Format f);

std::string format_real(double v);
// Components below 1e-12 |v| are printed as zero; they are quadrature roundoff.
cplx snap_roundoff(cplx v);
std::string format_complex(cplx v);

struct ReportOptions {
  SwkbOptions swkb;
  double tol_contour = 1e-10;
  NumerovOptions numerov;
  std::string dump_wavefunction;  // CSV path prefix; empty disables
};

struct ComparisonRow {
  int n = 0;
  std::optional<QuantizationResult> closed_form, swkb, contour, numerov;
  double max_pairwise_gap = 0.0;
};

struct ComparisonReport {
  std::string id;
  ParamMap params;
  double hbar = 1.0;
  std::vector<ComparisonRow> rows;
};

// Levels n = 0 .. levels-1; methods that do not apply to the entry leave their cells empty.
ComparisonReport compare_levels(const PotentialSpec& spec, int levels, const ReportOptions& opt = {});
Report to_report(const ComparisonReport& c);

Method parse_method(const std::string& s);
QuantizationResult run_method(const PotentialSpec& spec, int n, Method m, const ReportOptions& opt = {});
Report spectrum_report(const PotentialSpec& spec, int levels, Method m, const ReportOptions& opt = {});
Report contours_report(const PotentialSpec& spec, double E);
Report census_report(const PotentialSpec& spec, double E);
Report defect_report_table(const PotentialSpec& spec, int n, const ReportOptions& opt = {});
Report catalog_report(double hbar = 1.0);

}  // namespace swkb
