#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "swkb/catalog.hpp"
#include "swkb/errors.hpp"
#include "swkb/report.hpp"

namespace {

using namespace swkb;

struct Settings {
  std::string params;
  double hbar = 1.0;
  double tol = 1e-10;
  std::string format = "csv";
  std::string out;
  std::string config;
  std::string dump;
};

ParamMap parse_params(const std::string& text) {
  ParamMap p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--params", "expected k=v, got '" + item + "'");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != val.size() || val.empty())
      throw CLI::ValidationError("--params", "value of '" + key + "' is not a number");
    p[key] = v;
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SWKB quantization: real-axis quadrature, contour decomposition and Numerov oracle"};
  app.require_subcommand(1);
  Settings s;
  app.add_option("--params", s.params, "parameter overrides k=v,...");
  auto* o_hbar = app.add_option("--hbar", s.hbar, "Planck constant");
  auto* o_tol = app.add_option("--tol", s.tol, "level tolerance");
  auto* o_format = app.add_option("--format", s.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", s.out, "output file (default stdout)");
  app.add_option("--config", s.config, "JSON file overriding catalog defaults")->check(CLI::ExistingFile);
  app.add_option("--dump-wavefunction", s.dump, "write Numerov wavefunctions as PATH_<id>_n<k>.csv");

  std::string id, method = "swkb";
  int levels = 3, level = 1;
  double energy = 0.0;
  auto* list = app.add_subcommand("list", "list catalog entries");
  auto* spectrum = app.add_subcommand("spectrum", "energy levels by one method");
  spectrum->add_option("id", id, "catalog id")->required();
  auto* o_method = spectrum->add_option("--method", method, "swkb, contour, closed_form or numerov");
  auto* o_levels = spectrum->add_option("--levels", levels, "number of levels from n=0");
  auto* compare = app.add_subcommand("compare", "all methods side by side");
  compare->add_option("id", id, "catalog id")->required();
  auto* o_levels_c = compare->add_option("--levels", levels, "number of levels from n=0");
  auto* contours = app.add_subcommand("contours", "pole, infinity and cut contributions");
  contours->add_option("id", id, "catalog id")->required();
  contours->add_option("--energy", energy, "energy")->required();
  auto* census_cmd = app.add_subcommand("census", "poles, branch points and cuts");
  census_cmd->add_option("id", id, "catalog id")->required();
  census_cmd->add_option("--energy", energy, "energy")->required();
  auto* defect = app.add_subcommand("defect", "extra-cut defect for one level");
  defect->add_option("id", id, "catalog id")->required();
  defect->add_option("--level", level, "level n")->required();
  for (auto* sub : {list, spectrum, compare, contours, census_cmd, defect}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (!id.empty() && std::find(catalog_keys().begin(), catalog_keys().end(), id) == catalog_keys().end()) {
    std::cerr << "unknown potential id '" << id << "'\n" << app.help();
    return 1;
  }

  try {
    // Flags override the config file, which overrides catalog defaults.
    ParamMap params;
    if (!s.config.empty()) {
      std::ifstream in(s.config);
      nlohmann::json cfg;
      try {
        cfg = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
      }
      if (cfg.contains("params"))
        for (const auto& [k, v] : cfg.at("params").items()) params[k] = v.get<double>();
      if (cfg.contains("hbar") && !o_hbar->count()) s.hbar = cfg.at("hbar").get<double>();
      if (cfg.contains("tol") && !o_tol->count()) s.tol = cfg.at("tol").get<double>();
      if (cfg.contains("format") && !o_format->count()) s.format = cfg.at("format").get<std::string>();
      if (cfg.contains("levels") && !o_levels->count() && !o_levels_c->count()) levels = cfg.at("levels").get<int>();
      if (cfg.contains("method") && !o_method->count()) method = cfg.at("method").get<std::string>();
    }
    for (const auto& [k, v] : parse_params(s.params)) params[k] = v;

    ReportOptions opt;
    opt.swkb.tol_level = s.tol;
    opt.tol_contour = s.tol;
    opt.dump_wavefunction = s.dump;
    const Format fmt = parse_format(s.format);

    Report r;
    if (*list) {
      r = catalog_report(s.hbar);
    } else {
      const PotentialSpec spec = make_potential(id, params, s.hbar);
      if (*spectrum) r = spectrum_report(spec, levels, parse_method(method), opt);
      else if (*compare) r = to_report(compare_levels(spec, levels, opt));
      else if (*contours) r = contours_report(spec, energy);
      else if (*census_cmd) r = census_report(spec, energy);
      else if (*defect) r = defect_report_table(spec, level, opt);
    }

    if (s.out.empty()) {
      write_report(std::cout, r, fmt);
    } else {
      std::ofstream out(s.out);
      if (!out) throw DomainError("cannot write " + s.out);
      write_report(out, r, fmt);
    }
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "domain error: config: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  }
}
