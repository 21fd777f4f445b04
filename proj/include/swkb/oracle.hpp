#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "swkb/catalog.hpp"

namespace swkb {

// How the eigenfunction is started at one end of the box.
struct Boundary {
  enum class Kind {
    singular,   // inverse-square wall at x: psi = d^s sum_k a_k d^k
    dirichlet,  // regular end with psi = 0
    decaying    // infinite end truncated at x, grown until psi has decayed
  };
  Kind kind = Kind::dirichlet;
  double x = 0.0;
  double exponent = 0.0;  // s, singular ends only
  // Taylor coefficients of d^2 V(x +- d) / hbar^2 in the distance d from the wall; the first
  // equals s (s - 1). Empty means a pure inverse-square wall.
  std::vector<double> laurent;
  double series_radius = 0.0;  // d up to which the Frobenius series may be used
};

// Frobenius coefficients a_0 = 1, a_1, ... at energy E.
std::vector<double> frobenius_coefficients(const Boundary& b, double E, double hbar);

// -hbar^2 psi'' + V psi = E psi on (left.x, right.x).
struct OracleProblem {
  std::function<double(double)> potential;
  double hbar = 1.0;
  Boundary left, right;
};

OracleProblem oracle_problem(const PotentialSpec& spec);

struct GridSolution {
  std::vector<double> grid;
  std::vector<double> psi;  // unit L2 norm, positive next to the left end
  double energy = 0.0;
  int node_count = 0;
  double x_min = 0.0, x_max = 0.0;
  double step = 0.0;
};

struct NumerovOptions {
  int points = 20001;
  bool richardson = true;
  double decay_tol = 1e-8;
  int max_box_growth = 24;
};

struct NumerovResult {
  double energy = 0.0;          // Richardson-extrapolated when enabled
  double error_estimate = 0.0;  // |E_{h/2} - E_h| / 15
  GridSolution solution;        // finest grid
};

// Eigenpair with exactly n interior nodes on a fixed box and grid.
GridSolution solve_on_grid(const OracleProblem& p, int n, int points);

// Box truncation, then two grids and Richardson extrapolation.
NumerovResult numerov_solve(const OracleProblem& p, int n, const NumerovOptions& opt = {});
NumerovResult numerov_solve(const PotentialSpec& spec, int n, const NumerovOptions& opt = {});
double numerov_eigenvalue(const PotentialSpec& spec, int n, const NumerovOptions& opt = {});

// Max |psi_{i+1} - 2 psi_i + psi_{i-1} - Numerov rhs| relative to max |psi|, over the
// samples produced by the recurrence (wall series zones excluded).
double numerov_recurrence_residual(const GridSolution& s, const OracleProblem& p);

struct QuantumAction {
  double value = 0.0;     // hbar times the node count inside the turning points
  int nodes_inside = 0;
  bool ambiguous = false;  // a node lies within two grid steps of a turning point, or outside
};

QuantumAction quantum_action(const GridSolution& s, const OracleProblem& p, double E);
QuantumAction quantum_action(const GridSolution& s, const PotentialSpec& spec, double E);

// Max of |p^2 + (hbar/i) p' - (E - V)| with p = (hbar/i) psi'/psi, over grid points where
// |psi| >= 0.2 max|psi| and psi keeps its sign across the difference stencil.
double qhj_residual(const GridSolution& s, const OracleProblem& p, double E);
double qhj_residual(const GridSolution& s, const PotentialSpec& spec, double E);

void write_wavefunction_csv(std::ostream& os, const GridSolution& s);

}  // namespace swkb
