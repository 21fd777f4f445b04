#include "swkb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace swkb {

namespace {

constexpr double kBig = 1e120;

// Uniform grid with potential samples; singular end points carry no sample.
struct Grid {
  int M = 0;  // last index
  double a = 0.0, h = 0.0;
  std::vector<double> x, V;
  double vmin = 0.0;
};

Grid make_grid(const OracleProblem& p, int points) {
  Grid g;
  g.M = points - 1;
  g.a = p.left.x;
  g.h = (p.right.x - p.left.x) / g.M;
  g.x.resize(points);
  g.V.resize(points);
  g.vmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= g.M; ++i) {
    g.x[i] = (i == g.M) ? p.right.x : g.a + i * g.h;
    const bool sing = (i == 0 && p.left.kind == Boundary::Kind::singular) ||
                      (i == g.M && p.right.kind == Boundary::Kind::singular);
    g.V[i] = sing ? std::numeric_limits<double>::infinity() : p.potential(g.x[i]);
    if (!sing) g.vmin = std::min(g.vmin, g.V[i]);
  }
  return g;
}

// Samples next to an end that are taken from the boundary behaviour rather than the recurrence.
struct Start {
  int count = 1;
  std::vector<double> a;  // Frobenius coefficients; empty for regular ends
  double s = 0.0;

  double value(double d) const {
    if (a.empty()) return d;
    double acc = 0.0;
    for (std::size_t k = a.size(); k-- > 0;) acc = acc * d + a[k];
    return std::pow(d, s) * acc;
  }
};

constexpr double kSeriesTol = 1e-15;

Start make_start(const Boundary& b, double E, double hbar, double h) {
  Start st;
  if (b.kind != Boundary::Kind::singular) return st;
  st.s = b.exponent;
  st.a = frobenius_coefficients(b, E, hbar);
  // Enough samples that the Numerov weight 1 - h^2 f / 12 stays positive afterwards.
  const double gamma = st.s * (st.s - 1.0);
  int k = 2;
  while (gamma / (12.0 * (k + 1) * (k + 1)) > 0.5) ++k;
  // Further out, as long as the last two series terms are negligible (one may vanish by parity).
  double reach = b.series_radius;
  for (std::size_t K = st.a.size() - 2; K < st.a.size(); ++K)
    if (K >= 1 && st.a[K] != 0.0)
      reach = std::min(reach, std::pow(kSeriesTol / std::abs(st.a[K]), 1.0 / static_cast<double>(K)));
  st.count = std::max(k, static_cast<int>(reach / h));
  return st;
}

// One-sided shot. dir = +1 integrates from the left end, -1 from the right.
// Fills u (Numerov variable) and psi between the start end and index `stop`.
struct Shot {
  std::vector<double> psi, u;
};

void shoot(const Grid& g, const OracleProblem& p, double E, int dir, int stop, const Start& st, Shot& s) {
  const double h2 = g.h * g.h, hb2 = p.hbar * p.hbar;
  s.psi.assign(g.M + 1, 0.0);
  s.u.assign(g.M + 1, 0.0);
  auto idx = [&](int k) { return dir > 0 ? k : g.M - k; };
  auto weight = [&](int k) { return 1.0 - h2 * (g.V[idx(k)] - E) / (12.0 * hb2); };
  const int kstop = dir > 0 ? stop : g.M - stop;
  const int k0 = std::min(st.count, kstop);

  for (int k = 1; k <= k0; ++k) {
    s.psi[idx(k)] = st.value(k * g.h);
    s.u[idx(k)] = weight(k) * s.psi[idx(k)];
  }
  for (int k = k0; k < kstop; ++k) {
    const int i = idx(k), inext = idx(k + 1), iprev = idx(k - 1);
    s.u[inext] = 2.0 * s.u[i] - s.u[iprev] + h2 * (g.V[i] - E) / hb2 * s.psi[i];
    s.psi[inext] = s.u[inext] / weight(k + 1);
    if (std::abs(s.u[inext]) > kBig)
      for (int j = 0; j <= k + 1; ++j) {
        s.psi[idx(j)] /= kBig;
        s.u[idx(j)] /= kBig;
      }
  }
}

// Both shots at one energy, matched at m: the rightmost classically allowed sample outside the
// series start zones, so that neither shot crosses a singular wall with the plain recurrence.
struct Shots {
  Start left, right;
  int m = 0;
};

Shots plan(const Grid& g, const OracleProblem& p, double E) {
  Shots sh;
  sh.left = make_start(p.left, E, p.hbar, g.h);
  sh.right = make_start(p.right, E, p.hbar, g.h);
  const int lo = std::max(2, sh.left.count);
  const int hi = std::min(g.M - 3, g.M - sh.right.count - 1);
  if (lo > hi) {
    sh.m = std::clamp(g.M / 2, 2, g.M - 3);
    return sh;
  }
  int m = -1;
  for (int i = hi; i >= lo; --i)
    if (g.V[i] < E) {
      m = i;
      break;
    }
  if (m < 0) {
    m = lo;
    for (int i = lo; i <= hi; ++i)
      if (g.V[i] < g.V[m]) m = i;
  }
  sh.m = m;
  return sh;
}

// Number of eigenvalues of the discrete problem below E.
int eigen_count(const Grid& g, const OracleProblem& p, double E) {
  const Shots sh = plan(g, p, E);
  const int m = sh.m;
  // Left shot covers 0..m+1, right shot covers M..m.
  Shot L, R;
  shoot(g, p, E, +1, m + 1, sh.left, L);
  shoot(g, p, E, -1, m, sh.right, R);
  int nl = 0;
  double last = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double v = L.psi[i];
    if (v != 0.0 && last != 0.0 && (v > 0) != (last > 0)) ++nl;
    if (v != 0.0) last = v;
  }
  int nr = 0;
  last = 0.0;
  for (int i = g.M - 1; i >= m; --i) {
    const double v = R.psi[i];
    if (v != 0.0 && last != 0.0 && (v > 0) != (last > 0)) ++nr;
    if (v != 0.0) last = v;
  }
  const double W = L.u[m] * R.u[m + 1] - L.u[m + 1] * R.u[m];
  const bool below = W * L.u[m] * R.u[m] > 0;
  return nl + nr + (below ? 1 : 0);
}

GridSolution assemble(const Grid& g, const OracleProblem& p, double E) {
  const Shots sh = plan(g, p, E);
  const int m = sh.m;
  Shot L, R;
  shoot(g, p, E, +1, m, sh.left, L);
  shoot(g, p, E, -1, m, sh.right, R);
  GridSolution s;
  s.grid = g.x;
  s.psi.assign(g.M + 1, 0.0);
  const double scale = (R.psi[m] != 0.0) ? L.psi[m] / R.psi[m] : 1.0;
  for (int i = 0; i <= m; ++i) s.psi[i] = L.psi[i];
  for (int i = m + 1; i <= g.M; ++i) s.psi[i] = scale * R.psi[i];
  double norm = 0.0;
  for (int i = 0; i < g.M; ++i) norm += 0.5 * g.h * (s.psi[i] * s.psi[i] + s.psi[i + 1] * s.psi[i + 1]);
  norm = std::sqrt(norm);
  double sign = 1.0;
  for (int i = 1; i <= g.M; ++i)
    if (s.psi[i] != 0.0) {
      sign = s.psi[i] > 0 ? 1.0 : -1.0;
      break;
    }
  for (double& v : s.psi) v *= sign / norm;
  s.energy = E;
  s.x_min = g.x.front();
  s.x_max = g.x.back();
  s.step = g.h;
  double last = 0.0;
  for (int i = 1; i < g.M; ++i) {
    const double v = s.psi[i];
    if (v != 0.0 && last != 0.0 && (v > 0) != (last > 0)) ++s.node_count;
    if (v != 0.0) last = v;
  }
  return s;
}

// Fraction of the box adjacent to each decaying end that must be negligible.
constexpr double kTail = 0.05;

bool decayed(const GridSolution& s, const Boundary& b, bool left, double tol) {
  if (b.kind != Boundary::Kind::decaying) return true;
  const std::size_t n = s.psi.size();
  const std::size_t w = std::max<std::size_t>(2, static_cast<std::size_t>(kTail * n));
  double peak = 0.0, tail = 0.0;
  for (double v : s.psi) peak = std::max(peak, std::abs(v));
  for (std::size_t k = 0; k < w; ++k) tail = std::max(tail, std::abs(s.psi[left ? k : n - 1 - k]));
  return tail <= tol * peak;
}

}  // namespace

GridSolution solve_on_grid(const OracleProblem& p, int n, int points) {
  if (n < 0) throw DomainError("level index must be non-negative");
  if (points < 16) throw DomainError("Numerov grid needs at least 16 points");
  const Grid g = make_grid(p, points);

  double lo = g.vmin;
  if (eigen_count(g, p, lo) > n) lo -= 1.0 + std::abs(lo);
  double span = std::max(1.0, std::abs(lo));
  double hi = lo + span;
  int guard = 0;
  while (eigen_count(g, p, hi) <= n) {
    lo = hi;
    span *= 2.0;
    hi = lo + span;
    if (++guard > 200) throw ConvergenceError("Numerov: no upper bracket for level " + std::to_string(n));
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (eigen_count(g, p, mid) <= n) lo = mid; else hi = mid;
    if (hi - lo <= 4e-16 * std::max(1.0, std::abs(mid))) break;
  }
  GridSolution s = assemble(g, p, 0.5 * (lo + hi));
  if (s.node_count != n) {
    std::ostringstream msg;
    msg << "Numerov: level " << n << " eigenfunction has " << s.node_count << " nodes";
    throw ConvergenceError(msg.str());
  }
  return s;
}

NumerovResult numerov_solve(const OracleProblem& p0, int n, const NumerovOptions& opt) {
  OracleProblem p = p0;
  const int coarse = opt.points, fine = 2 * opt.points - 1;
  auto threshold = [&] {
    double t = std::numeric_limits<double>::infinity();
    for (const Boundary* b : {&p.left, &p.right})
      if (b->kind == Boundary::Kind::decaying) t = std::min(t, p.potential(b->x));
    return t;
  };
  auto not_bound = [&](double E) {
    std::ostringstream msg;
    msg << "level " << n << " is not bound: box eigenvalue " << E << " lies above the continuum threshold "
        << threshold();
    return DomainError(msg.str());
  };
  GridSolution s;
  bool have = false;
  for (int grow = 0;; ++grow) {
    // A continuum state keeps spreading as the box grows until the grid cannot resolve it.
    try {
      s = solve_on_grid(p, n, coarse);
    } catch (const ConvergenceError&) {
      if (have && !(s.energy < threshold())) throw not_bound(s.energy);
      throw;
    }
    have = true;
    const bool ok_l = decayed(s, p.left, true, opt.decay_tol);
    const bool ok_r = decayed(s, p.right, false, opt.decay_tol);
    if (ok_l && ok_r) break;
    if (grow >= opt.max_box_growth) {
      if (!(s.energy < threshold())) throw not_bound(s.energy);
      std::ostringstream msg;
      msg << "Numerov: eigenfunction " << n << " has not decayed at the box boundary (box ["
          << p.left.x << ", " << p.right.x << "]); a larger box is required";
      throw ConvergenceError(msg.str());
    }
    const double len = p.right.x - p.left.x;
    if (!ok_l) p.left.x -= 0.5 * len;
    if (!ok_r) p.right.x += 0.5 * len;
  }
  if (!(s.energy < threshold())) throw not_bound(s.energy);
  NumerovResult r;
  if (!opt.richardson) {
    r.energy = s.energy;
    r.solution = std::move(s);
    return r;
  }
  GridSolution f = solve_on_grid(p, n, fine);
  r.energy = f.energy + (f.energy - s.energy) / 15.0;
  r.error_estimate = std::abs(f.energy - s.energy) / 15.0;
  r.solution = std::move(f);
  return r;
}

std::vector<double> frobenius_coefficients(const Boundary& b, double E, double hbar) {
  const double s = b.exponent;
  std::vector<double> g = b.laurent;
  if (g.empty()) g.push_back(s * (s - 1.0));
  if (g.size() < 3) g.resize(3, 0.0);
  g[2] -= E / (hbar * hbar);
  const std::size_t K = std::max<std::size_t>(g.size() - 1, 2);
  std::vector<double> a(K + 1, 0.0);
  a[0] = 1.0;
  for (std::size_t k = 1; k <= K; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k && j < g.size(); ++j) acc += g[j] * a[k - j];
    a[k] = acc / (k * (2.0 * s + k - 1.0));
  }
  return a;
}

namespace {

// V continued to complex x through the mapped-variable rational superpotential.
cplx complex_v_minus(const PotentialSpec& spec, const RationalFunction<double>& dw, cplx x) {
  const cplx y = to_mapped(spec, x);
  const cplx w = spec.omega_y(y);
  return w * w - spec.hbar * dw(y) * mapped_jacobian(spec, y);
}

// Distance from a real end point to the nearest other singularity of V in the complex x plane.
double analytic_radius(const PotentialSpec& spec, double x_end) {
  double best = std::numeric_limits<double>::infinity();
  const double two_pi = 2.0 * std::numbers::pi;
  for (const cplx& y : find_roots(spec.omega_y.den())) {
    std::vector<cplx> xs;
    switch (spec.mapping) {
      case Mapping::identity: xs.push_back(y); break;
      case Mapping::exp:
        if (y == cplx(0.0)) break;
        for (int k = -2; k <= 2; ++k)
          xs.emplace_back(std::log(std::abs(y)) / spec.alpha, (std::arg(y) + two_pi * k) / spec.alpha);
        break;
      case Mapping::exp_i:
        if (y == cplx(0.0)) break;
        for (int k = -2; k <= 2; ++k)
          xs.emplace_back((std::arg(y) + two_pi * k) / spec.alpha, -std::log(std::abs(y)) / spec.alpha);
        break;
    }
    for (const cplx& x : xs) {
      const double d = std::abs(x - x_end);
      if (d > 1e-9 * std::max(1.0, std::abs(x_end))) best = std::min(best, d);
    }
  }
  return best;
}

}  // namespace

OracleProblem oracle_problem(const PotentialSpec& spec) {
  OracleProblem p;
  p.hbar = spec.hbar;
  p.potential = [spec](double x) { return v_minus(spec, x); };
  const double reach = 10.0 / spec.alpha;

  auto finite_end = [&](double x_end, int inward) {
    Boundary b;
    b.x = x_end;
    const auto c = endpoint_residue(spec, x_end);
    if (!c) {
      b.kind = Boundary::Kind::dirichlet;
      return b;
    }
    b.kind = Boundary::Kind::singular;
    b.exponent = -*c / spec.hbar;
    // For 0 < s <= 1/2 both Frobenius branches are square integrable; d^s is the one the
    // factorised ground state follows, and it is the branch selected here.
    if (!(b.exponent > 0.0))
      throw DomainError(spec.key + ": superpotential residue at the boundary gives no vanishing state");
    // Taylor coefficients of d^2 V / hbar^2 by the trapezoid rule on a circle around the wall.
    double R = analytic_radius(spec, x_end);
    if (!std::isfinite(R)) R = reach;
    const double r = 0.3 * R;
    constexpr int kNodes = 128, kTerms = 12;
    const RationalFunction<double> dw = spec.omega_y.derivative();
    std::vector<cplx> coef(kTerms, 0.0);
    for (int m = 0; m < kNodes; ++m) {
      const cplx u = std::polar(1.0, 2.0 * std::numbers::pi * m / kNodes);
      const cplx d = r * u;
      const cplx gval = d * d * complex_v_minus(spec, dw, x_end + static_cast<double>(inward) * d) /
                        (spec.hbar * spec.hbar);
      cplx up = 1.0;
      for (int j = 0; j < kTerms; ++j) {
        coef[j] += gval / up;
        up *= u;
      }
    }
    double rj = 1.0;
    for (int j = 0; j < kTerms; ++j) {
      b.laurent.push_back(coef[j].real() / kNodes / rj);
      rj *= r;
    }
    b.laurent[0] = b.exponent * (b.exponent - 1.0);
    b.series_radius = 0.5 * r;
    return b;
  };

  // Centre for doubly infinite domains: where |omega| is smallest.
  double centre = 0.0;
  if (!std::isfinite(spec.lo) && !std::isfinite(spec.hi)) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = -2000; k <= 2000; ++k) {
      const double x = k * 0.025 * reach;
      const double w = std::abs(omega_x(spec, x));
      if (w < best) {
        best = w;
        centre = x;
      }
    }
  }
  if (std::isfinite(spec.lo)) {
    p.left = finite_end(spec.lo, +1);
  } else {
    p.left.kind = Boundary::Kind::decaying;
    p.left.x = (std::isfinite(spec.hi) ? spec.hi : centre) - reach;
  }
  if (std::isfinite(spec.hi)) {
    p.right = finite_end(spec.hi, -1);
  } else {
    p.right.kind = Boundary::Kind::decaying;
    p.right.x = (std::isfinite(spec.lo) ? spec.lo : centre) + reach;
  }
  return p;
}

NumerovResult numerov_solve(const PotentialSpec& spec, int n, const NumerovOptions& opt) {
  if (spec.bound_count && n >= *spec.bound_count) {
    std::ostringstream msg;
    msg << spec.key << " has " << *spec.bound_count << " bound states; n=" << n << " is not bound";
    throw DomainError(msg.str());
  }
  return numerov_solve(oracle_problem(spec), n, opt);
}

double numerov_eigenvalue(const PotentialSpec& spec, int n, const NumerovOptions& opt) {
  return numerov_solve(spec, n, opt).energy;
}

double numerov_recurrence_residual(const GridSolution& s, const OracleProblem& p) {
  const std::size_t n = s.psi.size();
  const double h2 = s.step * s.step, hb2 = p.hbar * p.hbar;
  auto f = [&](std::size_t i) { return (p.potential(s.grid[i]) - s.energy) / hb2; };
  double peak = 0.0;
  for (double v : s.psi) peak = std::max(peak, std::abs(v));
  // Samples set from the wall series are exact values, not recurrence output.
  const std::size_t lo = std::max<std::size_t>(2, make_start(p.left, s.energy, p.hbar, s.step).count);
  const std::size_t hi = std::max<std::size_t>(2, make_start(p.right, s.energy, p.hbar, s.step).count);
  double worst = 0.0;
  for (std::size_t i = lo; i + hi < n; ++i) {
    const double fm = f(i - 1), f0 = f(i), fp = f(i + 1);
    const double lhs = (1 - h2 * fp / 12) * s.psi[i + 1] - 2 * (1 + 5 * h2 * f0 / 12) * s.psi[i] +
                       (1 - h2 * fm / 12) * s.psi[i - 1];
    worst = std::max(worst, std::abs(lhs));
  }
  return worst / peak;
}

namespace {

// Classical turning points of V at E on the grid, by linear interpolation.
bool classical_region(const GridSolution& s, const OracleProblem& p, double E, double& x1, double& x2) {
  const std::size_t n = s.grid.size();
  int first = -1, last = -1;
  std::vector<double> V(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool sing = (i == 0 && p.left.kind == Boundary::Kind::singular) ||
                      (i + 1 == n && p.right.kind == Boundary::Kind::singular);
    V[i] = sing ? std::numeric_limits<double>::infinity() : p.potential(s.grid[i]);
    if (V[i] < E) {
      if (first < 0) first = static_cast<int>(i);
      last = static_cast<int>(i);
    }
  }
  if (first < 0) return false;
  auto cross = [&](int i, int j) {
    if (!std::isfinite(V[j])) return s.grid[j];
    return s.grid[i] + (s.grid[j] - s.grid[i]) * (E - V[i]) / (V[j] - V[i]);
  };
  x1 = first > 0 ? cross(first, first - 1) : s.grid[0];
  x2 = last + 1 < static_cast<int>(n) ? cross(last, last + 1) : s.grid[n - 1];
  return true;
}

}  // namespace

QuantumAction quantum_action(const GridSolution& s, const OracleProblem& p, double E) {
  QuantumAction qa;
  double x1 = 0.0, x2 = 0.0;
  if (!classical_region(s, p, E, x1, x2)) {
    qa.ambiguous = s.node_count > 0;
    return qa;
  }
  const double delta = 2.0 * s.step;
  for (std::size_t i = 1; i + 1 < s.psi.size(); ++i) {
    const double a = s.psi[i], b = s.psi[i + 1];
    if (a == 0.0 || (a > 0) == (b > 0) || b == 0.0) continue;
    const double xn = s.grid[i] + (s.grid[i + 1] - s.grid[i]) * a / (a - b);
    if (xn > x1 && xn < x2) ++qa.nodes_inside;
    if (xn <= x1 + delta || xn >= x2 - delta) qa.ambiguous = true;
  }
  qa.value = p.hbar * qa.nodes_inside;
  return qa;
}

QuantumAction quantum_action(const GridSolution& s, const PotentialSpec& spec, double E) {
  return quantum_action(s, oracle_problem(spec), E);
}

double qhj_residual(const GridSolution& s, const OracleProblem& p, double E) {
  const int n = static_cast<int>(s.psi.size());
  const double h = s.step, hb2 = p.hbar * p.hbar;
  double peak = 0.0;
  for (double v : s.psi) peak = std::max(peak, std::abs(v));
  // Points are kept by the value of psi at the point alone, so the set does not move with the
  // step. Near a node q ~ 1/(x - x0) and the differenced q' error grows like h^4 / d^6.
  const double floor = 0.2 * peak;
  const double len = s.x_max - s.x_min;
  const double lo = s.x_min + (p.left.kind == Boundary::Kind::singular ? 0.02 * len : 0.0);
  const double hi = s.x_max - (p.right.kind == Boundary::Kind::singular ? 0.02 * len : 0.0);

  // q = psi'/psi by five-point differences.
  auto d5 = [&](const auto& v, int i) {
    return (v(i - 2) - 8.0 * v(i - 1) + 8.0 * v(i + 1) - v(i + 2)) / (12.0 * h);
  };
  auto psi = [&](int i) { return s.psi[i]; };
  auto q = [&](int i) { return d5(psi, i) / s.psi[i]; };

  double worst = 0.0;
  for (int i = 4; i < n - 4; ++i) {
    if (s.grid[i] < lo || s.grid[i] > hi) continue;
    if (std::abs(s.psi[i]) < floor) continue;
    bool safe = true;
    for (int j = i - 4; j <= i + 4; ++j)
      if (s.psi[j] == 0.0 || (s.psi[j] > 0) != (s.psi[i] > 0)) safe = false;
    if (!safe) continue;
    const double qi = q(i), dq = d5(q, i);
    // p = -i hbar q, so p^2 + (hbar/i) p' = -hbar^2 (q^2 + q').
    const double res = -hb2 * (qi * qi + dq) - (E - p.potential(s.grid[i]));
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

double qhj_residual(const GridSolution& s, const PotentialSpec& spec, double E) {
  return qhj_residual(s, oracle_problem(spec), E);
}

void write_wavefunction_csv(std::ostream& os, const GridSolution& s) {
  os << "x,psi\n";
  char buf[64];
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", s.grid[i], s.psi[i]);
    os << buf;
  }
}

}  // namespace swkb
