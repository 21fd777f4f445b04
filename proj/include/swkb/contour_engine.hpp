#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swkb/catalog.hpp"
#include "swkb/contour.hpp"
#include "swkb/swkb.hpp"

namespace swkb {

enum class CutKind { classical, mirror, other };
std::string to_string(CutKind k);

struct BranchCut {
  cplx a;
  cplx b;
  CutKind kind;
};

// Symmetry of E - omega^2 in the mapped plane used to pair cuts.
enum class MirrorMap { none, negate, invert, negate_invert };
std::string to_string(MirrorMap m);
cplx apply(MirrorMap m, cplx y);

struct SingularityCensus {
  double energy = 0.0;
  std::vector<cplx> fixed_poles;  // finite ones, ordered by modulus then argument in [0, 2 pi)
  bool infinity = true;
  std::vector<cplx> branch_points;
  std::vector<BranchCut> branch_cuts;  // classical first, then mirror, then others
  MirrorMap mirror = MirrorMap::none;
};

SingularityCensus census(const PotentialSpec& spec, double E);

// Everything needed to integrate the anchored branch of sqrt(E - omega^2) at one energy.
class ContourProblem {
public:
  ContourProblem(const PotentialSpec& spec, double E);

  const SingularityCensus& singularities() const { return census_; }
  const BranchedIntegrand& integrand() const { return f_; }
  const CutPlane& cut_plane() const { return plane_; }
  double clearance() const { return plane_.clearance; }

  Contour pole_contour(cplx pole) const;
  Contour infinity_contour() const;
  Contour cut_contour(const BranchCut& cut) const;
  ContourValue evaluate(const Contour& c) const;

private:
  void attach_anchor_path(Contour& c) const;

  PotentialSpec spec_;
  SingularityCensus census_;
  BranchedIntegrand f_;
  CutPlane plane_;
  QuadratureOptions quad_;
};

struct PoleValue {
  cplx location;
  cplx value;
};

struct ContourDecomposition {
  double energy = 0.0;
  std::vector<PoleValue> J_gamma;
  cplx J_GammaR{};
  cplx J_classical_cut{};
  std::optional<cplx> J_mirror_cut;
  std::vector<BranchCut> other_cuts;
  std::vector<cplx> J_other_cuts;
  double closure_residual = 0.0;
};

cplx pole_contribution(const PotentialSpec& spec, double E, cplx pole);
cplx infinity_contribution(const PotentialSpec& spec, double E);
ContourDecomposition decompose(const PotentialSpec& spec, double E);

// Solves J_GammaR(E) - sum J_gamma(E) = 2 n hbar. Refuses entries with other cuts.
QuantizationResult quantize_by_contours(const PotentialSpec& spec, int n, double tol = 1e-10);

struct DefectReport {
  std::string id;
  int n = 0;
  double E_exact = 0.0;
  double J_swkb = 0.0;
  double J_obc_direct = 0.0;
  double J_obc_direct_imag = 0.0;
  double J_obc_indirect = 0.0;
  double consistency_gap = 0.0;
  int other_cut_count = 0;
};

// J_OBC from the other cuts directly and from 2 (n hbar - J_SWKB(E_exact)).
DefectReport defect_report(const PotentialSpec& spec, double E_exact, int n);

}  // namespace swkb
