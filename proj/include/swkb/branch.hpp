#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <span>
#include <sstream>

#include "swkb/errors.hpp"

namespace swkb {

using cplx = std::complex<double>;

// A point and the value of sqrt(q) there on the tracked sheet.
struct BranchedSqrtState {
  cplx point;
  cplx value;
};

struct ContinuationOptions {
  double separation_factor = 10.0;  // candidates must differ by this many drifts
  int max_halvings = 40;
  double min_step_fraction = 1e-12;  // of the segment length; finer steps cannot resolve the sheet
  int max_substeps = 100000;         // per path segment
  // Known zeros of q. Each step then stays within half the distance to the nearest
  // one, so a long step cannot slip past a pair of branch points unnoticed.
  std::span<const cplx> zeros;
};

// Picks the root of q(to) nearest the current value, halving the step while
// the choice is not clearly separated from the alternative.
template <typename Radicand>
BranchedSqrtState continue_sqrt(BranchedSqrtState s, std::span<const cplx> path, const Radicand& q,
                                ContinuationOptions opt = {}) {
  auto refuse = [](const cplx& at, const char* why) {
    std::ostringstream msg;
    msg << "continue_sqrt: ambiguous continuation near " << at << " (" << why << ")";
    throw BranchAmbiguityError(msg.str());
  };
  for (const cplx& target : path) {
    if (q(target) == cplx(0.0)) refuse(target, "path ends on a branch point");
    double frac = 1.0;  // trial step as a fraction of what is left of the segment
    const double min_step = opt.min_step_fraction * std::abs(target - s.point);
    int substeps = 0;
    while (s.point != target) {
      if (++substeps > opt.max_substeps) refuse(s.point, "too many substeps");
      const cplx from = s.point;
      if (!opt.zeros.empty()) {
        double reach = std::numeric_limits<double>::infinity();
        for (const cplx& z : opt.zeros) reach = std::min(reach, 0.5 * std::abs(from - z));
        const double left = std::abs(target - from);
        if (left > reach) frac = std::min(frac, reach / left);
      }
      int halvings = 0;
      for (;;) {
        const cplx to = (frac >= 1.0) ? target : from + frac * (target - from);
        if (frac < 1.0 && std::abs(to - from) < min_step) refuse(to, "step size collapsed");
        const cplx w = std::sqrt(q(to));
        const cplx pick = (std::abs(w - s.value) <= std::abs(w + s.value)) ? w : -w;
        const double drift = std::abs(pick - s.value);
        if (2.0 * std::abs(w) > opt.separation_factor * drift) {
          s = {to, pick};
          if (frac < 1.0) frac = std::min(1.0, 2.0 * frac / (1.0 - frac));
          break;
        }
        if (++halvings > opt.max_halvings) refuse(to, "candidates not separated");
        frac *= 0.5;
      }
    }
  }
  return s;
}

}  // namespace swkb
