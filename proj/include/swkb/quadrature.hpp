#pragma once

#include <vector>

namespace swkb {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// n-point Gauss-Legendre rule; cached, safe to call from several threads.
const GaussRule& gauss_legendre(int n);

}  // namespace swkb
