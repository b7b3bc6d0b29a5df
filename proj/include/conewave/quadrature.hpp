#pragma once

#include <vector>

namespace conewave {

struct GaussLegendre {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

// n-point Gauss–Legendre rule mapped to [0, 1]; results are cached per n.
const GaussLegendre& gauss_legendre(int n);

}  // namespace conewave
