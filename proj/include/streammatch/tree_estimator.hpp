#pragma once

#include <cstdint>

#include "streammatch/core.hpp"
#include "streammatch/l0_estimator.hpp"

// Matching-size estimator for forests: the matching size of a forest with no
// isolated node sits between h/2 and h, where h counts internal nodes
// (degree > 1). An l0 estimator over the degree-minus-one vector (each
// coordinate preseeded with -1) reads off h, since coordinate v is nonzero
// exactly when deg(v) != 1.
//
// Returns est = l0 / (2 (1 + eps)); whenever the l0 estimate lands within
// (1 +- eps) of h, est <= matching size <= 2 (1+eps)/(1-eps) * est.

namespace streammatch {

class TreeMatchingEstimator {
 public:
  TreeMatchingEstimator(std::uint32_t n, double eps, double delta, std::uint64_t seed)
      : eps_(eps), sketch_(n, eps, delta, seed) {
    for (std::uint32_t v = 0; v < n; ++v) sketch_.update(v, -1);
  }

  void update(const EdgeUpdate& up) {
    sketch_.update(up.edge.u, up.sign);
    sketch_.update(up.edge.v, up.sign);
  }

  double internal_node_estimate() const { return sketch_.estimate(); }

  double estimate() const { return sketch_.estimate() / (2.0 * (1.0 + eps_)); }

  static double guarantee_factor(double eps) { return 2.0 * (1.0 + eps) / (1.0 - eps); }

  long long size_words() const { return sketch_.size_words(); }

 private:
  double eps_;
  L0Estimator sketch_;
};

}  // namespace streammatch
