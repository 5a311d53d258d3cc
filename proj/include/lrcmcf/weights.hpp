#pragma once

#include "lrcmcf/linalg.hpp"
#include "lrcmcf/view_graph.hpp"

#include <span>

#include <vector>

namespace lrcmcf {

struct ViewWeights {
  Vector w;        // on the probability simplex
  double r = 2.0;  // smoothing exponent, r > 1

  static ViewWeights uniform(int views, double r);
  // (w_v)^r, the coefficient each view carries in the fusion term.
  Vector powered() const { return w.array().pow(r).matrix(); }
};

// Closed-form minimizer of sum_v w_v^r * divergence_v over the simplex:
// w_v proportional to divergence_v^(1/(1-r)). Views with divergence below
// 1e-12 share all the weight (the limit of the formula).
ViewWeights update_weights(const Vector& divergences, double r);

// |S* - S^v|_F^2 for every view.
Vector view_divergences(const Matrix& s_star, std::span<const ViewAffinity> views);

}  // namespace lrcmcf
