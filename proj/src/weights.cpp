#include "lrcmcf/weights.hpp"

#include "lrcmcf/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lrcmcf {

namespace {
constexpr double kAgreementFloor = 1e-12;
}

ViewWeights ViewWeights::uniform(int views, double r) {
  return {Vector::Constant(views, 1.0 / views), r};
}

ViewWeights update_weights(const Vector& divergences, double r) {
  if (!(r > 1.0)) throw ConfigError("weight exponent r must exceed 1");
  const auto m = divergences.size();
  if (m < 1) throw ValidationError("no view divergences given");
  if (!divergences.allFinite() || divergences.minCoeff() < 0.0) {
    throw ValidationError("view divergences must be finite and nonnegative");
  }

  ViewWeights out{Vector::Zero(m), r};
  const auto agreeing = (divergences.array() < kAgreementFloor).count();
  if (agreeing > 0) {
    for (Eigen::Index v = 0; v < m; ++v) {
      if (divergences[v] < kAgreementFloor) out.w[v] = 1.0 / static_cast<double>(agreeing);
    }
    return out;
  }

  // Work relative to the smallest divergence so the powers stay in range.
  const double base = divergences.minCoeff();
  const double exponent = 1.0 / (1.0 - r);
  for (Eigen::Index v = 0; v < m; ++v) out.w[v] = std::pow(divergences[v] / base, exponent);
  out.w /= out.w.sum();
  return out;
}

Vector view_divergences(const Matrix& s_star, std::span<const ViewAffinity> views) {
  const auto n = s_star.rows();
  const Vector row_norms = s_star.rowwise().squaredNorm();
  Vector out(static_cast<Eigen::Index>(views.size()));
  std::vector<double> per_row(static_cast<std::size_t>(n));
  for (std::size_t v = 0; v < views.size(); ++v) {
    const ViewAffinity& view = views[v];
    if (view.size() != n || s_star.cols() != n) {
      throw ValidationError("view " + std::to_string(v) + " does not match the consensus size");
    }
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      double value = row_norms[i];
      for (int slot = 0; slot < view.k; ++slot) {
        const double consensus = s_star(i, view.neighbors(i, slot));
        const double diff = consensus - view.weights(i, slot);
        value += diff * diff - consensus * consensus;
      }
      per_row[static_cast<std::size_t>(i)] = value;
    }
    double total = 0.0;
    for (double value : per_row) total += value;
    out[static_cast<Eigen::Index>(v)] = std::max(total, 0.0);
  }
  return out;
}

}  // namespace lrcmcf
