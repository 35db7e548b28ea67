#include "gct/gmsolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gct/errors.hpp"

namespace gct {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void normalize_rows_cols(Eigen::Map<RowMat>& X, int sweeps) {
  const bool square = X.rows() == X.cols();
  for (int s = 0; s < sweeps; ++s) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double r = X.row(i).sum();
      if (r > 0) X.row(i) /= r;
    }
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double c = X.col(j).sum();
      // Rectangular case: the column's slack takes up 1 - c, so only over-full
      // columns are scaled.
      if (square ? c > 0 : c > 1.0) X.col(j) /= c;
    }
  }
}

}  // namespace

double assignment_objective(const Eigen::MatrixXd& K, int n2, const std::vector<std::pair<int, int>>& matches) {
  double obj = 0.0;
  for (const auto& [i, j] : matches) {
    const int a = i * n2 + j;
    for (const auto& [k, l] : matches) obj += K(a, k * n2 + l);
  }
  return obj;
}

SoftAssignment solve_relaxed(const Eigen::MatrixXd& K, int n1, int n2, const SolverParams& params) {
  if (n1 < 1 || n2 < 1 || K.rows() != static_cast<Eigen::Index>(n1) * n2 || K.cols() != K.rows())
    throw DimensionError("affinity matrix order does not match n1*n2");
  if (params.max_iters < 1 || !(params.tol > 0)) throw std::invalid_argument("max_iters >= 1 and tol > 0 required");
  if (K.hasNaN()) throw NumericalError("affinity matrix contains NaN");

  const Eigen::Index order = K.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(order, 1.0 / static_cast<double>(order));
  Eigen::VectorXd y(order);
  SoftAssignment out;
  for (int it = 1; it <= params.max_iters; ++it) {
    y.noalias() = K * x;
    const double peak = y.maxCoeff();
    if (peak > 0) {
      y /= peak;
      y = y.array().pow(params.beta).matrix();
    } else {
      y.setConstant(1.0);
    }
    Eigen::Map<RowMat> Y(y.data(), n1, n2);
    normalize_rows_cols(Y, params.sinkhorn_sweeps);
    const double total = y.sum();
    if (total > 0)
      y /= total;
    else
      y.setConstant(1.0 / static_cast<double>(order));

    const double change = (y - x).cwiseAbs().maxCoeff();
    x.swap(y);
    out.iterations_used = it;
    if (change < params.tol) {
      out.converged = true;
      break;
    }
  }
  out.weights = Eigen::Map<RowMat>(x.data(), n1, n2);
  return out;
}

Assignment discretize(const SoftAssignment& soft, const Eigen::MatrixXd& K) {
  const auto& W = soft.weights;
  const int n1 = static_cast<int>(W.rows()), n2 = static_cast<int>(W.cols());
  std::vector<int> order(static_cast<std::size_t>(n1) * n2);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return W(a / n2, a % n2) > W(b / n2, b % n2); });

  std::vector<bool> row_used(n1, false), col_used(n2, false);
  Assignment out;
  const int want = std::min(n1, n2);
  for (int a : order) {
    const int i = a / n2, j = a % n2;
    if (row_used[i] || col_used[j]) continue;
    row_used[i] = col_used[j] = true;
    out.matches.emplace_back(i, j);
    if (static_cast<int>(out.matches.size()) == want) break;
  }
  std::sort(out.matches.begin(), out.matches.end());
  out.objective = assignment_objective(K, n2, out.matches);
  return out;
}

namespace {

struct Enumerator {
  const Eigen::MatrixXd& K;
  int n1, n2;
  std::vector<std::pair<int, int>> current;
  std::vector<bool> used;
  Assignment best;
  bool have_best = false;

  void recurse(int i) {
    if (i == n1) {
      const double obj = assignment_objective(K, n2, current);
      if (!have_best || obj > best.objective) {
        best.matches = current;
        best.objective = obj;
        have_best = true;
      }
      return;
    }
    for (int j = 0; j < n2; ++j) {
      if (used[j]) continue;
      used[j] = true;
      current.emplace_back(i, j);
      recurse(i + 1);
      current.pop_back();
      used[j] = false;
    }
  }
};

}  // namespace

Assignment brute_force_matching(const Eigen::MatrixXd& K, int n1, int n2) {
  if (n1 < 1 || n1 > 8 || n2 > 8 || n2 < n1)
    throw std::length_error("brute force matching requires 1 <= n1 <= n2 <= 8");
  if (K.rows() != static_cast<Eigen::Index>(n1) * n2 || K.cols() != K.rows())
    throw DimensionError("affinity matrix order does not match n1*n2");
  Enumerator e{K, n1, n2, {}, std::vector<bool>(n2, false), {}};
  e.recurse(0);
  return e.best;
}

Assignment match_stripe(const AttributedGraph& probe, const AttributedGraph& gallery, int stripe_idx,
                        const MatchingConfig& config) {
  const MatchProblem mp = stripe_search_space(probe.layout, gallery.layout, stripe_idx, config.expand_rows);
  if (mp.n2() < mp.n1())
    throw DimensionError("gallery search space of stripe " + std::to_string(stripe_idx) + " smaller than probe stripe");
  const Eigen::MatrixXd K = build_affinity_matrix(probe, gallery, mp, config.affinity);
  Assignment local = discretize(solve_relaxed(K, mp.n1(), mp.n2(), config.solver), K);
  for (auto& [i, j] : local.matches) {
    i = mp.probe_nodes[i];
    j = mp.gallery_nodes[j];
  }
  return local;
}

std::vector<int> match_image_pair(const AttributedGraph& probe, const AttributedGraph& gallery,
                                  const MatchingConfig& config) {
  if (!probe.layout.same_geometry(gallery.layout))
    throw LayoutMismatchError("probe and gallery graphs use different patch configurations");
  std::vector<int> gallery_of(probe.size(), -1);
  for (int s = 0; s < probe.layout.n_stripes; ++s)
    for (const auto& [p, g] : match_stripe(probe, gallery, s, config).matches) gallery_of[p] = g;
  return gallery_of;
}

}  // namespace gct
