#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "gct/affinity.hpp"

namespace gct {

struct SolverParams {
  double beta = 30.0;       // reweighting exponent
  int sinkhorn_sweeps = 10;
  int max_iters = 300;
  double tol = 1e-8;
};

/// Relaxed assignment, n1 x n2, rows = probe candidates.
struct SoftAssignment {
  Eigen::MatrixXd weights;
  int iterations_used = 0;
  bool converged = false;
};

/// One-to-one match set in local candidate coordinates (indices into the
/// MatchProblem's node lists) or, after match_image_pair, graph node indices.
struct Assignment {
  std::vector<std::pair<int, int>> matches;
  double objective = 0.0;
};

/// x^T K x of the binary indicator of `matches` (local indices).
double assignment_objective(const Eigen::MatrixXd& K, int n2, const std::vector<std::pair<int, int>>& matches);

/// Reweighted power iteration over K with bistochastic-style normalization:
/// x <- Kx, rescale to max 1, raise to beta, alternate row/column
/// normalization, L1-normalize; stop once the sup-norm change drops below tol.
/// When n2 > n1 each gallery column carries an implicit slack entry, so
/// column sums are only capped at 1 while rows are normalized to 1.
SoftAssignment solve_relaxed(const Eigen::MatrixXd& K, int n1, int n2, const SolverParams& params = {});

/// Greedy binarization: take the largest remaining weight, commit it, strike
/// its row and column. Ties go to the lowest (probe, gallery) pair.
Assignment discretize(const SoftAssignment& soft, const Eigen::MatrixXd& K);

/// Exhaustive search over all injections probe -> gallery. n1, n2 <= 8.
Assignment brute_force_matching(const Eigen::MatrixXd& K, int n1, int n2);

struct MatchingConfig {
  AffinityParams affinity;
  SolverParams solver;
  int expand_rows = 1;
};

/// Stripe-constrained graph matching of two patch graphs. Returns, for every
/// probe patch p (in order), the matched gallery patch: result[p] = g.
std::vector<int> match_image_pair(const AttributedGraph& probe, const AttributedGraph& gallery,
                                  const MatchingConfig& config);

/// Single stripe, graph node indices.
Assignment match_stripe(const AttributedGraph& probe, const AttributedGraph& gallery, int stripe_idx,
                        const MatchingConfig& config);

}  // namespace gct
