#pragma once

#include <Eigen/Core>
#include <atomic>
#include <cstdint>
#include <utility>
#include <vector>

namespace gct {

/// Mahalanobis patch distance learned KISSME-style: a PCA basis fitted on
/// pair differences and M = psd(inv(Sigma_S) - inv(Sigma_D)) in the reduced
/// space. delta(x, y) = (B^T (x - y))^T M (B^T (x - y)).
struct MetricModel {
  Eigen::VectorXd pca_mean;  // mean difference vector seen while fitting the basis
  Eigen::MatrixXd pca_basis; // d_in x d_red, orthonormal columns
  Eigen::MatrixXd M;         // d_red x d_red, symmetric PSD

  int input_dim() const { return static_cast<int>(pca_basis.rows()); }
  int reduced_dim() const { return static_cast<int>(pca_basis.cols()); }

  /// Identity metric over `dim` inputs (plain squared Euclidean distance).
  static MetricModel euclidean(int dim);
};

using VectorPair = std::pair<Eigen::VectorXd, Eigen::VectorXd>;

struct KissmeParams {
  int d_red = 64;    // clamped to the input dimension
  double reg = 1e-4;
};

/// Throws std::invalid_argument for too few pairs and NumericalError when a
/// regularized covariance is still singular.
MetricModel fit_kissme(const std::vector<VectorPair>& similar, const std::vector<VectorPair>& dissimilar,
                       const KissmeParams& params = {});

/// Projects M onto the PSD cone by zeroing negative eigenvalues.
Eigen::MatrixXd clip_psd(const Eigen::MatrixXd& A);

double metric_distance(const MetricModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y);

/// Counts metric evaluations. Safe to share between threads.
class DeltaCounter {
 public:
  void add(std::uint64_t n) { count_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t value() const { return count_.load(std::memory_order_relaxed); }
  void reset() { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

}  // namespace gct
