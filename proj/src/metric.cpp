#include "gct/metric.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>
#include <string>

#include "gct/errors.hpp"

namespace gct {

MetricModel MetricModel::euclidean(int dim) {
  MetricModel m;
  m.pca_mean = Eigen::VectorXd::Zero(dim);
  m.pca_basis = Eigen::MatrixXd::Identity(dim, dim);
  m.M = Eigen::MatrixXd::Identity(dim, dim);
  return m;
}

Eigen::MatrixXd clip_psd(const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  const Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd out = es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

namespace {

Eigen::MatrixXd differences(const std::vector<VectorPair>& pairs, int dim) {
  Eigen::MatrixXd D(dim, static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first.size() != dim || pairs[i].second.size() != dim)
      throw DimensionError("pair " + std::to_string(i) + " has inconsistent dimension");
    D.col(static_cast<Eigen::Index>(i)) = pairs[i].first - pairs[i].second;
  }
  return D;
}

// Second moment of projected differences plus reg * I, then inverted.
Eigen::MatrixXd regularized_inverse(const Eigen::MatrixXd& P, double reg, const char* which) {
  const Eigen::Index d = P.rows();
  Eigen::MatrixXd sigma = P * P.transpose() / static_cast<double>(P.cols());
  sigma += reg * Eigen::MatrixXd::Identity(d, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-12 * std::max(hi, 1e-300)))
    throw NumericalError(std::string(which) + " covariance is singular after regularization");
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

MetricModel fit_kissme(const std::vector<VectorPair>& similar, const std::vector<VectorPair>& dissimilar,
                       const KissmeParams& params) {
  if (similar.empty() || dissimilar.empty()) throw std::invalid_argument("KISSME needs similar and dissimilar pairs");
  if (params.reg < 0) throw std::invalid_argument("reg must be >= 0");
  const int dim = static_cast<int>(similar.front().first.size());
  const int d_red = std::min(params.d_red, dim);
  if (d_red < 1) throw std::invalid_argument("d_red must be >= 1");
  if (static_cast<int>(similar.size()) < d_red + 1 || static_cast<int>(dissimilar.size()) < d_red + 1)
    throw std::invalid_argument("KISSME needs at least d_red+1 pairs of each kind (d_red=" + std::to_string(d_red) +
                                ")");

  const Eigen::MatrixXd DS = differences(similar, dim);
  const Eigen::MatrixXd DD = differences(dissimilar, dim);

  Eigen::MatrixXd all(dim, DS.cols() + DD.cols());
  all << DS, DD;
  MetricModel model;
  model.pca_mean = all.rowwise().mean();
  const Eigen::MatrixXd centered = all.colwise() - model.pca_mean;
  const Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(all.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pca(cov);
  // Eigenvalues ascend; keep the d_red leading components, largest first.
  model.pca_basis = pca.eigenvectors().rightCols(d_red).rowwise().reverse();

  const Eigen::MatrixXd PS = model.pca_basis.transpose() * DS;
  const Eigen::MatrixXd PD = model.pca_basis.transpose() * DD;
  model.M = clip_psd(regularized_inverse(PS, params.reg, "similar") - regularized_inverse(PD, params.reg, "dissimilar"));
  return model;
}

double metric_distance(const MetricModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != model.input_dim() || y.size() != model.input_dim())
    throw DimensionError("metric expects dimension " + std::to_string(model.input_dim()));
  const Eigen::VectorXd d = model.pca_basis.transpose() * (x - y);
  return std::max(0.0, d.dot(model.M * d));
}

}  // namespace gct
