#include "sepmetrics/gram_solver.hpp"

#include <cmath>
#include <string>

#include "sepmetrics/errors.hpp"

namespace sepmetrics {
namespace {

// Smallest squared Cholesky pivot, or -1 when the factorization failed.
double min_squared_pivot(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  if (llt.info() != Eigen::Success) return -1.0;
  const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
  if (!diag.allFinite()) return -1.0;
  return diag.array().square().minCoeff();
}

// Rayleigh-quotient estimate of the smallest eigenvalue of an SPD matrix
// from inverse iteration with its Cholesky factor.
double smallest_eigenvalue(const Eigen::MatrixXd& a, const Eigen::LLT<Eigen::MatrixXd>& llt) {
  Eigen::VectorXd x(a.rows());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = 1.0 + 0.37 * static_cast<double>(i % 7);
  x.normalize();
  for (int it = 0; it < 60; ++it) {
    x = llt.solve(x);
    const double norm = x.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) break;
    x /= norm;
  }
  return x.dot(a * x);
}

}  // namespace

GramSolver::GramSolver(const Eigen::MatrixXd& gram) {
  const Eigen::Index n = gram.rows();
  if (n == 0 || gram.cols() != n) throw InvalidArgumentError("Gram matrix must be square and non-empty");
  if (!gram.allFinite()) throw DegenerateSourcesError("Gram matrix has non-finite entries");
  const double jitter = kRelativeJitter * gram.trace() / static_cast<double>(n);
  if (!(jitter > 0.0)) throw DegenerateSourcesError("source set has zero energy");

  llt_.compute(gram);
  if (min_squared_pivot(llt_) > jitter) return;

  Eigen::MatrixXd loaded = gram;
  loaded.diagonal().array() += jitter;
  llt_.compute(loaded);
  jittered_ = true;
  if (min_squared_pivot(llt_) > 0.0 && smallest_eigenvalue(loaded, llt_) > 1.5 * jitter) return;
  throw DegenerateSourcesError(
      "source set is rank-deficient: the Gram matrix stays singular after relative jitter " +
      std::to_string(kRelativeJitter));
}

Eigen::VectorXd GramSolver::solve(const Eigen::VectorXd& rhs) const { return llt_.solve(rhs); }

}  // namespace sepmetrics
