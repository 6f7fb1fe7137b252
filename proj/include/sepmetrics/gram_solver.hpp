#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace sepmetrics {

/// Cholesky solver for Gram (normal-equation) matrices of source sets.
///
/// The plain factorization is accepted when every squared pivot exceeds the
/// jitter level 1e-12 * trace / n. Otherwise the diagonal is loaded with that
/// jitter and factorized again. If inverse iteration on the loaded matrix finds
/// an eigenvalue below 1.5 times the jitter, some source direction carries
/// (numerically) no energy and DegenerateSourcesError is thrown. No
/// pseudo-inverse fallback.
class GramSolver {
 public:
  explicit GramSolver(const Eigen::MatrixXd& gram);

  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  [[nodiscard]] bool jittered() const noexcept { return jittered_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return llt_.matrixLLT().rows(); }

  static constexpr double kRelativeJitter = 1e-12;

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  bool jittered_ = false;
};

}  // namespace sepmetrics
