#pragma once

#include <Eigen/Dense>

namespace safegp {

/// Axis-aligned operating box.
struct Domain {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Eigen::Index dim() const { return lo.size(); }
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Throws InputError unless lo < hi componentwise.
  void validate() const;
};

/// Linear ramp from start to end sampled at m equidistant points (endpoints included).
struct Trajectory {
  Eigen::VectorXd start;
  Eigen::VectorXd end;
  Eigen::MatrixXd points;  ///< m x d

  static Trajectory ramp(const Eigen::VectorXd& start, const Eigen::VectorXd& end, int m);
  Eigen::Index size() const { return points.rows(); }
};

}  // namespace safegp
