#include "safegp/trajectory.hpp"

#include "safegp/errors.hpp"

namespace safegp {

bool Domain::contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return x.size() == dim() && (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

void Domain::validate() const {
  if (lo.size() == 0 || lo.size() != hi.size()) throw InputError("domain: bounds dimension mismatch");
  if (!(lo.array() < hi.array()).all()) throw InputError("domain: need lo < hi componentwise");
}

Trajectory Trajectory::ramp(const Eigen::VectorXd& start, const Eigen::VectorXd& end, int m) {
  if (m < 1) throw InputError("ramp: need at least one point");
  if (start.size() != end.size()) throw InputError("ramp: endpoint dimension mismatch");
  Trajectory t{start, end, Eigen::MatrixXd(m, start.size())};
  if (m == 1) {
    t.points.row(0) = end.transpose();
    return t;
  }
  for (int i = 0; i < m; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(m - 1);
    t.points.row(i) = ((1.0 - s) * start + s * end).transpose();
  }
  t.points.row(m - 1) = end.transpose();
  return t;
}

}  // namespace safegp
