#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace offmorse {

using Index = Eigen::Index;
using VecRef = Eigen::Ref<const Eigen::VectorXd>;

inline constexpr double kDefaultTolNear = 1e-9;
inline constexpr double kDefaultTolBoundary = 1e-7;

/// Finite sample set Y, stored column-wise (dimension x count).
class PointCloud {
 public:
  /// Rejects empty input, non-finite coordinates and pairs closer than 1e-9.
  explicit PointCloud(Eigen::MatrixXd points);

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  Index dimension() const { return points_.rows(); }
  Index size() const { return points_.cols(); }
  const Eigen::MatrixXd& points() const { return points_; }
  auto point(Index i) const { return points_.col(i); }

  Eigen::VectorXd bbox_min() const { return points_.rowwise().minCoeff(); }
  Eigen::VectorXd bbox_max() const { return points_.rowwise().maxCoeff(); }
  double diameter() const;

 private:
  Eigen::MatrixXd points_;
};

/// X = Y^epsilon, the union of closed epsilon-balls around the samples.
class OffsetSet {
 public:
  OffsetSet(PointCloud cloud, double epsilon);

  const PointCloud& cloud() const { return cloud_; }
  double epsilon() const { return epsilon_; }
  Index dimension() const { return cloud_.dimension(); }

 private:
  PointCloud cloud_;
  double epsilon_;
};

enum class Membership { Interior, Boundary, Outside };

struct MembershipLabel {
  Membership label;
  double margin;  // d_Y(x) - epsilon
};

const char* to_string(Membership m);

double distance(const PointCloud& cloud, const VecRef& x);

/// Indices i with |x - y_i| <= d_Y(x) + tol_near, ascending.
std::vector<Index> nearest_set(const PointCloud& cloud, const VecRef& x, double tol_near = kDefaultTolNear);

MembershipLabel classify(const OffsetSet& offset, const VecRef& x, double tol_boundary = kDefaultTolBoundary);

/// Hausdorff distance between two column-wise point lists.
double hausdorff_distance(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b);

/// Plain-text cloud: one point per line, whitespace-separated, '#' comments.
PointCloud parse_point_text(std::istream& in);
PointCloud read_point_file(const std::filesystem::path& path);

}  // namespace offmorse
