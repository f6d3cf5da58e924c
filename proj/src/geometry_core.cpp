#include "offmorse/geometry_core.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "offmorse/errors.hpp"

namespace offmorse {

namespace {

void require_dimension(const PointCloud& cloud, const VecRef& x) {
  if (x.size() != cloud.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "query has dimension " + std::to_string(x.size()) + ", cloud has " +
                    std::to_string(cloud.dimension()));
  }
}

}  // namespace

PointCloud::PointCloud(Eigen::MatrixXd points) : points_(std::move(points)) {
  if (points_.rows() == 0 || points_.cols() == 0) throw Error(ErrorCode::EmptyInput, "point cloud is empty");
  if (!points_.allFinite()) throw Error(ErrorCode::InvalidArgument, "point cloud has non-finite coordinates");
  for (Index i = 0; i < points_.cols(); ++i) {
    for (Index j = i + 1; j < points_.cols(); ++j) {
      if ((points_.col(i) - points_.col(j)).norm() < 1e-9) {
        throw Error(ErrorCode::InvalidArgument,
                    "duplicate samples " + std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "point cloud is empty");
  const auto d = static_cast<Index>(rows.front().size());
  Eigen::MatrixXd m(d, static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Index>(rows[i].size()) != d) {
      throw Error(ErrorCode::DimensionMismatch, "point " + std::to_string(i) + " has wrong dimension");
    }
    for (Index k = 0; k < d; ++k) m(k, static_cast<Index>(i)) = rows[i][static_cast<std::size_t>(k)];
  }
  return PointCloud(std::move(m));
}

double PointCloud::diameter() const {
  double best = 0.0;
  for (Index i = 0; i < size(); ++i)
    for (Index j = i + 1; j < size(); ++j) best = std::max(best, (point(i) - point(j)).norm());
  return best;
}

OffsetSet::OffsetSet(PointCloud cloud, double epsilon) : cloud_(std::move(cloud)), epsilon_(epsilon) {
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) {
    throw Error(ErrorCode::InvalidArgument, "offset radius must be positive and finite");
  }
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::Interior: return "Interior";
    case Membership::Boundary: return "Boundary";
    case Membership::Outside: return "Outside";
  }
  return "?";
}

double distance(const PointCloud& cloud, const VecRef& x) {
  require_dimension(cloud, x);
  return (cloud.points().colwise() - x).colwise().norm().minCoeff();
}

std::vector<Index> nearest_set(const PointCloud& cloud, const VecRef& x, double tol_near) {
  require_dimension(cloud, x);
  if (tol_near < 0.0) throw Error(ErrorCode::InvalidArgument, "tol_near must be nonnegative");
  const Eigen::RowVectorXd dists = (cloud.points().colwise() - x).colwise().norm();
  const double best = dists.minCoeff();
  std::vector<Index> out;
  for (Index i = 0; i < dists.size(); ++i)
    if (dists(i) <= best + tol_near) out.push_back(i);
  return out;
}

MembershipLabel classify(const OffsetSet& offset, const VecRef& x, double tol_boundary) {
  if (!(tol_boundary > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol_boundary must be positive");
  const double margin = distance(offset.cloud(), x) - offset.epsilon();
  if (margin < -tol_boundary) return {Membership::Interior, margin};
  if (margin <= tol_boundary) return {Membership::Boundary, margin};
  return {Membership::Outside, margin};
}

double hausdorff_distance(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b) {
  if (a.cols() == 0 || b.cols() == 0) throw Error(ErrorCode::EmptyInput, "hausdorff_distance of an empty set");
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "hausdorff_distance dimension mismatch");
  auto directed = [](const Eigen::Ref<const Eigen::MatrixXd>& from, const Eigen::Ref<const Eigen::MatrixXd>& to) {
    double worst = 0.0;
    for (Index i = 0; i < from.cols(); ++i) {
      worst = std::max(worst, (to.colwise() - from.col(i)).colwise().norm().minCoeff());
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

PointCloud parse_point_text(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<double> row;
    std::string token;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ScenarioFormat, "bad coordinate '" + token + "' on line " + std::to_string(line_no));
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return PointCloud::from_rows(rows);
}

PointCloud read_point_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ScenarioFormat, "cannot open point file " + path.string());
  return parse_point_text(in);
}

}  // namespace offmorse
