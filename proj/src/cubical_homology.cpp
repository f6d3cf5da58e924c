#include "offmorse/cubical_homology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "offmorse/errors.hpp"

namespace offmorse {

GridSpec GridSpec::covering(const OffsetSet& offset, double spacing, double margin) {
  if (offset.dimension() != 2) throw Error(ErrorCode::InvalidArgument, "rasterisation is planar");
  const double pad = offset.epsilon() + 2.0 * spacing + margin;
  const Eigen::Vector2d lo = offset.cloud().bbox_min().array() - pad;
  const Eigen::Vector2d hi = offset.cloud().bbox_max().array() + pad;
  return {lo, hi, spacing};
}

Index GridSpec::nx() const { return static_cast<Index>(std::ceil((upper.x() - lower.x()) / spacing)); }
Index GridSpec::ny() const { return static_cast<Index>(std::ceil((upper.y() - lower.y()) / spacing)); }

Eigen::Vector2d GridSpec::center(Index i, Index j) const {
  return lower + spacing * Eigen::Vector2d(static_cast<double>(i) + 0.5, static_cast<double>(j) + 0.5);
}

BitGrid::BitGrid(GridSpec spec, double level)
    : spec_(std::move(spec)), level_(level), nx_(spec_.nx()), ny_(spec_.ny()),
      bits_(static_cast<std::size_t>(nx_ * ny_), 0) {}

Index BitGrid::occupied_count() const {
  return static_cast<Index>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BitGrid rasterize_sublevel(const OffsetSet& offset, const SmoothFunction& f, double c, const GridSpec& grid) {
  if (offset.dimension() != 2 || f.dimension() != 2) throw Error(ErrorCode::InvalidArgument, "rasterisation is planar");
  const double eps = offset.epsilon();
  const double h = grid.spacing;
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
  if (h > eps / 10.0) throw Error(ErrorCode::GridTooCoarse, "grid spacing exceeds eps / 10");
  const PointCloud& cloud = offset.cloud();
  const Eigen::Vector2d need_lo = cloud.bbox_min().array() - (eps + 2.0 * h);
  const Eigen::Vector2d need_hi = cloud.bbox_max().array() + (eps + 2.0 * h);
  if ((grid.lower.array() > need_lo.array() + 1e-12).any() || (grid.upper.array() < need_hi.array() - 1e-12).any()) {
    throw Error(ErrorCode::InvalidArgument, "grid does not cover Y inflated by eps + 2h");
  }

  BitGrid bits(grid, c);
  const double eps2 = eps * eps;
  for (Index k = 0; k < cloud.size(); ++k) {
    const Eigen::Vector2d y = cloud.point(k);
    // Candidate pixel window around the ball, one pixel of slack per side.
    const Index i0 = std::max<Index>(0, static_cast<Index>(std::floor((y.x() - eps - grid.lower.x()) / h)) - 1);
    const Index i1 = std::min<Index>(bits.nx() - 1, static_cast<Index>(std::ceil((y.x() + eps - grid.lower.x()) / h)) + 1);
    const Index j0 = std::max<Index>(0, static_cast<Index>(std::floor((y.y() - eps - grid.lower.y()) / h)) - 1);
    const Index j1 = std::min<Index>(bits.ny() - 1, static_cast<Index>(std::ceil((y.y() + eps - grid.lower.y()) / h)) + 1);
    for (Index j = j0; j <= j1; ++j) {
      for (Index i = i0; i <= i1; ++i) {
        if (bits(i, j)) continue;
        const Eigen::Vector2d x = grid.center(i, j);
        if ((x - y).squaredNorm() <= eps2 && f.value(x) <= c) bits.set(i, j, true);
      }
    }
  }
  return bits;
}

CubicalCounts cubical_counts(const BitGrid& grid) {
  CubicalCounts counts;
  for (Index j = 0; j < grid.ny(); ++j) {
    for (Index i = 0; i < grid.nx(); ++i) {
      if (!grid(i, j)) continue;
      ++counts.vertices;
      const bool right = i + 1 < grid.nx() && grid(i + 1, j);
      const bool up = j + 1 < grid.ny() && grid(i, j + 1);
      counts.edges += static_cast<long long>(right) + static_cast<long long>(up);
      if (right && up && grid(i + 1, j + 1)) ++counts.squares;
    }
  }
  return counts;
}

namespace {

struct Run {
  Index row;
  Index begin;
  Index end;  // inclusive
};

Index find_root(std::vector<Index>& parent, Index a) {
  while (parent[static_cast<std::size_t>(a)] != a) {
    parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
    a = parent[static_cast<std::size_t>(a)];
  }
  return a;
}

}  // namespace

int count_components(const BitGrid& grid) {
  std::vector<Run> runs;
  std::vector<std::size_t> row_start(static_cast<std::size_t>(grid.ny()) + 1, 0);
  for (Index j = 0; j < grid.ny(); ++j) {
    row_start[static_cast<std::size_t>(j)] = runs.size();
    Index i = 0;
    while (i < grid.nx()) {
      if (!grid(i, j)) {
        ++i;
        continue;
      }
      const Index b = i;
      while (i < grid.nx() && grid(i, j)) ++i;
      runs.push_back({j, b, i - 1});
    }
  }
  row_start[static_cast<std::size_t>(grid.ny())] = runs.size();

  std::vector<Index> parent(runs.size());
  std::iota(parent.begin(), parent.end(), Index{0});
  int components = static_cast<int>(runs.size());
  for (Index j = 1; j < grid.ny(); ++j) {
    std::size_t a = row_start[static_cast<std::size_t>(j) - 1];
    const std::size_t a_end = row_start[static_cast<std::size_t>(j)];
    std::size_t b = a_end;
    const std::size_t b_end = row_start[static_cast<std::size_t>(j) + 1];
    // Two-pointer sweep over runs of adjacent rows; overlap means 4-adjacency.
    while (a < a_end && b < b_end) {
      const Run& ra = runs[a];
      const Run& rb = runs[b];
      if (ra.begin <= rb.end && rb.begin <= ra.end) {
        const Index x = find_root(parent, static_cast<Index>(a));
        const Index y = find_root(parent, static_cast<Index>(b));
        if (x != y) {
          parent[static_cast<std::size_t>(std::max(x, y))] = std::min(x, y);
          --components;
        }
      }
      if (ra.end < rb.end) {
        ++a;
      } else {
        ++b;
      }
    }
  }
  return components;
}

BettiNumbers betti_2d(const BitGrid& grid) {
  const int b0 = count_components(grid);
  const int chi = static_cast<int>(cubical_counts(grid).euler());
  return {b0, b0 - chi, chi};
}

StableBetti stable_betti(const OffsetSet& offset, const SmoothFunction& f, double c, const GridSpec& initial,
                         int max_refinements) {
  GridSpec grid = initial;
  BettiNumbers prev = betti_2d(rasterize_sublevel(offset, f, c, grid));
  for (int r = 1; r <= max_refinements; ++r) {
    grid = grid.refined();
    const BettiNumbers cur = betti_2d(rasterize_sublevel(offset, f, c, grid));
    if (cur.b0 == prev.b0 && cur.b1 == prev.b1) return {cur, grid.spacing, r};
    prev = cur;
  }
  throw Error(ErrorCode::Unstable, "Betti numbers at c = " + std::to_string(c) + " did not stabilise after " +
                                       std::to_string(max_refinements) + " refinements");
}

}  // namespace offmorse
