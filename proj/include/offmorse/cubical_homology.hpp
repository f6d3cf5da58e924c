#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "offmorse/composite_clarke.hpp"
#include "offmorse/geometry_core.hpp"

namespace offmorse {

/// Planar pixel grid over [lower, upper]; pixel (i, j) has centre
/// lower + (i + 1/2, j + 1/2) * spacing.
struct GridSpec {
  Eigen::Vector2d lower;
  Eigen::Vector2d upper;
  double spacing;

  /// Box of Y inflated by eps + 2h + margin.
  static GridSpec covering(const OffsetSet& offset, double spacing, double margin = 0.0);

  Index nx() const;
  Index ny() const;
  Eigen::Vector2d center(Index i, Index j) const;
  GridSpec refined() const { return {lower, upper, 0.5 * spacing}; }
};

class BitGrid {
 public:
  BitGrid(GridSpec spec, double level);

  Index nx() const { return nx_; }
  Index ny() const { return ny_; }
  const GridSpec& spec() const { return spec_; }
  double level() const { return level_; }

  bool operator()(Index i, Index j) const { return bits_[static_cast<std::size_t>(j * nx_ + i)] != 0; }
  void set(Index i, Index j, bool on) { bits_[static_cast<std::size_t>(j * nx_ + i)] = on ? 1 : 0; }
  Index occupied_count() const;

 private:
  GridSpec spec_;
  double level_;
  Index nx_;
  Index ny_;
  std::vector<std::uint8_t> bits_;
};

/// Pixel set iff its centre x has d_Y(x) <= eps and f(x) <= c.
BitGrid rasterize_sublevel(const OffsetSet& offset, const SmoothFunction& f, double c, const GridSpec& grid);

struct BettiNumbers {
  int b0{};
  int b1{};
  int chi{};

  friend bool operator==(const BettiNumbers&, const BettiNumbers&) = default;
};

/// Cells of the cubical complex on the occupied pixels: vertices are pixels,
/// edges join 4-neighbours, squares fill fully occupied 2x2 blocks.
struct CubicalCounts {
  long long vertices{};
  long long edges{};
  long long squares{};

  long long euler() const { return vertices - edges + squares; }
};

CubicalCounts cubical_counts(const BitGrid& grid);

/// 4-connected components, via union-find over row runs.
int count_components(const BitGrid& grid);

/// b0 from components, chi = V - E + F, b1 = b0 - chi.
BettiNumbers betti_2d(const BitGrid& grid);

struct StableBetti {
  BettiNumbers betti;
  double spacing;   // finer of the two agreeing resolutions
  int refinements;  // halvings performed
};

/// Halves the spacing until two consecutive resolutions agree on (b0, b1).
/// Throws Unstable after max_refinements halvings without agreement.
StableBetti stable_betti(const OffsetSet& offset, const SmoothFunction& f, double c, const GridSpec& initial,
                         int max_refinements = 4);

struct BettiRow {
  double c;
  int b0;
  int b1;
  int chi;
  double spacing;
};

struct BettiProfile {
  std::vector<BettiRow> rows;
  bool stable{true};
};

}  // namespace offmorse
