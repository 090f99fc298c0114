#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "locflow/parallel.hpp"

namespace locflow {

enum class Boundary { periodic, frozen };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

// Width of the frozen boundary collar: fields multiplied by a cutoff are
// expected to vanish here and stencils fall back to 2nd order.
inline constexpr int kCollarWidth = 3;

struct GridOptions {
  std::int64_t max_points = 8'000'000;
};

// A rectangular coordinate chart in dimension 2, 3 or 4. Nodes are stored
// row-major with axis 0 slowest. Periodic charts cover [0, N*h) per axis;
// frozen charts are closed boxes whose outermost collar emulates the
// held-fixed exterior of a compactly supported evolution.
class ChartGrid {
public:
  ChartGrid(int dim, std::span<const int> extents, std::span<const double> spacing,
            Boundary boundary, GridOptions options = {});

  int dim() const { return dim_; }
  Boundary boundary() const { return boundary_; }
  std::int64_t points() const { return points_; }
  int extent(int axis) const { return extent_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  double min_spacing() const;
  double max_spacing() const;
  // Product of spacings: the coordinate measure of one cell.
  double cell_measure() const;

  std::int64_t index(const int* c) const {
    std::int64_t idx = 0;
    for (int a = 0; a < dim_; ++a) idx = idx * extent_[a] + c[a];
    return idx;
  }

  void coord(std::int64_t idx, int* c) const {
    for (int a = dim_ - 1; a >= 0; --a) {
      c[a] = static_cast<int>(idx % extent_[a]);
      idx /= extent_[a];
    }
  }

  std::int64_t stride(int axis) const { return stride_[axis]; }

  // Neighbor index along one axis with periodic wrap. Only valid when the
  // shifted position stays in range on frozen grids (callers use position-
  // aware stencils there).
  std::int64_t shift(std::int64_t idx, int axis, int off, int pos) const {
    int np = pos + off;
    if (boundary_ == Boundary::periodic) {
      np %= extent_[axis];
      if (np < 0) np += extent_[axis];
    }
    return idx + static_cast<std::int64_t>(np - pos) * stride_[axis];
  }

  bool in_collar(const int* c) const {
    if (boundary_ == Boundary::periodic) return false;
    for (int a = 0; a < dim_; ++a)
      if (c[a] < kCollarWidth || c[a] >= extent_[a] - kCollarWidth) return true;
    return false;
  }

  // Trapezoidal quadrature weight (1/2 on frozen faces, 1 elsewhere).
  double quad_weight(const int* c) const {
    if (boundary_ == Boundary::periodic) return 1.0;
    double w = 1.0;
    for (int a = 0; a < dim_; ++a)
      if (c[a] == 0 || c[a] == extent_[a] - 1) w *= 0.5;
    return w;
  }

  bool same_layout(const ChartGrid& o) const;

private:
  int dim_;
  Boundary boundary_;
  std::array<int, 4> extent_{};
  std::array<double, 4> spacing_{};
  std::array<std::int64_t, 4> stride_{};
  std::int64_t points_;
};

// Applies f(flat_index, coords) to every node. Parallel over grid lines;
// coords are decoded once per line and incremented along the last axis.
template <class F>
inline void for_each_node(const ChartGrid& g, F&& f) {
  const int last = g.dim() - 1;
  const int nlast = g.extent(last);
  const std::int64_t lines = g.points() / nlast;
  par::for_each(lines, [&](std::int64_t ln) {
    int c[4] = {0, 0, 0, 0};
    const std::int64_t base = ln * nlast;
    g.coord(base, c);
    for (int k = 0; k < nlast; ++k) {
      f(base + k, c);
      ++c[last];
    }
  });
}

} // namespace locflow
