#include "locflow/grid.hpp"

#include <algorithm>

#include "locflow/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace locflow {

namespace par {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

} // namespace par

std::string to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "frozen";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "frozen") return Boundary::frozen;
  throw ConfigError("unknown boundary kind: " + s);
}

ChartGrid::ChartGrid(int dim, std::span<const int> extents, std::span<const double> spacing,
                     Boundary boundary, GridOptions options)
    : dim_(dim), boundary_(boundary) {
  if (dim < 2 || dim > 4) throw ConfigError("grid dimension must be 2, 3 or 4");
  if (static_cast<int>(extents.size()) != dim || static_cast<int>(spacing.size()) != dim)
    throw ConfigError("extents/spacing size must match dimension");
  points_ = 1;
  for (int a = 0; a < dim; ++a) {
    if (extents[a] < 8) throw ConfigError("every grid extent must be >= 8");
    if (!(spacing[a] > 0.0)) throw ConfigError("every grid spacing must be > 0");
    extent_[a] = extents[a];
    spacing_[a] = spacing[a];
    points_ *= extents[a];
    if (points_ > options.max_points)
      throw ConfigError("grid exceeds the configured memory budget of " +
                        std::to_string(options.max_points) + " points");
  }
  std::int64_t s = 1;
  for (int a = dim - 1; a >= 0; --a) {
    stride_[a] = s;
    s *= extent_[a];
  }
}

double ChartGrid::min_spacing() const {
  double m = spacing_[0];
  for (int a = 1; a < dim_; ++a) m = std::min(m, spacing_[a]);
  return m;
}

double ChartGrid::max_spacing() const {
  double m = spacing_[0];
  for (int a = 1; a < dim_; ++a) m = std::max(m, spacing_[a]);
  return m;
}

double ChartGrid::cell_measure() const {
  double m = 1.0;
  for (int a = 0; a < dim_; ++a) m *= spacing_[a];
  return m;
}

bool ChartGrid::same_layout(const ChartGrid& o) const {
  if (dim_ != o.dim_ || boundary_ != o.boundary_) return false;
  for (int a = 0; a < dim_; ++a)
    if (extent_[a] != o.extent_[a] || spacing_[a] != o.spacing_[a]) return false;
  return true;
}

} // namespace locflow
