#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "locflow/grid.hpp"

namespace locflow {

enum class Valence : std::uint8_t { co, contra };

// Storage symmetry of the trailing index slots.
//   none:    dim^rank components
//   sym2:    trailing pair symmetric (metric-like pair), rank >= 2
//   riemann: trailing four slots antisymmetric in (0,1) and (2,3) and
//            symmetric under pair exchange, rank >= 4
enum class Symmetry : std::uint8_t { none, sym2, riemann };

// Index of the (i,j) entry of a packed symmetric pair, i <= j row-major.
inline int sym_pair_index(int dim, int i, int j) {
  if (i > j) { const int t = i; i = j; j = t; }
  return i * dim - i * (i - 1) / 2 + (j - i);
}

inline int sym_pair_count(int dim) { return dim * (dim + 1) / 2; }

// Index of the antisymmetric pair (i,j), i < j, among dim*(dim-1)/2 pairs.
inline int asym_pair_index(int dim, int i, int j) {
  return i * (2 * dim - i - 1) / 2 + (j - i - 1);
}

inline int asym_pair_count(int dim) { return dim * (dim - 1) / 2; }

class ScalarField {
public:
  explicit ScalarField(const ChartGrid& grid, double fill = 0.0)
      : grid_(&grid), v_(static_cast<std::size_t>(grid.points()), fill) {}

  const ChartGrid& grid() const { return *grid_; }
  double& operator[](std::int64_t i) { return v_[static_cast<std::size_t>(i)]; }
  double operator[](std::int64_t i) const { return v_[static_cast<std::size_t>(i)]; }
  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }
  std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }

  bool all_finite() const;
  double max_abs() const;

private:
  const ChartGrid* grid_;
  std::vector<double> v_;
};

// Rank-k tensor sample array with symmetry-aware packed storage. Stored
// layout per node: leading (unconstrained) slots row-major, then the packed
// symmetric block. Expansion from packed storage is exact, so declared
// symmetries hold componentwise by construction.
class TensorField {
public:
  TensorField(const ChartGrid& grid, std::vector<Valence> valence, Symmetry sym,
              double fill = 0.0);

  const ChartGrid& grid() const { return *grid_; }
  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(valence_.size()); }
  Symmetry symmetry() const { return sym_; }
  const std::vector<Valence>& valence() const { return valence_; }
  int stored_per_node() const { return stored_; }
  std::int64_t stored_total() const { return static_cast<std::int64_t>(v_.size()); }

  double* node(std::int64_t n) { return v_.data() + static_cast<std::size_t>(n) * stored_; }
  const double* node(std::int64_t n) const {
    return v_.data() + static_cast<std::size_t>(n) * stored_;
  }
  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  // Packed index and sign of a full multi-index; sign 0 marks components
  // that are identically zero under the declared antisymmetries.
  struct Slot {
    int index;
    int sign;
  };
  Slot slot(std::span<const int> idx) const;

  double get(std::int64_t n, std::span<const int> idx) const {
    const Slot s = slot(idx);
    return s.sign == 0 ? 0.0 : s.sign * node(n)[s.index];
  }

  // Expands one node into the dense dim^rank array (row-major full index).
  void expand_node(std::int64_t n, double* full) const;

  bool all_finite() const;

  static int base_stored(int dim, Symmetry sym);

private:
  const ChartGrid* grid_;
  int dim_;
  std::vector<Valence> valence_;
  Symmetry sym_;
  int lead_;    // number of unconstrained leading slots
  int stored_;  // components per node
  std::vector<double> v_;
};

// Symmetric positive-definite 2-tensor sampled on a grid; packed upper
// triangle per node. Inverse and sqrt(det) are cached on demand.
class MetricField {
public:
  explicit MetricField(const ChartGrid& grid);
  static MetricField flat(const ChartGrid& grid);

  const ChartGrid& grid() const { return *grid_; }
  int dim() const { return dim_; }
  int comps() const { return nc_; }

  double get(std::int64_t n, int i, int j) const {
    return v_[static_cast<std::size_t>(n) * nc_ + sym_pair_index(dim_, i, j)];
  }
  void set(std::int64_t n, int i, int j, double x) {
    v_[static_cast<std::size_t>(n) * nc_ + sym_pair_index(dim_, i, j)] = x;
    cached_ = false;
  }

  double* node(std::int64_t n) { return v_.data() + static_cast<std::size_t>(n) * nc_; }
  const double* node(std::int64_t n) const {
    return v_.data() + static_cast<std::size_t>(n) * nc_;
  }
  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  // Marks cached derived data stale after direct writes through data()/node().
  void invalidate_cache() { cached_ = false; }

  // Builds per-node inverse (packed) and sqrt(det). Throws NumericError on a
  // non-positive determinant. Call from serial context.
  void ensure_cache() const;
  const double* inv_node(std::int64_t n) const {
    return inv_.data() + static_cast<std::size_t>(n) * nc_;
  }
  double inv(std::int64_t n, int i, int j) const {
    return inv_[static_cast<std::size_t>(n) * nc_ + sym_pair_index(dim_, i, j)];
  }
  double sqrt_det(std::int64_t n) const { return sqrtdet_[static_cast<std::size_t>(n)]; }

  double min_eigenvalue() const;
  double max_inverse_eigenvalue() const;

  // SPD + finiteness check; throws NumericError naming `where` on failure.
  void validate(const char* where) const;

  bool all_finite() const;

private:
  const ChartGrid* grid_;
  int dim_;
  int nc_;
  std::vector<double> v_;
  mutable bool cached_ = false;
  mutable std::vector<double> inv_;
  mutable std::vector<double> sqrtdet_;
};

} // namespace locflow
