#include "locflow/field.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <cmath>

#include "locflow/errors.hpp"

namespace locflow {

bool ScalarField::all_finite() const {
  return par::all_of(size(), [&](std::int64_t i) { return std::isfinite(v_[i]); });
}

double ScalarField::max_abs() const {
  return par::max(size(), [&](std::int64_t i) { return std::abs(v_[i]); });
}

int TensorField::base_stored(int dim, Symmetry sym) {
  switch (sym) {
    case Symmetry::none: return 1;
    case Symmetry::sym2: return sym_pair_count(dim);
    case Symmetry::riemann: {
      const int np = asym_pair_count(dim);
      return np * (np + 1) / 2;
    }
  }
  return 1;
}

TensorField::TensorField(const ChartGrid& grid, std::vector<Valence> valence, Symmetry sym,
                         double fill)
    : grid_(&grid), dim_(grid.dim()), valence_(std::move(valence)), sym_(sym) {
  const int rank = static_cast<int>(valence_.size());
  const int base_rank = sym_ == Symmetry::none ? 0 : (sym_ == Symmetry::sym2 ? 2 : 4);
  if (rank < base_rank)
    throw ConfigError("tensor rank too small for the declared symmetry");
  lead_ = rank - base_rank;
  int s = base_stored(dim_, sym_);
  for (int a = 0; a < lead_; ++a) s *= dim_;
  stored_ = s;
  v_.assign(static_cast<std::size_t>(grid.points()) * stored_, fill);
}

TensorField::Slot TensorField::slot(std::span<const int> idx) const {
  int lead_idx = 0;
  for (int a = 0; a < lead_; ++a) lead_idx = lead_idx * dim_ + idx[a];
  switch (sym_) {
    case Symmetry::none:
      return {lead_idx, 1};
    case Symmetry::sym2: {
      const int i = idx[lead_], j = idx[lead_ + 1];
      return {lead_idx * sym_pair_count(dim_) + sym_pair_index(dim_, i, j), 1};
    }
    case Symmetry::riemann: {
      int i = idx[lead_], j = idx[lead_ + 1], k = idx[lead_ + 2], l = idx[lead_ + 3];
      if (i == j || k == l) return {0, 0};
      int sign = 1;
      if (i > j) { std::swap(i, j); sign = -sign; }
      if (k > l) { std::swap(k, l); sign = -sign; }
      int a = asym_pair_index(dim_, i, j);
      int b = asym_pair_index(dim_, k, l);
      if (a > b) std::swap(a, b);
      const int np = asym_pair_count(dim_);
      const int pidx = a * np - a * (a - 1) / 2 + (b - a);
      const int nb = np * (np + 1) / 2;
      return {lead_idx * nb + pidx, sign};
    }
  }
  return {0, 0};
}

void TensorField::expand_node(std::int64_t n, double* full) const {
  const int rank = this->rank();
  int idx[8] = {0};
  std::int64_t total = 1;
  for (int a = 0; a < rank; ++a) total *= dim_;
  const double* src = node(n);
  for (std::int64_t f = 0; f < total; ++f) {
    std::int64_t r = f;
    for (int a = rank - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(r % dim_);
      r /= dim_;
    }
    const Slot s = slot(std::span<const int>(idx, static_cast<std::size_t>(rank)));
    full[f] = s.sign == 0 ? 0.0 : s.sign * src[s.index];
  }
}

bool TensorField::all_finite() const {
  const std::int64_t n = stored_total();
  return par::all_of(n, [&](std::int64_t i) { return std::isfinite(v_[i]); });
}

MetricField::MetricField(const ChartGrid& grid)
    : grid_(&grid), dim_(grid.dim()), nc_(sym_pair_count(grid.dim())),
      v_(static_cast<std::size_t>(grid.points()) * sym_pair_count(grid.dim()), 0.0) {}

MetricField MetricField::flat(const ChartGrid& grid) {
  MetricField g(grid);
  const int d = grid.dim();
  for_each_node(grid, [&](std::int64_t n, const int*) {
    double* m = g.node(n);
    for (int i = 0; i < d; ++i) m[sym_pair_index(d, i, i)] = 1.0;
  });
  return g;
}

namespace {

template <int D>
void build_cache_impl(const ChartGrid& grid, const std::vector<double>& v,
                      std::vector<double>& inv, std::vector<double>& sqrtdet, int& bad) {
  const int nc = sym_pair_count(D);
  std::atomic<int> any_bad{0};
  par::for_each(grid.points(), [&](std::int64_t n) {
    Eigen::Matrix<double, D, D> m;
    const double* src = v.data() + static_cast<std::size_t>(n) * nc;
    for (int i = 0; i < D; ++i)
      for (int j = i; j < D; ++j) m(i, j) = m(j, i) = src[sym_pair_index(D, i, j)];
    const double det = m.determinant();
    if (!(det > 0.0) || !std::isfinite(det)) {
      any_bad.store(1, std::memory_order_relaxed);
      return;
    }
    const Eigen::Matrix<double, D, D> mi = m.inverse();
    double* dst = inv.data() + static_cast<std::size_t>(n) * nc;
    for (int i = 0; i < D; ++i)
      for (int j = i; j < D; ++j) dst[sym_pair_index(D, i, j)] = mi(i, j);
    sqrtdet[static_cast<std::size_t>(n)] = std::sqrt(det);
  });
  bad = any_bad.load();
}

template <int D>
double min_eig_impl(const ChartGrid& grid, const std::vector<double>& v, bool inverse_max) {
  const int nc = sym_pair_count(D);
  return (inverse_max ? -1.0 : 1.0) *
         par::min(grid.points(), [&](std::int64_t n) {
           Eigen::Matrix<double, D, D> m;
           const double* src = v.data() + static_cast<std::size_t>(n) * nc;
           for (int i = 0; i < D; ++i)
             for (int j = i; j < D; ++j) m(i, j) = m(j, i) = src[sym_pair_index(D, i, j)];
           Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, D, D>> es(
               m, Eigen::EigenvaluesOnly);
           if (inverse_max) return -es.eigenvalues()(D - 1);
           return es.eigenvalues()(0);
         });
}

} // namespace

void MetricField::ensure_cache() const {
  if (cached_) return;
  inv_.assign(v_.size(), 0.0);
  sqrtdet_.assign(static_cast<std::size_t>(grid_->points()), 0.0);
  int bad = 0;
  switch (dim_) {
    case 2: build_cache_impl<2>(*grid_, v_, inv_, sqrtdet_, bad); break;
    case 3: build_cache_impl<3>(*grid_, v_, inv_, sqrtdet_, bad); break;
    default: build_cache_impl<4>(*grid_, v_, inv_, sqrtdet_, bad); break;
  }
  if (bad) throw NumericError("metric has a node with non-positive determinant");
  cached_ = true;
}

double MetricField::min_eigenvalue() const {
  switch (dim_) {
    case 2: return min_eig_impl<2>(*grid_, v_, false);
    case 3: return min_eig_impl<3>(*grid_, v_, false);
    default: return min_eig_impl<4>(*grid_, v_, false);
  }
}

double MetricField::max_inverse_eigenvalue() const {
  ensure_cache();
  switch (dim_) {
    case 2: return -min_eig_impl<2>(*grid_, inv_, true);
    case 3: return -min_eig_impl<3>(*grid_, inv_, true);
    default: return -min_eig_impl<4>(*grid_, inv_, true);
  }
}

bool MetricField::all_finite() const {
  const std::int64_t n = static_cast<std::int64_t>(v_.size());
  return par::all_of(n, [&](std::int64_t i) { return std::isfinite(v_[i]); });
}

void MetricField::validate(const char* where) const {
  if (!all_finite())
    throw NumericError(std::string(where) + ": metric has non-finite components");
  const double mineig = min_eigenvalue();
  if (!(mineig > 0.0))
    throw NumericError(std::string(where) + ": metric not positive definite (min eigenvalue " +
                       std::to_string(mineig) + ")");
}

} // namespace locflow
