#include "locflow/quadrature.hpp"

#include <cmath>

#include "locflow/errors.hpp"

namespace locflow {

namespace {

double node_weight(const ChartGrid& g, std::int64_t n) {
  if (g.boundary() == Boundary::periodic) return 1.0;
  int c[4];
  g.coord(n, c);
  return g.quad_weight(c);
}

} // namespace

double integrate(const ScalarField& f, const MetricField& g) {
  if (!f.grid().same_layout(g.grid())) throw ConfigError("integrate: field/metric grid mismatch");
  if (!f.all_finite()) throw NumericError("integrate: non-finite field");
  g.ensure_cache();
  const ChartGrid& grid = f.grid();
  const double cell = grid.cell_measure();
  const double s = par::sum(grid.points(), [&](std::int64_t n) {
    return f[n] * g.sqrt_det(n) * node_weight(grid, n);
  });
  return s * cell;
}

double integrate_weighted(const ScalarField& f, const ScalarField& w, const MetricField& g) {
  if (!f.grid().same_layout(g.grid()) || !w.grid().same_layout(g.grid()))
    throw ConfigError("integrate_weighted: grid mismatch");
  g.ensure_cache();
  const ChartGrid& grid = f.grid();
  const double cell = grid.cell_measure();
  const double s = par::sum(grid.points(), [&](std::int64_t n) {
    return f[n] * w[n] * g.sqrt_det(n) * node_weight(grid, n);
  });
  return s * cell;
}

double lp_norm(const ScalarField& f, double p, const MetricField& g) {
  if (!(p >= 1.0)) throw ConfigError("lp_norm: p must be >= 1");
  g.ensure_cache();
  const ChartGrid& grid = f.grid();
  const double cell = grid.cell_measure();
  const double s = par::sum(grid.points(), [&](std::int64_t n) {
    return std::pow(std::abs(f[n]), p) * g.sqrt_det(n) * node_weight(grid, n);
  });
  return std::pow(s * cell, 1.0 / p);
}

ScalarField pointwise_tensor_norm(const TensorField& t, const MetricField& g) {
  if (!t.grid().same_layout(g.grid()))
    throw ConfigError("pointwise_tensor_norm: field/metric grid mismatch");
  const int rank = t.rank();
  if (rank > 6) throw ConfigError("pointwise_tensor_norm: rank > 6 unsupported");
  const int d = t.dim();
  g.ensure_cache();
  ScalarField out(t.grid());
  if (rank == 0) {
    par::for_each(t.grid().points(),
                  [&](std::int64_t n) { out[n] = std::abs(t.node(n)[0]); });
    return out;
  }
  std::int64_t full_sz = 1;
  for (int a = 0; a < rank; ++a) full_sz *= d;

  par::for_each(t.grid().points(), [&](std::int64_t n) {
    double buf0[4096], buf1[4096];
    t.expand_node(n, buf0);
    const double* gi = g.inv_node(n);
    const double* gc = g.node(n);
    // raise covariant / lower contravariant slots one at a time
    double* cur = buf0;
    double* nxt = buf1;
    // keep the original expansion for the final contraction
    double orig[4096];
    for (std::int64_t k = 0; k < full_sz; ++k) orig[k] = buf0[k];
    for (int slot = 0; slot < rank; ++slot) {
      std::int64_t inner = 1;
      for (int a = slot + 1; a < rank; ++a) inner *= d;
      const std::int64_t outer = full_sz / (inner * d);
      const double* m = t.valence()[slot] == Valence::co ? gi : gc;
      for (std::int64_t o = 0; o < outer; ++o) {
        for (std::int64_t in = 0; in < inner; ++in) {
          const std::int64_t base = o * d * inner + in;
          for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int j = 0; j < d; ++j)
              acc += m[sym_pair_index(d, i, j)] * cur[base + j * inner];
            nxt[base + i * inner] = acc;
          }
        }
      }
      std::swap(cur, nxt);
    }
    double s = 0.0;
    for (std::int64_t k = 0; k < full_sz; ++k) s += orig[k] * cur[k];
    // clamp tiny negative roundoff
    out[n] = std::sqrt(s > 0.0 ? s : 0.0);
  });
  return out;
}

} // namespace locflow
