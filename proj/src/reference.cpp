#include "locflow/reference.hpp"

#include <cmath>
#include <cstring>

#include "locflow/errors.hpp"

namespace locflow::ref {

namespace {

// serial node iteration
template <class F>
void each_node(const ChartGrid& g, F&& f) {
  int c[4] = {0, 0, 0, 0};
  const std::int64_t n = g.points();
  for (std::int64_t i = 0; i < n; ++i) {
    f(i, c);
    for (int a = g.dim() - 1; a >= 0; --a) {
      if (++c[a] < g.extent(a)) break;
      c[a] = 0;
    }
  }
}

double stencil_1d(const ChartGrid& g, const std::vector<double>& in, int ncomp, int comp,
                  std::int64_t node, const int* c, int axis, int order) {
  const int N = g.extent(axis);
  const double h = g.spacing(axis);
  const int p = c[axis];
  auto at = [&](int off) {
    int q = p + off;
    if (g.boundary() == Boundary::periodic) {
      q %= N;
      if (q < 0) q += N;
    }
    const std::int64_t nn = node + static_cast<std::int64_t>(q - p) * g.stride(axis);
    return in[static_cast<std::size_t>(nn) * ncomp + comp];
  };
  const bool interior = g.boundary() == Boundary::periodic || (p >= 2 && p <= N - 3);
  if (order == 1) {
    if (interior) return (at(-2) - 8 * at(-1) + 8 * at(1) - at(2)) / (12 * h);
    if (p == 0) return (-3 * at(0) + 4 * at(1) - at(2)) / (2 * h);
    if (p == N - 1) return (3 * at(0) - 4 * at(-1) + at(-2)) / (2 * h);
    return (at(1) - at(-1)) / (2 * h);
  }
  if (interior)
    return (-at(-2) + 16 * at(-1) - 30 * at(0) + 16 * at(1) - at(2)) / (12 * h * h);
  if (p == 0) return (2 * at(0) - 5 * at(1) + 4 * at(2) - at(3)) / (h * h);
  if (p == N - 1) return (2 * at(0) - 5 * at(-1) + 4 * at(-2) - at(-3)) / (h * h);
  return (at(-1) - 2 * at(0) + at(1)) / (h * h);
}

// dense symmetric inverse by Gauss-Jordan with partial pivoting
void invert_dense(const double* m, int d, double* out) {
  double a[8][8];
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      a[i][j] = m[i * d + j];
      a[i][d + j] = i == j ? 1.0 : 0.0;
    }
  }
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) throw NumericError("reference inverse: singular matrix");
    if (piv != col)
      for (int j = 0; j < 2 * d; ++j) std::swap(a[piv][j], a[col][j]);
    const double inv = 1.0 / a[col][col];
    for (int j = 0; j < 2 * d; ++j) a[col][j] *= inv;
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 2 * d; ++j) a[r][j] -= f * a[col][j];
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out[i * d + j] = a[i][d + j];
}

} // namespace

std::vector<double> partial_derivative(const ChartGrid& grid, const std::vector<double>& in,
                                       int ncomp, int axis, int order) {
  std::vector<double> out(in.size());
  each_node(grid, [&](std::int64_t n, const int* c) {
    for (int k = 0; k < ncomp; ++k)
      out[static_cast<std::size_t>(n) * ncomp + k] =
          stencil_1d(grid, in, ncomp, k, n, c, axis, order);
  });
  return out;
}

double integrate(const ScalarField& f, const MetricField& g) {
  g.ensure_cache();
  const ChartGrid& grid = f.grid();
  double sum = 0.0, comp = 0.0;
  each_node(grid, [&](std::int64_t n, const int* c) {
    const double term = f[n] * g.sqrt_det(n) * grid.quad_weight(c);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  });
  return sum * grid.cell_measure();
}

DenseCurvature curvature(const MetricField& g) {
  const ChartGrid& grid = g.grid();
  const int d = grid.dim();
  const std::int64_t nn = grid.points();
  const int d2 = d * d, d3 = d2 * d, d4 = d3 * d;

  // dense metric
  std::vector<double> gd(static_cast<std::size_t>(nn) * d2);
  each_node(grid, [&](std::int64_t n, const int*) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        gd[static_cast<std::size_t>(n) * d2 + i * d + j] = g.get(n, i, j);
  });
  std::vector<double> dg[4];
  for (int a = 0; a < d; ++a) dg[a] = partial_derivative(grid, gd, d2, a, 1);

  DenseCurvature out;
  out.dim = d;
  out.gamma.assign(static_cast<std::size_t>(nn) * d3, 0.0);
  each_node(grid, [&](std::int64_t n, const int*) {
    double gi[16];
    invert_dense(gd.data() + static_cast<std::size_t>(n) * d2, d, gi);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double acc = 0.0;
          for (int l = 0; l < d; ++l)
            acc += gi[i * d + l] *
                   (dg[k][static_cast<std::size_t>(n) * d2 + j * d + l] +
                    dg[j][static_cast<std::size_t>(n) * d2 + k * d + l] -
                    dg[l][static_cast<std::size_t>(n) * d2 + j * d + k]);
          out.gamma[static_cast<std::size_t>(n) * d3 + (i * d + j) * d + k] = 0.5 * acc;
        }
  });

  std::vector<double> dgam[4];
  for (int a = 0; a < d; ++a) dgam[a] = partial_derivative(grid, out.gamma, d3, a, 1);

  out.riemann.assign(static_cast<std::size_t>(nn) * d4, 0.0);
  out.ricci.assign(static_cast<std::size_t>(nn) * d2, 0.0);
  out.scalar.assign(static_cast<std::size_t>(nn), 0.0);
  each_node(grid, [&](std::int64_t n, const int*) {
    const double* gm = gd.data() + static_cast<std::size_t>(n) * d2;
    const double* G = out.gamma.data() + static_cast<std::size_t>(n) * d3;
    double gi[16];
    invert_dense(gm, d, gi);
    auto dG = [&](int m, int p, int j, int l) {
      return dgam[m][static_cast<std::size_t>(n) * d3 + (p * d + j) * d + l];
    };
    // raw lowered tensor, then algebraic projection
    double raw[256];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            double acc = 0.0;
            for (int p = 0; p < d; ++p) {
              double rup = dG(i, p, j, l) - dG(j, p, i, l);
              for (int q = 0; q < d; ++q)
                rup += G[(p * d + i) * d + q] * G[(q * d + j) * d + l] -
                       G[(p * d + j) * d + q] * G[(q * d + i) * d + l];
              acc += gm[p * d + k] * rup;
            }
            raw[((i * d + j) * d + k) * d + l] = acc;
          }
    double* R = out.riemann.data() + static_cast<std::size_t>(n) * d4;
    auto rr = [&](int i, int j, int k, int l) { return raw[((i * d + j) * d + k) * d + l]; };
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l)
            R[((i * d + j) * d + k) * d + l] =
                0.25 * (rr(i, j, k, l) - rr(i, j, l, k) + rr(k, l, i, j) - rr(k, l, j, i));
    double* ric = out.ricci.data() + static_cast<std::size_t>(n) * d2;
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i)
          for (int k = 0; k < d; ++k)
            acc += gi[i * d + k] * R[((i * d + j) * d + k) * d + l];
        ric[j * d + l] = acc;
      }
    double rs = 0.0;
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) rs += gi[j * d + l] * ric[j * d + l];
    out.scalar[static_cast<std::size_t>(n)] = rs;
  });
  return out;
}

double tensor_norm_node(const std::vector<double>& dense, std::int64_t node, int rank,
                        const MetricField& g) {
  const int d = g.dim();
  std::int64_t sz = 1;
  for (int a = 0; a < rank; ++a) sz *= d;
  const double* t = dense.data() + static_cast<std::size_t>(node) * sz;
  double gm[16], gi[16];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gm[i * d + j] = g.get(node, i, j);
  invert_dense(gm, d, gi);
  double acc = 0.0;
  std::vector<int> I(static_cast<std::size_t>(rank)), J(static_cast<std::size_t>(rank));
  for (std::int64_t fi = 0; fi < sz; ++fi) {
    std::int64_t r = fi;
    for (int a = rank - 1; a >= 0; --a) { I[a] = static_cast<int>(r % d); r /= d; }
    for (std::int64_t fj = 0; fj < sz; ++fj) {
      std::int64_t q = fj;
      for (int a = rank - 1; a >= 0; --a) { J[a] = static_cast<int>(q % d); q /= d; }
      double w = 1.0;
      for (int a = 0; a < rank; ++a) w *= gi[I[a] * d + J[a]];
      if (w != 0.0) acc += w * t[fi] * t[fj];
    }
  }
  return std::sqrt(acc > 0 ? acc : 0.0);
}

} // namespace locflow::ref
