#include "locflow/fd.hpp"

#include <cmath>

#include "locflow/errors.hpp"

namespace locflow {

namespace {

// Strided stencil kernel. For node n and component c in [0,ncomp):
//   out[n*out_stride + c] (+)= D_axis(in[.*in_stride + c])
void apply_strided(const ChartGrid& g, const double* in, std::int64_t in_stride, double* out,
                   std::int64_t out_stride, int ncomp, int axis, int order, bool accumulate) {
  const int N = g.extent(axis);
  const double h = g.spacing(axis);
  const std::int64_t s = g.stride(axis) * in_stride;
  const bool periodic = g.boundary() == Boundary::periodic;
  const double i12h = 1.0 / (12.0 * h);
  const double i2h = 1.0 / (2.0 * h);
  const double ih2 = 1.0 / (h * h);
  const double i12h2 = 1.0 / (12.0 * h * h);

  for_each_node(g, [&](std::int64_t n, const int* c) {
    const int p = c[axis];
    const double* src = in + n * in_stride;
    double* dst = out + n * out_stride;

    // neighbor element offsets along the axis, in units of in_stride elements
    std::int64_t om3 = 0, om2, om1, op1, op2, op3 = 0;
    bool central4 = true, central2 = false, fwd = false, bwd = false;
    if (periodic) {
      auto wrap = [&](int off) {
        int q = (p + off) % N;
        if (q < 0) q += N;
        return static_cast<std::int64_t>(q - p) * s;
      };
      if (p >= 2 && p < N - 2) {
        om2 = -2 * s; om1 = -s; op1 = s; op2 = 2 * s;
      } else {
        om2 = wrap(-2); om1 = wrap(-1); op1 = wrap(1); op2 = wrap(2);
      }
    } else {
      if (p == 0) {
        central4 = false; fwd = true;
        op1 = s; op2 = 2 * s; op3 = 3 * s; om1 = om2 = 0;
      } else if (p == N - 1) {
        central4 = false; bwd = true;
        om1 = -s; om2 = -2 * s; om3 = -3 * s; op1 = op2 = 0;
      } else if (p == 1 || p == N - 2) {
        central4 = false; central2 = true;
        om1 = -s; op1 = s; om2 = op2 = 0;
      } else {
        om2 = -2 * s; om1 = -s; op1 = s; op2 = 2 * s;
      }
    }

    for (int k = 0; k < ncomp; ++k) {
      double v;
      if (order == 1) {
        if (central4)
          v = (src[om2 + k] - 8.0 * src[om1 + k] + 8.0 * src[op1 + k] - src[op2 + k]) * i12h;
        else if (central2)
          v = (src[op1 + k] - src[om1 + k]) * i2h;
        else if (fwd)
          v = (-3.0 * src[k] + 4.0 * src[op1 + k] - src[op2 + k]) * i2h;
        else
          v = (3.0 * src[k] - 4.0 * src[om1 + k] + src[om2 + k]) * i2h;
      } else {
        if (central4)
          v = (-src[om2 + k] + 16.0 * src[om1 + k] - 30.0 * src[k] + 16.0 * src[op1 + k] -
               src[op2 + k]) * i12h2;
        else if (central2)
          v = (src[om1 + k] - 2.0 * src[k] + src[op1 + k]) * ih2;
        else if (fwd)
          v = (2.0 * src[k] - 5.0 * src[op1 + k] + 4.0 * src[op2 + k] - src[op3 + k]) * ih2;
        else
          v = (2.0 * src[k] - 5.0 * src[om1 + k] + 4.0 * src[om2 + k] - src[om3 + k]) * ih2;
      }
      if (accumulate)
        dst[k] += v;
      else
        dst[k] = v;
    }
  });
}

void check_axis_order(const ChartGrid& g, int axis, int order) {
  if (axis < 0 || axis >= g.dim()) throw ConfigError("derivative axis out of range");
  if (order != 1 && order != 2) throw ConfigError("derivative order must be 1 or 2");
}

} // namespace

void apply_derivative(const ChartGrid& grid, const double* in, double* out, int ncomp,
                      int axis, int order) {
  apply_strided(grid, in, ncomp, out, ncomp, ncomp, axis, order, false);
}

ScalarField partial_derivative(const ScalarField& f, int axis, int order) {
  check_axis_order(f.grid(), axis, order);
  if (!f.all_finite()) throw NumericError("partial_derivative: non-finite input");
  ScalarField out(f.grid());
  apply_derivative(f.grid(), f.data().data(), out.data().data(), 1, axis, order);
  return out;
}

TensorField axis_derivative(const TensorField& t, int axis, int order) {
  check_axis_order(t.grid(), axis, order);
  if (!t.all_finite()) throw NumericError("axis_derivative: non-finite input");
  TensorField out(t.grid(), t.valence(), t.symmetry());
  apply_derivative(t.grid(), t.data().data(), out.data().data(), t.stored_per_node(), axis,
                   order);
  return out;
}

TensorField coordinate_gradient(const TensorField& t) {
  std::vector<Valence> val;
  val.reserve(t.valence().size() + 1);
  val.push_back(Valence::co);
  val.insert(val.end(), t.valence().begin(), t.valence().end());
  TensorField out(t.grid(), std::move(val), t.symmetry());
  const int sin = t.stored_per_node();
  const int sout = out.stored_per_node();
  for (int m = 0; m < t.dim(); ++m)
    apply_strided(t.grid(), t.data().data(), sin, out.data().data() + m * sin, sout, sin, m,
                  1, false);
  return out;
}

TensorField coordinate_gradient(const MetricField& g) {
  TensorField out(g.grid(), {Valence::co, Valence::co, Valence::co}, Symmetry::sym2);
  const int nc = g.comps();
  const int sout = out.stored_per_node();
  for (int m = 0; m < g.dim(); ++m)
    apply_strided(g.grid(), g.data().data(), nc, out.data().data() + m * nc, sout, nc, m, 1,
                  false);
  return out;
}

TensorField gradient(const ScalarField& f) {
  TensorField out(f.grid(), {Valence::co}, Symmetry::none);
  const int d = f.grid().dim();
  for (int m = 0; m < d; ++m)
    apply_strided(f.grid(), f.data().data(), 1, out.data().data() + m, d, 1, m, 1, false);
  return out;
}

ScalarField laplace_beltrami(const ScalarField& f, const MetricField& g) {
  const ChartGrid& grid = f.grid();
  const int d = grid.dim();
  g.ensure_cache();
  TensorField df = gradient(f);
  // flux^j = sqrt(g) g^{jk} d_k f
  TensorField flux(grid, {Valence::contra}, Symmetry::none);
  par::for_each(grid.points(), [&](std::int64_t n) {
    const double* gi = g.inv_node(n);
    const double sd = g.sqrt_det(n);
    const double* dfn = df.node(n);
    double* fl = flux.node(n);
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += gi[sym_pair_index(d, j, k)] * dfn[k];
      fl[j] = sd * acc;
    }
  });
  ScalarField lap(grid, 0.0);
  for (int j = 0; j < d; ++j)
    apply_strided(grid, flux.data().data() + j, d, lap.data().data(), 1, 1, j, 1, true);
  par::for_each(grid.points(), [&](std::int64_t n) { lap[n] /= g.sqrt_det(n); });
  return lap;
}

} // namespace locflow
