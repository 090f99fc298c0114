#include "locflow/curvature.hpp"

#include <array>
#include <cmath>

#include "locflow/errors.hpp"
#include "locflow/fd.hpp"
#include "locflow/quadrature.hpp"

namespace locflow {

namespace {

inline int sp(int d, int i, int j) { return sym_pair_index(d, i, j); }

// Dense lookup tables: full rank-4 multi-index -> packed riemann slot + sign.
struct RiemannTable {
  std::array<int, 256> idx{};
  std::array<double, 256> sign{};
  int npack = 0;
};

const RiemannTable& riemann_table(int d) {
  static const std::array<RiemannTable, 5> tables = [] {
    std::array<RiemannTable, 5> t{};
    for (int d = 2; d <= 4; ++d) {
      const int np = asym_pair_count(d);
      t[d].npack = np * (np + 1) / 2;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
              const int f = ((i * d + j) * d + k) * d + l;
              if (i == j || k == l) {
                t[d].idx[f] = 0;
                t[d].sign[f] = 0.0;
                continue;
              }
              int ii = i, jj = j, kk = k, ll = l;
              double s = 1.0;
              if (ii > jj) { std::swap(ii, jj); s = -s; }
              if (kk > ll) { std::swap(kk, ll); s = -s; }
              int a = asym_pair_index(d, ii, jj);
              int b = asym_pair_index(d, kk, ll);
              if (a > b) std::swap(a, b);
              t[d].idx[f] = a * np - a * (a - 1) / 2 + (b - a);
              t[d].sign[f] = s;
            }
    }
    return t;
  }();
  return tables[d];
}

// Unpacks a symmetric-pair matrix (packed upper triangle) into dense d*d.
inline void unpack_sym(const double* p, int d, double* m) {
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m[i * d + j] = p[sp(d, i, j)];
}

} // namespace

TensorField christoffel(const MetricField& g) {
  g.ensure_cache();
  const ChartGrid& grid = g.grid();
  const int d = grid.dim();
  const int nc = sym_pair_count(d);
  const TensorField dg = coordinate_gradient(g);  // [k; (i,j)]
  TensorField Gm(grid, {Valence::contra, Valence::co, Valence::co}, Symmetry::sym2);
  par::for_each(grid.points(), [&](std::int64_t n) {
    const double* gi = g.inv_node(n);
    const double* dgn = dg.node(n);
    double* out = Gm.node(n);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) {
          double acc = 0.0;
          for (int l = 0; l < d; ++l) {
            const double t = dgn[k * nc + sp(d, j, l)] + dgn[j * nc + sp(d, k, l)] -
                             dgn[l * nc + sp(d, j, k)];
            acc += gi[sp(d, i, l)] * t;
          }
          out[i * nc + sp(d, j, k)] = 0.5 * acc;
        }
  });
  return Gm;
}

TensorField riemann(const MetricField& g, const TensorField& Gamma) {
  const ChartGrid& grid = g.grid();
  if (!grid.same_layout(Gamma.grid())) throw ConfigError("riemann: grid mismatch");
  g.ensure_cache();
  const int d = grid.dim();
  const int nc = sym_pair_count(d);
  const int np = asym_pair_count(d);
  const TensorField dG = coordinate_gradient(Gamma);  // [m; p; (j,k)]
  TensorField Rm(grid, {Valence::co, Valence::co, Valence::co, Valence::co},
                 Symmetry::riemann);

  // canonical pair list
  int pi[6], pj[6];
  for (int i = 0, c = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j, ++c) { pi[c] = i; pj[c] = j; }

  par::for_each(grid.points(), [&](std::int64_t n) {
    const double* Gn = Gamma.node(n);
    const double* dGn = dG.node(n);
    const double* gn = g.node(n);
    double* out = Rm.node(n);
    auto gam = [&](int p, int j, int k) { return Gn[p * nc + sp(d, j, k)]; };
    auto dgam = [&](int m, int p, int j, int k) {
      return dGn[(m * d + p) * nc + sp(d, j, k)];
    };
    // lowered curvature with the antisymmetric derivative pair (i,j):
    // low(i,j,k,l) = g_{pk} Rup^p_{ijl}
    auto low = [&](int i, int j, int k, int l) {
      double acc = 0.0;
      for (int p = 0; p < d; ++p) {
        double rup = dgam(i, p, j, l) - dgam(j, p, i, l);
        for (int q = 0; q < d; ++q)
          rup += gam(p, i, q) * gam(q, j, l) - gam(p, j, q) * gam(q, i, l);
        acc += gn[sp(d, p, k)] * rup;
      }
      return acc;
    };
    for (int a = 0; a < np; ++a) {
      const int i = pi[a], j = pj[a];
      for (int b = a; b < np; ++b) {
        const int k = pi[b], l = pj[b];
        // project onto the (k,l) antisymmetry and pair-exchange symmetry
        const double v = 0.25 * (low(i, j, k, l) - low(i, j, l, k) + low(k, l, i, j) -
                                 low(k, l, j, i));
        out[a * np - a * (a - 1) / 2 + (b - a)] = v;
      }
    }
  });
  return Rm;
}

TensorField ricci(const MetricField& g, const TensorField& Rm) {
  const ChartGrid& grid = g.grid();
  if (!grid.same_layout(Rm.grid())) throw ConfigError("ricci: grid mismatch");
  g.ensure_cache();
  const int d = grid.dim();
  const RiemannTable& tb = riemann_table(d);
  TensorField Ric(grid, {Valence::co, Valence::co}, Symmetry::sym2);
  par::for_each(grid.points(), [&](std::int64_t n) {
    const double* gi = g.inv_node(n);
    const double* rm = Rm.node(n);
    double* out = Ric.node(n);
    for (int j = 0; j < d; ++j)
      for (int l = j; l < d; ++l) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i)
          for (int k = 0; k < d; ++k) {
            const int f = ((i * d + j) * d + k) * d + l;
            acc += gi[sp(d, i, k)] * tb.sign[f] * rm[tb.idx[f]];
          }
        out[sp(d, j, l)] = acc;
      }
  });
  return Ric;
}

ScalarField scalar_curvature(const MetricField& g, const TensorField& Ric) {
  const ChartGrid& grid = g.grid();
  if (!grid.same_layout(Ric.grid())) throw ConfigError("scalar_curvature: grid mismatch");
  g.ensure_cache();
  const int d = grid.dim();
  ScalarField R(grid);
  par::for_each(grid.points(), [&](std::int64_t n) {
    const double* gi = g.inv_node(n);
    const double* rc = Ric.node(n);
    double acc = 0.0;
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) acc += gi[sp(d, j, l)] * rc[sp(d, j, l)];
    R[n] = acc;
  });
  return R;
}

TensorField ricci_from_metric(const MetricField& g) {
  const TensorField Gm = christoffel(g);
  const TensorField Rm = riemann(g, Gm);
  return ricci(g, Rm);
}

void weyl_decompose(const MetricField& g, const TensorField& Rm, const TensorField& Ric,
                    const ScalarField& R, TensorField* W, TensorField* Wp, TensorField* Wm) {
  const ChartGrid& grid = g.grid();
  const int d = grid.dim();
  if (d < 3) throw ConfigError("weyl_decompose: requires dimension >= 3");
  if ((Wp || Wm) && d != 4)
    throw ConfigError("weyl_decompose: self-dual split requires dimension 4");
  g.ensure_cache();
  const int np = asym_pair_count(d);
  const int npk = np * (np + 1) / 2;
  int pi[6], pj[6];
  for (int i = 0, c = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j, ++c) { pi[c] = i; pj[c] = j; }

  if (W) *W = TensorField(grid, Rm.valence(), Symmetry::riemann);
  if (Wp) *Wp = TensorField(grid, Rm.valence(), Symmetry::riemann);
  if (Wm) *Wm = TensorField(grid, Rm.valence(), Symmetry::riemann);

  // permutation signs for the 4D Levi-Civita symbol
  auto perm_sign = [](int i, int j, int k, int l) -> double {
    const int v[4] = {i, j, k, l};
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        if (v[a] == v[b]) return 0.0;
    int sgn = 1;
    int w[4] = {i, j, k, l};
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        if (w[a] > w[b]) { std::swap(w[a], w[b]); sgn = -sgn; }
    return sgn;
  };

  par::for_each(grid.points(), [&](std::int64_t n) {
    const double* gn = g.node(n);
    const double* gi = g.inv_node(n);
    const double* ric = Ric.node(n);
    const double* rm = Rm.node(n);
    const double rs = R[n];
    // Schouten
    double S[16];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        S[i * d + j] =
            (ric[sp(d, i, j)] - rs * gn[sp(d, i, j)] / (2.0 * (d - 1))) / (d - 2);
    double w6[21];
    for (int a = 0; a < np; ++a) {
      const int i = pi[a], j = pj[a];
      for (int b = a; b < np; ++b) {
        const int k = pi[b], l = pj[b];
        const double kn = S[i * d + k] * gn[sp(d, j, l)] + S[j * d + l] * gn[sp(d, i, k)] -
                          S[i * d + l] * gn[sp(d, j, k)] - S[j * d + k] * gn[sp(d, i, l)];
        w6[a * np - a * (a - 1) / 2 + (b - a)] =
            rm[a * np - a * (a - 1) / 2 + (b - a)] - kn;
      }
    }
    if (W) {
      double* out = W->node(n);
      for (int c = 0; c < npk; ++c) out[c] = w6[c];
    }
    if (Wp || Wm) {
      // 2-form star matrix: star[A][B] = eps_{ij}^{kl}, A=(i<j), B=(k<l)
      const double sd = g.sqrt_det(n);
      double star[6][6];
      for (int A = 0; A < 6; ++A)
        for (int B = 0; B < 6; ++B) {
          const int i = pi[A], j = pj[A], k = pi[B], l = pj[B];
          double acc = 0.0;
          for (int m = 0; m < 4; ++m)
            for (int q = 0; q < 4; ++q) {
              const double e = perm_sign(i, j, m, q);
              if (e == 0.0) continue;
              acc += sd * e * gi[sp(4, m, k)] * gi[sp(4, q, l)];
            }
          star[A][B] = acc;
        }
      // dense 6x6 W
      double Wd[6][6];
      for (int A = 0; A < 6; ++A)
        for (int B = 0; B < 6; ++B) {
          const int a = A < B ? A : B, b = A < B ? B : A;
          Wd[A][B] = w6[a * 6 - a * (a - 1) / 2 + (b - a)];
        }
      // M = 1/2 (star*W + W*star^T); exactly symmetric
      double M[6][6];
      for (int A = 0; A < 6; ++A)
        for (int B = 0; B < 6; ++B) {
          double s1 = 0.0, s2 = 0.0;
          for (int C = 0; C < 6; ++C) {
            s1 += star[A][C] * Wd[C][B];
            s2 += Wd[A][C] * star[B][C];
          }
          M[A][B] = 0.5 * (s1 + s2);
        }
      for (int A = 0; A < 6; ++A)
        for (int B = A; B < 6; ++B) {
          const int c = A * 6 - A * (A - 1) / 2 + (B - A);
          if (Wp) Wp->node(n)[c] = 0.5 * (Wd[A][B] + M[A][B]);
          if (Wm) Wm->node(n)[c] = 0.5 * (Wd[A][B] - M[A][B]);
        }
    }
  });
}

TensorField covariant_derivative(const TensorField& t, const TensorField& Gamma) {
  const ChartGrid& grid = t.grid();
  const int d = grid.dim();
  const int nc = sym_pair_count(d);
  const int rank = t.rank();
  for (Valence v : t.valence())
    if (v != Valence::co)
      throw ConfigError("covariant_derivative: all-covariant tensors only");
  const TensorField dt = coordinate_gradient(t);
  std::vector<Valence> val;
  val.push_back(Valence::co);
  val.insert(val.end(), t.valence().begin(), t.valence().end());
  TensorField out(grid, val, t.symmetry());
  const int sin = t.stored_per_node();
  std::int64_t full_sz = 1;
  for (int a = 0; a < rank; ++a) full_sz *= d;

  // canonical index list of the packed layout: for each stored component the
  // representative full multi-index
  std::vector<std::array<int, 6>> rep(static_cast<std::size_t>(sin));
  {
    std::vector<char> seen(static_cast<std::size_t>(sin), 0);
    int idx[6];
    for (std::int64_t f = 0; f < full_sz; ++f) {
      std::int64_t r = f;
      for (int a = rank - 1; a >= 0; --a) { idx[a] = static_cast<int>(r % d); r /= d; }
      const TensorField::Slot s = t.slot(std::span<const int>(idx, rank));
      if (s.sign == 1 && !seen[s.index]) {
        seen[s.index] = 1;
        for (int a = 0; a < rank; ++a) rep[s.index][a] = idx[a];
      }
    }
  }

  par::for_each(grid.points(), [&](std::int64_t n) {
    double full[1024];
    t.expand_node(n, full);
    const double* Gn = Gamma.node(n);
    const double* dtn = dt.node(n);
    double* o = out.node(n);
    auto gam = [&](int p, int j, int k) { return Gn[p * nc + sp(d, j, k)]; };
    std::int64_t strides[6];
    {
      std::int64_t s = 1;
      for (int a = rank - 1; a >= 0; --a) { strides[a] = s; s *= d; }
    }
    for (int m = 0; m < d; ++m)
      for (int c = 0; c < sin; ++c) {
        double corr = 0.0;
        std::int64_t base = 0;
        for (int a = 0; a < rank; ++a) base += rep[c][a] * strides[a];
        for (int a = 0; a < rank; ++a) {
          const std::int64_t off = base - rep[c][a] * strides[a];
          for (int s = 0; s < d; ++s)
            corr += gam(s, m, rep[c][a]) * full[off + s * strides[a]];
        }
        o[m * sin + c] = dtn[m * sin + c] - corr;
      }
  });
  return out;
}

namespace {

// Shared Bach assembly for one Weyl-type tensor. coefficients:
//   B_ij = c2 * g^{ka} g^{lb} (DD T)_{ab; i k j l} + cr * R^{kl} T_{ikjl}
TensorField bach_of(const MetricField& g, const TensorField& T, const TensorField& Gamma,
                    const TensorField& Ric, double c2, double cr) {
  const ChartGrid& grid = g.grid();
  const int d = 4;
  const int nc = sym_pair_count(d);
  const RiemannTable& tb = riemann_table(d);
  const TensorField V = covariant_derivative(T, Gamma);  // [b; ikjl]
  const TensorField dV = coordinate_gradient(V);         // [a; b; ikjl]
  TensorField B(grid, {Valence::co, Valence::co}, Symmetry::sym2);

  par::for_each(grid.points(), [&](std::int64_t n) {
    const double* gi = g.inv_node(n);
    const double* Gn = Gamma.node(n);
    const double* ric = Ric.node(n);
    double gInv[16];
    unpack_sym(gi, d, gInv);
    auto gam = [&](int p, int j, int k) { return Gn[p * nc + sp(d, j, k)]; };

    // dense local copies
    double Tfull[256];
    T.expand_node(n, Tfull);
    double Vfull[1024];
    V.expand_node(n, Vfull);
    // dV full: [a][b][q1..q4]
    const double* dVn = dV.node(n);
    auto vfull = [&](int b, int q1, int q2, int q3, int q4) {
      return Vfull[(((b * 4 + q1) * 4 + q2) * 4 + q3) * 4 + q4];
    };
    auto dvfull = [&](int a, int b, int q1, int q2, int q3, int q4) {
      const int f = ((q1 * 4 + q2) * 4 + q3) * 4 + q4;
      return tb.sign[f] * dVn[(a * 4 + b) * 21 + tb.idx[f]];
    };
    // raised Ricci
    double ricUp[16];
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) {
        double acc = 0.0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b)
            acc += gInv[k * 4 + a] * gInv[l * 4 + b] * ric[sp(d, a, b)];
        ricUp[k * 4 + l] = acc;
      }

    double* out = B.node(n);
    double Braw[16];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double acc = 0.0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            double dd = 0.0;
            for (int k = 0; k < 4; ++k) {
              const double gka = gInv[k * 4 + a];
              if (gka == 0.0) continue;
              for (int l = 0; l < 4; ++l) {
                const double w = gka * gInv[l * 4 + b];
                if (w == 0.0) continue;
                double term = dvfull(a, b, i, k, j, l);
                for (int s = 0; s < 4; ++s) {
                  term -= gam(s, a, b) * vfull(s, i, k, j, l);
                  term -= gam(s, a, i) * vfull(b, s, k, j, l);
                  term -= gam(s, a, k) * vfull(b, i, s, j, l);
                  term -= gam(s, a, j) * vfull(b, i, k, s, l);
                  term -= gam(s, a, l) * vfull(b, i, k, j, s);
                }
                dd += w * term;
              }
            }
            acc += dd;
          }
        Braw[i * 4 + j] = acc;
      }
    // Ricci-Weyl term from the dense expansion
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double rw = 0.0;
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            rw += ricUp[k * 4 + l] * Tfull[((i * 4 + k) * 4 + j) * 4 + l];
        Braw[i * 4 + j] = c2 * Braw[i * 4 + j] + cr * rw;
      }
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j)
        out[sp(d, i, j)] = 0.5 * (Braw[i * 4 + j] + Braw[j * 4 + i]);
  });
  return B;
}

} // namespace

BachPair bach(const MetricField& g, const CurvaturePack& pack) {
  if (g.dim() != 4) throw ConfigError("bach: requires dimension 4");
  if (!pack.weyl || !pack.weyl_plus)
    throw ConfigError("bach: curvature pack lacks the Weyl decomposition");
  g.ensure_cache();
  TensorField bfull =
      bach_of(g, *pack.weyl, pack.christoffel, pack.ricci, 1.0, 0.5);
  TensorField bplus =
      bach_of(g, *pack.weyl_plus, pack.christoffel, pack.ricci, 2.0, 1.0);
  return BachPair{std::move(bfull), std::move(bplus)};
}

ScalarField elliptic_residual(const MetricField& g, const CurvaturePack& pack,
                              const TensorField& B) {
  if (g.dim() != 4) throw ConfigError("elliptic_residual: requires dimension 4");
  const ChartGrid& grid = g.grid();
  const int d = 4;
  const int nc = sym_pair_count(d);
  const RiemannTable& tb = riemann_table(d);
  g.ensure_cache();
  const TensorField V = covariant_derivative(pack.ricci, pack.christoffel);  // [m;(ij)]
  const TensorField dV = coordinate_gradient(V);                             // [a;m;(ij)]
  TensorField E(grid, {Valence::co, Valence::co}, Symmetry::sym2);
  par::for_each(grid.points(), [&](std::int64_t n) {
    const double* gi = g.inv_node(n);
    const double* Gn = pack.christoffel.node(n);
    const double* ric = pack.ricci.node(n);
    const double* rm = pack.riemann.node(n);
    const double* vn = V.node(n);
    const double* dvn = dV.node(n);
    const double* bn = B.node(n);
    double* e = E.node(n);
    auto gam = [&](int p, int j, int k) { return Gn[p * nc + sp(d, j, k)]; };
    auto v3 = [&](int m, int i, int j) { return vn[m * nc + sp(d, i, j)]; };
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        // rough Laplacian of Ric
        double lap = 0.0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            const double w = gi[sp(d, a, b)];
            if (w == 0.0) continue;
            double term = dvn[(a * 4 + b) * nc + sp(d, i, j)];
            for (int s = 0; s < 4; ++s) {
              term -= gam(s, a, b) * v3(s, i, j);
              term -= gam(s, a, i) * v3(b, s, j);
              term -= gam(s, a, j) * v3(b, i, s);
            }
            lap += w * term;
          }
        // Rm*Ric convention
        double star = 0.0;
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            const double gkl = gi[sp(d, k, l)];
            if (gkl == 0.0) continue;
            double t1 = 0.0;
            for (int p = 0; p < 4; ++p)
              for (int q = 0; q < 4; ++q) {
                const int f = ((i * 4 + k) * 4 + p) * 4 + j;
                t1 += gi[sp(d, p, q)] * tb.sign[f] * rm[tb.idx[f]] * ric[sp(d, l, q)];
              }
            star += 2.0 * gkl * t1;
            star -= 2.0 * gkl * ric[sp(d, i, k)] * ric[sp(d, j, l)];
          }
        e[sp(d, i, j)] = lap - star - bn[sp(d, i, j)];
      }
  });
  return pointwise_tensor_norm(E, g);
}

CurvaturePack compute_curvature(const MetricField& g, CurvatureOptions opt) {
  g.validate("compute_curvature");
  TensorField Gm = christoffel(g);
  TensorField Rm = riemann(g, Gm);
  TensorField Ric = ricci(g, Rm);
  ScalarField R = scalar_curvature(g, Ric);
  CurvaturePack pack{std::move(Gm), std::move(Rm), std::move(Ric), std::move(R),
                     std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  const int d = g.dim();
  if (opt.weyl && d >= 3) {
    TensorField W(g.grid(), pack.riemann.valence(), Symmetry::riemann);
    if (d == 4) {
      TensorField Wp(g.grid(), pack.riemann.valence(), Symmetry::riemann);
      TensorField Wm(g.grid(), pack.riemann.valence(), Symmetry::riemann);
      weyl_decompose(g, pack.riemann, pack.ricci, pack.scalar, &W, &Wp, &Wm);
      pack.weyl_plus = std::move(Wp);
      pack.weyl_minus = std::move(Wm);
    } else {
      weyl_decompose(g, pack.riemann, pack.ricci, pack.scalar, &W, nullptr, nullptr);
    }
    pack.weyl = std::move(W);
  }
  if (opt.bach && d == 4) {
    if (!pack.weyl) throw ConfigError("compute_curvature: bach requires weyl");
    BachPair bp = bach(g, pack);
    pack.bach_full = std::move(bp.full);
    pack.bach_wplus = std::move(bp.wplus);
  }
  return pack;
}

} // namespace locflow
