#pragma once

#include <optional>

#include "locflow/field.hpp"

namespace locflow {

// Connection and curvature of a metric sample. Conventions:
//   Gamma^i_{jk} = 1/2 g^{il} (d_k g_{jl} + d_j g_{kl} - d_l g_{jk})
//   Rup^p_{ijl}  = d_i Gamma^p_{jl} - d_j Gamma^p_{il}
//                  + Gamma^p_{iq} Gamma^q_{jl} - Gamma^p_{jq} Gamma^q_{il}
//   Rm_{ijkl}    = g_{pk} Rup^p_{ijl}   (upper slot lowered into the 3rd
//                  position, so the round sphere has Rm_{ijij} > 0)
//   Ric_{jl}     = g^{ik} Rm_{ijkl},  R = g^{jl} Ric_{jl}
// Stored Rm is projected onto the exact algebraic symmetries
// (antisymmetric pairs, pair exchange); the projection defect is a
// discretization residual of the stencils.
struct CurvaturePack {
  TensorField christoffel;  // (contra, co, co), symmetric trailing pair
  TensorField riemann;      // all-covariant, riemann storage
  TensorField ricci;        // symmetric
  ScalarField scalar;
  std::optional<TensorField> weyl;        // dim >= 3
  std::optional<TensorField> weyl_plus;   // dim == 4
  std::optional<TensorField> weyl_minus;  // dim == 4
  std::optional<TensorField> bach_full;   // dim == 4: D^k D^l W_{ikjl} + 1/2 R^{kl} W_{ikjl}
  std::optional<TensorField> bach_wplus;  // dim == 4: 2 D^k D^l W+_{ikjl} + R^{kl} W+_{ikjl}
};

struct CurvatureOptions {
  bool weyl = true;
  bool bach = false;
};

TensorField christoffel(const MetricField& g);
TensorField riemann(const MetricField& g, const TensorField& Gamma);
TensorField ricci(const MetricField& g, const TensorField& Rm);
ScalarField scalar_curvature(const MetricField& g, const TensorField& Ric);

// Ricci tensor straight from the metric (the flow right-hand side).
TensorField ricci_from_metric(const MetricField& g);

// W = Rm - (Schouten kn g); for dim 4 also the self-dual/anti-self-dual
// split under the Hodge star of the chart orientation with volume form
// sqrt(det g) dx^1^...^dx^4. The split is symmetrized so that
// weyl_plus + weyl_minus == weyl exactly.
void weyl_decompose(const MetricField& g, const TensorField& Rm, const TensorField& Ric,
                    const ScalarField& R, TensorField* W, TensorField* Wp, TensorField* Wm);

// Covariant derivative of an all-covariant tensor: new slot prepended.
TensorField covariant_derivative(const TensorField& t, const TensorField& Gamma);

struct BachPair {
  TensorField full;    // built from the full Weyl tensor
  TensorField wplus;   // built from the self-dual part
};

// Both Bach variants, symmetrized. Requires pack.weyl/weyl_plus present.
BachPair bach(const MetricField& g, const CurvaturePack& pack);

// Pointwise g-norm of  lap Ric - Rm*Ric - B  with the convention
//   (Rm*Ric)_{ij} = 2 g^{kl} g^{pq} Rm_{ikpj} Ric_{lq} - 2 g^{kl} Ric_{ik} Ric_{jl}.
// Report-only diagnostic; no exactness is asserted.
ScalarField elliptic_residual(const MetricField& g, const CurvaturePack& pack,
                              const TensorField& B);

CurvaturePack compute_curvature(const MetricField& g, CurvatureOptions opt = {});

} // namespace locflow
