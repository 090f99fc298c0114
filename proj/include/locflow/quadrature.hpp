#pragma once

#include "locflow/field.hpp"

namespace locflow {

// integral of f over the chart with volume element sqrt(det g) dx, using
// trapezoidal face weights on frozen boundaries. Deterministic fixed-order
// reduction: the result is independent of the thread count.
double integrate(const ScalarField& f, const MetricField& g);

// Same, with an additional pointwise weight field (mask or density).
double integrate_weighted(const ScalarField& f, const ScalarField& w, const MetricField& g);

// ( integral |f|^p dV_g )^{1/p}, p >= 1.
double lp_norm(const ScalarField& f, double p, const MetricField& g);

// Pointwise norm sqrt( full g-contraction of t with itself ): covariant
// slots contract with g^{-1}, contravariant with g.
ScalarField pointwise_tensor_norm(const TensorField& t, const MetricField& g);

} // namespace locflow
