#pragma once

#include "smax/types.hpp"

namespace smax::detail {

// Raw-vector softmax / log-sum-exp used by the library internals (property
// sweeps, integrator, solver) to skip repeated domain-type validation in
// hot loops. Same max-shifted evaluation as the public entry points.
Vector softmax_values(const Vector& z, double lambda);
double lse_value(const Vector& z, double lambda);

}  // namespace smax::detail
