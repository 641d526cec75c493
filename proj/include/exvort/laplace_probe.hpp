#pragma once

#include <complex>
#include <utility>

#include "exvort/surface.hpp"

namespace exvort {

/// Five-point Laplacian of a callable at z with probe step delta.
template <class F>
double laplacian_stencil(F&& f, Complex z, double delta) {
    const double fc = f(z);
    const double fe = f(z + Complex(delta, 0.0));
    const double fw = f(z - Complex(delta, 0.0));
    const double fn = f(z + Complex(0.0, delta));
    const double fs = f(z - Complex(0.0, delta));
    return (fe + fw + fn + fs - 4.0 * fc) / (delta * delta);
}

/// Richardson-extrapolated Laplacian, O(delta^4).  Used as the
/// implementation-independent residual probe for closed-form solutions; the
/// probe step is decoupled from any grid spacing.
template <class F>
double laplacian_probe(F&& f, Complex z, double delta = 1e-3) {
    const double coarse = laplacian_stencil(f, z, delta);
    const double fine = laplacian_stencil(f, z, 0.5 * delta);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace exvort
