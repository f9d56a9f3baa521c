#pragma once

#include <functional>

namespace cfh {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7,K15) integration with interval bisection.
// Subdivides until the local error estimate meets rel_tol against the running
// total (or abs_tol); throws on non-convergence.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-12, double abs_tol = 1e-14);

}  // namespace cfh
