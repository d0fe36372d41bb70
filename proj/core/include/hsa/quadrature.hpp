/*
   Copyright 2026 the hsa authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <cstdint>
#include <functional>

#include "hsa/geometry.hpp"

namespace hsa {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    long max_evals = 4000000;
    /* Grade the panel mesh dyadically toward an endpoint with an integrable
       singularity.  The rule itself never samples the endpoint. */
    bool singular_lo = false;
    bool singular_hi = false;
};

/* Adaptive Gauss-Kronrod 15 on (a, b); b may be +infinity, handled by
   geometrically growing panels under a tail-decay stopping rule.  Throws
   InvalidInterval for a malformed range and NoConvergence when the
   evaluation budget is exhausted or an infinite-range tail never decays. */
QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const IntegrateOptions& opt = {});

/* Value of one non-adaptive 15-point Gauss-Kronrod panel on [a, b]; the
   building block for callers managing their own subdivisions. */
double gk15_panel(const std::function<double(double)>& f, double a, double b);

/* d * meas(K cap C) * integral_{r0}^{r1} phi(t) t^{d-1} dt, the polar form
   of integrating the gauge-radial profile phi over the truncated cone. */
QuadratureResult radial_integral(const Polytope& P, const Cone& C,
                                 const std::function<double(double)>& phi, double r0, double r1,
                                 const IntegrateOptions& opt = {});

/* Integral of F over { rho * z : z in the cell cone section, r0 < rho < r1 }.
   The angular factor uses a fixed degree-7 simplex rule with one uniform
   refinement (difference feeds the error estimate); the radial factor is
   adaptive. */
QuadratureResult cell_quadrature(const FanCell& cell, const std::function<double(const Vec&)>& F,
                                 double r0, double r1, const IntegrateOptions& opt = {});

/* Gauge shell { inner <= |y|_K <= outer } intersected with the cone.
   inner = 0 gives the solid gauge ball.  tail_bound is an optional caller
   supplied bound on the mass beyond `outer`; it is copied into the result
   so callers can fold it into an error budget. */
struct RadialRegion {
    double inner = 0.0;
    double outer = 1.0;
    double tail_bound = 0.0;
};

struct McConfig {
    long samples = 1000000;
    uint64_t seed = 1;
    int shards = 8;
    /* importance_sigma > 0 draws the gauge radius from the density
       proportional to rho^{d-1-sigma}, cancelling an integrand singularity
       of order up to sigma at the origin.  Requires sigma < d. */
    double importance_sigma = 0.0;
    int threads = 0;  // 0: hardware concurrency
};

struct McResult {
    double estimate = 0.0;
    double std_error = 0.0;
    double tail_bound = 0.0;
    long samples = 0;
};

/* Monte Carlo integral of F over the region.  Deterministic for a fixed
   (seed, shards, samples) triple regardless of thread count. */
McResult mc_region_integrate(const Polytope& P, const Cone& C,
                             const std::function<double(const Vec&)>& F, const RadialRegion& region,
                             const McConfig& cfg = {});

}  // namespace hsa
