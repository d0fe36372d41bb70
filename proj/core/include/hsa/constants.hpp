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

#include <functional>
#include <optional>

#include "hsa/operator.hpp"

namespace hsa {

/* Sharp pair for the additive pointwise bound
       |D f(x)| <= A |grad f|_{L_p} + B |f|_inf,
   A = (d meas)^{1/p'} |g_{w,h}|_{L_{p'}(0,h)} (also the sharp constant of the
   gradient-only bound on the singular part), B the truncated operator norm.
   The remaining fields snapshot the configuration the pair was built from. */
struct AdditiveConstants {
    double A = 0.0;
    double B = 0.0;
    double g_norm_value = 0.0;
    double tail_value = 0.0;
    double measure = 0.0;  // meas(K cap C)
    int dim = 0;
    double h = 0.0;
    double p = 0.0;
    double p_dual = 0.0;
};

/* Power-law tuple behind the multiplicative bound
       |D f(x)| <= M |f|_inf^{1-alpha} |grad f|_{L_p}^alpha,
   X = A(h=1), Y = 2 d meas / gamma, Z = (1/2) int_0^1 g_{w,1}^{p'-1},
   alpha = p gamma / (p - d) (gamma at p = infinity), beta = -(d + gamma). */
struct MultiplicativeConstants {
    double X = 0.0;
    double Y = 0.0;
    double Z = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double M = 0.0;
    double gamma = 0.0;
    double measure = 0.0;
    int dim = 0;
    double p = 0.0;
    double p_dual = 0.0;
};

/* Truncation radius h_N solving |D_{trunc,h}| = N and the resulting sharp
   approximation error E_N = A(h_N).  feasible_max is the full operator norm
   when finite (budgets must stay below it), +infinity otherwise. */
struct StechkinSolution {
    double budget = 0.0;  // N
    double h_N = 0.0;
    double E_N = 0.0;
    double feasible_max = 0.0;
};

/* Modulus of continuity of the operator on the unit gradient-norm class and
   the induced optimal-recovery bound.  delta_h is the sup-norm level tied to
   the spec's own horizon; omega_additive = A + B delta_h is the modulus at
   that level.  For power-law weights the closed multiplicative form
   omega(delta) = M delta^{1-alpha} holds for all delta and recovery_upper
   coincides with it; otherwise recovery_upper minimizes A(h) + B(h) delta
   over h numerically and is an upper bound only. */
struct ModulusReport {
    double delta_h = 0.0;
    double omega_additive = 0.0;
    std::optional<double> M;
    std::optional<double> alpha;
    std::function<double(double)> omega_multiplicative;  // power-law only
    std::function<double(double)> recovery_upper;
};

enum class SharpnessKind { Ostrowski, Additive, Multiplicative };

/* Numerically applied operator on the extremal function (lhs) against the
   closed constant expression it is proved to attain (rhs). */
struct SharpnessReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

AdditiveConstants additive_constants(const OperatorSpec& spec);

/* Power-law weight w(t) = t^{-(d+gamma)} on the gauge of P restricted to C;
   requires 0 < gamma < 1 - d/p. */
MultiplicativeConstants multiplicative_constants(const Polytope& P, const Cone& C,
                                                 double gamma, double p);

/* Solves 2 d meas int_{h}^inf w rho^{d-1} = N for h (closed form for
   power-law weights, bracketed bisection otherwise) and evaluates E_N. */
StechkinSolution stechkin_solve(const Polytope& P, const Cone& C, const Weight& w, double p,
                                double N);

ModulusReport modulus_and_recovery(const OperatorSpec& spec);

SharpnessReport verify_sharpness(const OperatorSpec& spec, SharpnessKind kind,
                                 double rel_tol = 1e-8);

}  // namespace hsa
