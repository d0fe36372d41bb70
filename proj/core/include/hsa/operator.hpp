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
#include <variant>

#include "hsa/geometry.hpp"
#include "hsa/quadrature.hpp"
#include "hsa/weights.hpp"

namespace hsa {

/* Problem description for the hypersingular operator
       D f(x) = int_C w(|t|_K) (f(x) - f(x+t)) dt
   and its truncation to |t|_K > h.  Construction validates that the
   integrability exponent exceeds the dimension and that the weight's
   g-function has a finite dual norm, and caches the fan decomposition of
   K cap C that every application walks. */
class OperatorSpec {
  public:
    OperatorSpec(Polytope P, Cone C, Weight w, double h, double p);

    const Polytope& polytope() const { return P_; }
    const Cone& cone() const { return C_; }
    const Weight& weight() const { return w_; }
    double horizon() const { return h_; }
    double p() const { return p_; }
    double p_dual() const { return p_dual_; }
    int dim() const { return P_.dim(); }
    const FanDecomposition& fan() const { return fan_; }
    /* d-dimensional measure of K cap C. */
    double intersection_measure() const { return fan_.measure; }

  private:
    Polytope P_;
    Cone C_;
    Weight w_;
    double h_ = 0.0;
    double p_ = 0.0;
    double p_dual_ = 0.0;
    FanDecomposition fan_;
};

/* Tail descriptors for scalar fields.  ConstantOutside means f(y) = value
   whenever |y|_K >= radius; PowerDecay means |f(y)| <= amplitude * |y|_K^
   exponent (exponent <= 0) whenever |y|_K >= radius. */
struct DecayNone {};
struct ConstantOutside {
    double radius = 0.0;
    double value = 0.0;
};
struct PowerDecay {
    double radius = 1.0;
    double amplitude = 0.0;
    double exponent = 0.0;
};
using Decay = std::variant<DecayNone, ConstantOutside, PowerDecay>;

/* A scalar function on the cone together with the metadata the operator
   applications need: a tail descriptor or sup bound for truncating the
   outer integral, and gradient (or Lipschitz) information certifying that
   the singular part converges. */
struct ScalarField {
    std::function<double(const Vec&)> evaluate;
    std::function<Vec(const Vec&)> gradient;  // empty when unavailable
    /* Optional f(x) - f(y) evaluated in a cancellation-safe form.  The
       operator quadratures difference nearly coincident points inside a
       weight that blows up like |t|^beta, so a field built from a plateau
       constant minus a tiny profile loses every significant digit if the
       subtraction goes through evaluate(); fields with such structure
       should supply the difference directly. */
    std::function<double(const Vec&, const Vec&)> difference;
    std::optional<double> sup_norm;
    Decay decay = DecayNone{};
    std::optional<double> lipschitz_bound;
};

/* The profile f_e(y) = int_0^{|y|_K} g^{p'-1}(u) du on hK cap C, extended
   by its plateau value beyond hK.  Gradient g^{p'-1}(|y|_K) n_s / delta_s
   on the interior of each fan cell. */
ScalarField extremal_fe(const OperatorSpec& spec);

/* psi = S/2 - f_e inside hK and -S/2 outside, S = int_0^h g^{p'-1}; the
   bounded extremal with sup_norm S/2, constant outside radius h. */
ScalarField extremal_psi(const OperatorSpec& spec);

/* Truncated operator int_{C minus hK} w(|t|_K)(f(x) - f(x+t)) dt, cell by
   cell over the fan.  Fields constant outside a radius get an exact closed
   tail; otherwise the outer radius doubles until the analytic bound
   (|f(x)| + sup tail) * d * meas * tail_integral drops below the target,
   and the final bound is folded into error_estimate. */
QuadratureResult apply_truncated(const OperatorSpec& spec, const ScalarField& f, const Vec& x,
                                 double rel_tol = 1e-8);

/* Singular part int_{hK cap C} w(|t|_K)(f(x) - f(x+t)) dt with origin
   grading; requires gradient metadata or a Lipschitz bound so the O(|t|)
   cancellation at the singularity is certified. */
QuadratureResult apply_singular(const OperatorSpec& spec, const ScalarField& f, const Vec& x,
                                double rel_tol = 1e-8);

/* Full operator: singular part plus truncation, error estimates added. */
QuadratureResult apply_full(const OperatorSpec& spec, const ScalarField& f, const Vec& x,
                            double rel_tol = 1e-8);

/* Operator norm of the truncation on sup-bounded fields:
   2 d meas(K cap C) int_h^inf w(rho) rho^{d-1} drho. */
double truncated_norm(const OperatorSpec& spec);

}  // namespace hsa
