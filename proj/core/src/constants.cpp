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
#include "hsa/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hsa/errors.hpp"

namespace hsa {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

/* int_0^h g_{w,h}^{p'-1}(u) du; the convention g^0 == 1 makes this h when
   p' = 1, including at u = h where g vanishes. */
double profile_mass(const Weight& w, double h, double p_dual) {
    if (p_dual == 1.0) return h;
    const GFunction g(w, h);
    IntegrateOptions o;
    o.rel_tol = 1e-12;
    o.singular_lo = true;
    return integrate_1d([&](double u) { return std::pow(g(u), p_dual - 1.0); }, 0.0, h, o)
        .value;
}

/* |grad psi|_{L_p(C)} = | |grad f_e|_{K polar} |_{L_p(hK cap C)}: the ess sup
   of g^{p'-1} is 1 when p' = 1, and for finite p the p-th power integrates
   g^{(p'-1)p} = g^{p'} radially. */
double gradient_norm(const OperatorSpec& spec) {
    if (std::isinf(spec.p())) return 1.0;
    const GFunction g(spec.weight(), spec.horizon());
    const double pd = spec.p_dual();
    const QuadratureResult q = radial_integral(
        spec.polytope(), spec.cone(), [&](double rho) { return std::pow(g(rho), pd); }, 0.0,
        spec.horizon());
    return std::pow(q.value, 1.0 / spec.p());
}

}  // namespace

AdditiveConstants additive_constants(const OperatorSpec& spec) {
    AdditiveConstants out;
    out.dim = spec.dim();
    out.h = spec.horizon();
    out.p = spec.p();
    out.p_dual = spec.p_dual();
    out.measure = spec.intersection_measure();
    const double dmeas = static_cast<double>(out.dim) * out.measure;
    out.g_norm_value = g_norm(spec.weight(), out.h, out.p_dual);
    out.tail_value = tail_integral(spec.weight(), out.h);
    out.A = std::pow(dmeas, 1.0 / out.p_dual) * out.g_norm_value;
    out.B = 2.0 * dmeas * out.tail_value;
    return out;
}

MultiplicativeConstants multiplicative_constants(const Polytope& P, const Cone& C,
                                                 double gamma, double p) {
    const int d = P.dim();
    if (P.dim() != C.dim()) throw DimensionMismatch("polytope and cone dimensions differ");
    const double dd = static_cast<double>(d);
    if (std::isnan(gamma) || std::isnan(p) || !(p > dd) ||
        !(gamma > 0.0 && gamma < 1.0 - dd / p))
        throw HypothesisViolated(
            "multiplicative constants need 0 < gamma < 1 - d/p with p > d");

    MultiplicativeConstants out;
    out.dim = d;
    out.gamma = gamma;
    out.p = p;
    out.p_dual = conjugate_exponent(p);
    out.beta = -(dd + gamma);
    out.alpha = std::isinf(p) ? gamma : p * gamma / (p - dd);
    out.measure = fan_decompose(P, C).measure;
    const double dmeas = dd * out.measure;

    const Weight w = Weight::power_law(d, gamma);
    out.X = std::pow(dmeas, 1.0 / out.p_dual) * g_norm(w, 1.0, out.p_dual);
    out.Y = 2.0 * dmeas / gamma;
    out.Z = 0.5 * profile_mass(w, 1.0, out.p_dual);

    /* M = (X^{p'} + Y Z) / (X^{(p'-1) alpha} Z^{1-alpha}), assembled in log
       space so extreme X or Z cannot overflow the intermediate powers. */
    const double lX = std::log(out.X), lZ = std::log(out.Z);
    const double a1 = out.p_dual * lX;
    const double a2 = std::log(out.Y) + lZ;
    const double top = std::max(a1, a2) +
                       std::log1p(std::exp(-std::abs(a1 - a2)));  // log(e^a1 + e^a2)
    out.M = std::exp(top - (out.p_dual - 1.0) * out.alpha * lX - (1.0 - out.alpha) * lZ);
    return out;
}

StechkinSolution stechkin_solve(const Polytope& P, const Cone& C, const Weight& w, double p,
                                double N) {
    const int d = P.dim();
    if (P.dim() != C.dim()) throw DimensionMismatch("polytope and cone dimensions differ");
    if (w.dim() != d) throw DimensionMismatch("weight dimension differs from the polytope");
    if (std::isnan(p) || !(p > static_cast<double>(d)))
        throw HypothesisViolated("integrability exponent must exceed the dimension");
    if (std::isnan(N) || !(N > 0.0) || std::isinf(N))
        throw InvalidInterval("operator-norm budget must be positive and finite");

    const double dmeas = static_cast<double>(d) * fan_decompose(P, C).measure;
    const double p_dual = conjugate_exponent(p);

    StechkinSolution out;
    out.budget = N;
    /* Feasibility: when the whole operator is bounded, budgets at or above
       its norm are not achievable by any truncation radius. */
    try {
        out.feasible_max = 2.0 * dmeas * weight_norm(w, 0.0, kInf, 1.0);
    } catch (const DivergentNorm&) {
        out.feasible_max = kInf;
    }
    if (N >= out.feasible_max)
        throw InfeasibleBudget("budget meets or exceeds the full operator norm");

    if (w.is_power_law()) {
        const double gamma = *w.gamma();
        out.h_N = std::pow(2.0 * dmeas / (gamma * N), 1.0 / gamma);
    } else {
        auto tail_map = [&](double h) { return 2.0 * dmeas * tail_integral(w, h); };
        double lo = 1.0, hi = 1.0;
        int guard = 0;
        while (tail_map(lo) <= N) {
            lo *= 0.5;
            if (++guard > 2000) throw NoConvergence("tail map failed to bracket from below");
        }
        guard = 0;
        while (tail_map(hi) > N) {
            hi *= 2.0;
            if (++guard > 2000) throw NoConvergence("tail map failed to bracket from above");
        }
        for (int it = 0; it < 300; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double v = tail_map(mid);
            if (std::abs(v - N) <= 1e-13 * N) {
                lo = hi = mid;
                break;
            }
            (v > N ? lo : hi) = mid;
            if (hi - lo <= 1e-14 * lo) break;
        }
        out.h_N = 0.5 * (lo + hi);
    }
    out.E_N = std::pow(dmeas, 1.0 / p_dual) * g_norm(w, out.h_N, p_dual);
    return out;
}

ModulusReport modulus_and_recovery(const OperatorSpec& spec) {
    const AdditiveConstants ac = additive_constants(spec);
    const double dmeas = static_cast<double>(ac.dim) * ac.measure;
    const double mass = profile_mass(spec.weight(), ac.h, ac.p_dual);

    ModulusReport out;
    const double denom =
        std::isinf(ac.p) ? 1.0
                         : std::pow(dmeas * std::pow(ac.g_norm_value, ac.p_dual), 1.0 / ac.p);
    out.delta_h = 0.5 * mass / denom;
    out.omega_additive = ac.A + ac.B * out.delta_h;

    if (spec.weight().is_power_law()) {
        const MultiplicativeConstants mc = multiplicative_constants(
            spec.polytope(), spec.cone(), *spec.weight().gamma(), spec.p());
        out.M = mc.M;
        out.alpha = mc.alpha;
        const double M = mc.M, alpha = mc.alpha;
        out.omega_multiplicative = [M, alpha](double delta) {
            return M * std::pow(delta, 1.0 - alpha);
        };
        out.recovery_upper = out.omega_multiplicative;
        return out;
    }

    /* General weights: the truncation method with the best h certifies
       min_h A(h) + B(h) delta as an upper bound on the recovery error. */
    const Weight w = spec.weight();
    const double pd = ac.p_dual;
    const double h0 = ac.h;
    out.recovery_upper = [w, pd, dmeas, h0](double delta) {
        auto cost = [&](double lh) {
            const double hh = std::exp(lh);
            double a;
            try {
                a = std::pow(dmeas, 1.0 / pd) * g_norm(w, hh, pd);
            } catch (const DivergentNorm&) {
                return kInf;
            }
            return a + 2.0 * dmeas * tail_integral(w, hh) * delta;
        };
        double lo = std::log(h0) - 12.0, hi = std::log(h0) + 12.0;
        double best = kInf;
        for (int pass = 0; pass < 3; ++pass) {
            const int n = 13;
            int arg = 0;
            for (int i = 0; i < n; ++i) {
                const double lh = lo + (hi - lo) * i / (n - 1.0);
                const double c = cost(lh);
                if (c < best) {
                    best = c;
                    arg = i;
                }
            }
            const double step = (hi - lo) / (n - 1.0);
            const double mid = lo + step * arg;
            lo = mid - step;
            hi = mid + step;
        }
        return best;
    };
    return out;
}

SharpnessReport verify_sharpness(const OperatorSpec& spec, SharpnessKind kind,
                                 double rel_tol) {
    const Vec theta = Vec::Zero(spec.dim());
    SharpnessReport out;
    switch (kind) {
        case SharpnessKind::Ostrowski: {
            const ScalarField fe = extremal_fe(spec);
            out.lhs = std::abs(apply_singular(spec, fe, theta, rel_tol).value);
            out.rhs = additive_constants(spec).A * gradient_norm(spec);
            break;
        }
        case SharpnessKind::Additive: {
            const ScalarField psi = extremal_psi(spec);
            const AdditiveConstants ac = additive_constants(spec);
            out.lhs = apply_full(spec, psi, theta, rel_tol).value;
            out.rhs = ac.A * gradient_norm(spec) + ac.B * *psi.sup_norm;
            break;
        }
        case SharpnessKind::Multiplicative: {
            if (!spec.weight().is_power_law())
                throw HypothesisViolated(
                    "multiplicative sharpness requires a power-law weight");
            const ScalarField psi = extremal_psi(spec);
            const MultiplicativeConstants mc = multiplicative_constants(
                spec.polytope(), spec.cone(), *spec.weight().gamma(), spec.p());
            out.lhs = apply_full(spec, psi, theta, rel_tol).value;
            out.rhs = mc.M * std::pow(*psi.sup_norm, 1.0 - mc.alpha) *
                      std::pow(gradient_norm(spec), mc.alpha);
            break;
        }
    }
    out.ratio = out.lhs / out.rhs;
    return out;
}

}  // namespace hsa
