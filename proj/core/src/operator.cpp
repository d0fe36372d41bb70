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
#include "hsa/operator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

#include "hsa/errors.hpp"

namespace hsa {

OperatorSpec::OperatorSpec(Polytope P, Cone C, Weight w, double h, double p)
    : P_(std::move(P)), C_(std::move(C)), w_(std::move(w)), h_(h), p_(p) {
    if (P_.dim() != C_.dim()) throw DimensionMismatch("polytope and cone dimensions differ");
    if (w_.dim() != P_.dim())
        throw DimensionMismatch("weight dimension differs from the polytope dimension");
    if (std::isnan(h_) || !(h_ > 0.0) || std::isinf(h_))
        throw InvalidInterval("truncation radius must be positive and finite");
    const double d = static_cast<double>(P_.dim());
    if (std::isnan(p_) || !(p_ > d))
        throw HypothesisViolated("integrability exponent must exceed the dimension");
    p_dual_ = conjugate_exponent(p_);
    const ClassReport rep = class_check(w_, h_, p_dual_);
    if (!rep.in_W)
        throw DivergentNorm("weight lies outside the admissible class for this exponent");
    fan_ = fan_decompose(P_, C_);
}

namespace {

/* Precomputed antiderivative r -> int_0^r g^{p'-1}(u) du on [0, h]: a dyadic
   ladder of Chebyshev antiderivative panels, so an evaluation is one O(1)
   panel lookup plus a Clenshaw sum -- no quadrature on the hot path. */
constexpr int kProfileCheb = 16;      // Chebyshev-Lobatto degree per panel
constexpr int kProfileTopLevels = 48; // dyadic grading toward u = h

/* One precomputed Chebyshev antiderivative on [a, b].  partial(r) integrates
   the degree-16 interpolant of the profile integrand from a to r; bases are
   chained from the increments, so the assembled cumulative map is continuous
   across panel boundaries to the last bit. */
struct ChebPanel {
    double a = 0.0, b = 0.0;
    double base = 0.0;       // cumulative integral over (0, a)
    double increment = 0.0;  // integral of the interpolant over [a, b]
    double at_lo = 0.0;      // antiderivative evaluated at x = -1
    std::array<double, kProfileCheb + 2> coef{};

    template <class F>
    void build(const F& f) {
        constexpr int N = kProfileCheb;
        const double c = 0.5 * (a + b), s = 0.5 * (b - a);
        std::array<double, N + 1> fv{};
        for (int j = 0; j <= N; ++j)
            fv[j] = f(c + s * std::cos(std::numbers::pi * j / N));
        std::array<double, N + 1> A{};
        for (int k = 0; k <= N; ++k) {
            double acc = 0.5 * (fv[0] + ((k % 2) ? -fv[N] : fv[N]));
            for (int j = 1; j < N; ++j)
                acc += fv[j] * std::cos(std::numbers::pi * j * k / N);
            A[k] = 2.0 / N * acc;
        }
        A[0] *= 0.5;
        A[N] *= 0.5;
        auto Aat = [&](int k) { return (k >= 0 && k <= N) ? A[k] : 0.0; };
        coef.fill(0.0);
        // term-by-term: int T_0 = T_1, int T_k = (T_{k+1}/(k+1) - T_{k-1}/(k-1))/2
        coef[1] = s * (2.0 * Aat(0) - Aat(2)) / 2.0;
        for (int k = 2; k <= N + 1; ++k)
            coef[k] = s * (Aat(k - 1) - Aat(k + 1)) / (2.0 * k);
        at_lo = clenshaw(-1.0);
        increment = clenshaw(1.0) - at_lo;
    }

    double clenshaw(double x) const {
        double b1 = 0.0, b2 = 0.0;
        for (int k = kProfileCheb + 1; k >= 1; --k) {
            const double t = coef[k] + 2.0 * x * b1 - b2;
            b2 = b1;
            b1 = t;
        }
        return x * b1 - b2;  // coef[0] is zero by construction
    }

    double partial(double r) const {
        const double x = (2.0 * r - (a + b)) / (b - a);
        return clenshaw(x) - at_lo;
    }
};

class CumulativeProfile {
  public:
    CumulativeProfile(GFunction g, double p_dual)
        : g_(std::move(g)), pd_(p_dual), h_(g_.horizon()) {
        if (pd_ == 1.0) {
            total_ = h_;
            return;
        }
        auto f = [this](double u) { return integrand(u); };

        /* Dyadic panel ladder: octaves toward the singular endpoint u = 0,
           then a reflected ladder toward u = h where the integrand vanishes
           like a fractional power.  Depth toward zero retreats until the
           integrand stays representable at the deepest sample. */
        bottom_octaves_ = 200;
        while (bottom_octaves_ > 40 &&
               !std::isfinite(f(std::ldexp(h_, -(bottom_octaves_ + 56)))))
            bottom_octaves_ -= 8;
        const int L = bottom_octaves_, M = kProfileTopLevels;
        bottom_ = std::ldexp(h_, -L);
        sliver_lo_ = h_ - std::ldexp(h_, -(M + 1));

        IntegrateOptions o;
        o.rel_tol = 1e-12;
        o.singular_lo = true;
        double run = integrate_1d(f, 0.0, bottom_, o).value;

        panels_.resize(static_cast<std::size_t>(L - 1 + M));
        std::size_t idx = 0;
        for (int k = L - 1; k >= 1; --k, ++idx) {
            ChebPanel& p = panels_[idx];
            p.a = std::ldexp(h_, -(k + 1));
            p.b = std::ldexp(h_, -k);
            p.base = run;
            p.build(f);
            run += p.increment;
        }
        for (int j = 1; j <= M; ++j, ++idx) {
            ChebPanel& p = panels_[idx];
            p.a = h_ - std::ldexp(h_, -j);
            p.b = h_ - std::ldexp(h_, -(j + 1));
            p.base = run;
            p.build(f);
            run += p.increment;
        }

        /* Closing sliver: the integrand behaves like C (h-u)^(pd-1) there, so
           a local one-point power model integrates the remainder. */
        const double delta = std::ldexp(h_, -(M + 1));
        sliver_coef_ = f(h_ - 0.5 * delta) / std::pow(0.5 * delta, pd_ - 1.0);
        total_ = run + sliver_coef_ * std::pow(delta, pd_) / pd_;
    }

    double total() const { return total_; }
    double horizon() const { return h_; }

    double operator()(double r) const {
        if (!(r > 0.0)) return 0.0;
        if (r >= h_) return total_;
        if (pd_ == 1.0) return r;
        if (r >= sliver_lo_)
            return total_ - sliver_coef_ * std::pow(h_ - r, pd_) / pd_;
        if (r < bottom_) {
            // below the ladder the integrand is still singular
            IntegrateOptions o;
            o.rel_tol = 1e-10;
            o.singular_lo = true;
            return integrate_1d([this](double u) { return integrand(u); }, 0.0, r, o).value;
        }
        const int L = bottom_octaves_;
        std::size_t idx;
        if (r < std::ldexp(h_, -1)) {
            int k = -std::ilogb(r / h_) - 1;
            k = std::clamp(k, 1, L - 1);
            idx = static_cast<std::size_t>(L - 1 - k);
        } else {
            int j = -std::ilogb((h_ - r) / h_) - 1;
            j = std::clamp(j, 1, kProfileTopLevels);
            idx = static_cast<std::size_t>(L - 1 + j - 1);
        }
        const ChebPanel& p = panels_[idx];
        return p.base + p.partial(r);
    }

    double slope(double r) const {
        return pd_ == 1.0 ? 1.0 : std::pow(g_(r), pd_ - 1.0);
    }

  private:
    double integrand(double u) const { return slope(u); }

    GFunction g_;
    double pd_ = 1.0;
    double h_ = 0.0;
    double total_ = 0.0;
    double bottom_ = 0.0;
    double sliver_lo_ = 0.0;
    double sliver_coef_ = 0.0;
    int bottom_octaves_ = 0;
    std::vector<ChebPanel> panels_;
};

void check_point(const OperatorSpec& spec, const ScalarField& f, const Vec& x) {
    if (x.size() != spec.dim())
        throw DimensionMismatch("evaluation point dimension differs from the operator");
    if (!spec.cone().contains(x))
        throw OutOfDomain("evaluation point must lie in the operator's cone");
    if (!f.evaluate) throw MissingBound("scalar field must provide an evaluator");
}

}  // namespace

ScalarField extremal_fe(const OperatorSpec& spec) {
    auto cum = std::make_shared<CumulativeProfile>(GFunction(spec.weight(), spec.horizon()),
                                                   spec.p_dual());
    const Polytope P = spec.polytope();
    const double h = spec.horizon();
    const double plateau = cum->total();

    ScalarField f;
    f.evaluate = [cum, P](const Vec& y) { return (*cum)(P.gauge(y)); };
    f.difference = [cum, P](const Vec& a, const Vec& b) {
        return (*cum)(P.gauge(a)) - (*cum)(P.gauge(b));
    };
    f.gradient = [cum, P, h](const Vec& y) {
        Vec out = Vec::Zero(P.dim());
        const double r = P.gauge(y);
        if (r <= 0.0 || r >= h) return out;
        const Facet& fc = P.facets()[static_cast<std::size_t>(P.supporting_facet(y))];
        out = (cum->slope(r) / fc.offset) * fc.normal;
        return out;
    };
    f.sup_norm = plateau;
    f.decay = ConstantOutside{h, plateau};
    return f;
}

ScalarField extremal_psi(const OperatorSpec& spec) {
    ScalarField fe = extremal_fe(spec);
    const double S = *fe.sup_norm;

    ScalarField f;
    f.evaluate = [ev = fe.evaluate, S](const Vec& y) { return 0.5 * S - ev(y); };
    /* psi(a) - psi(b) = fe(b) - fe(a): the plateau constant cancels exactly,
       so near-coincident differences keep full relative precision instead of
       drowning in the subtraction from S/2. */
    f.difference = [df = fe.difference](const Vec& a, const Vec& b) { return df(b, a); };
    f.gradient = [gr = fe.gradient](const Vec& y) { return Vec(-gr(y)); };
    f.sup_norm = 0.5 * S;
    f.decay = ConstantOutside{spec.horizon(), -0.5 * S};
    return f;
}

QuadratureResult apply_truncated(const OperatorSpec& spec, const ScalarField& f, const Vec& x,
                                 double rel_tol) {
    check_point(spec, f, x);
    const Polytope& P = spec.polytope();
    const Weight& w = spec.weight();
    const double h = spec.horizon();
    const double d = static_cast<double>(spec.dim());
    const double dmeas = d * spec.intersection_measure();
    const double fx = f.evaluate(x);
    const double gmx = P.gauge(-x);  // shift slack: |x+t|_K >= |t|_K - gmx

    IntegrateOptions copt;
    copt.rel_tol = rel_tol;
    auto F = [&](const Vec& t) {
        const Vec y = x + t;
        const double df = f.difference ? f.difference(x, y) : fx - f.evaluate(y);
        return w(P.gauge(t)) * df;
    };

    QuadratureResult res;
    res.converged = true;

    if (const auto* co = std::get_if<ConstantOutside>(&f.decay)) {
        /* Beyond rho* = max(h, gmx + R0) the shifted argument has gauge at
           least R0, so the integrand is exactly (f(x) - value) w(|t|_K)
           and the tail is a closed radial integral. */
        const double rho_star = std::max(h, gmx + co->radius);
        if (rho_star > h * (1.0 + 1e-14)) {
            for (const FanCell& cell : spec.fan().cells) {
                const QuadratureResult q = cell_quadrature(cell, F, h, rho_star, copt);
                res.value += q.value;
                res.error_estimate += q.error_estimate;
                res.evaluations += q.evaluations;
                res.converged = res.converged && q.converged;
            }
        }
        const double dc = fx - co->value;
        if (dc != 0.0) {
            const double tail = dc * dmeas * tail_integral(w, rho_star);
            res.value += tail;
            res.error_estimate += std::abs(tail) * 1e-14;
        }
        return res;
    }

    const auto* pd = std::get_if<PowerDecay>(&f.decay);
    if (!f.sup_norm && !pd)
        throw MissingBound("truncated application needs a sup norm or a decay descriptor");

    auto sup_beyond = [&](double R) {
        if (f.sup_norm) return *f.sup_norm;
        return pd->amplitude * std::pow(std::max(R - gmx, pd->radius), pd->exponent);
    };

    double R = std::max({2.0 * h, 2.0 * (gmx + h), pd ? gmx + pd->radius : 0.0});
    const double ref0 = (std::abs(fx) + sup_beyond(R)) * dmeas * tail_integral(w, h);
    double prev = h;
    for (int iter = 0; iter < 200; ++iter) {
        for (const FanCell& cell : spec.fan().cells) {
            const QuadratureResult q = cell_quadrature(cell, F, prev, R, copt);
            res.value += q.value;
            res.error_estimate += q.error_estimate;
            res.evaluations += q.evaluations;
            res.converged = res.converged && q.converged;
        }
        const double bound = (std::abs(fx) + sup_beyond(R)) * dmeas * tail_integral(w, R);
        const double target = rel_tol * std::max(std::abs(res.value), 1e-3 * ref0);
        if (bound <= target) {
            res.error_estimate += bound;
            return res;
        }
        prev = R;
        R *= 2.0;
    }
    throw NoConvergence("outer truncation radius grew without meeting the tail target");
}

QuadratureResult apply_singular(const OperatorSpec& spec, const ScalarField& f, const Vec& x,
                                double rel_tol) {
    check_point(spec, f, x);
    if (!f.gradient && !f.lipschitz_bound)
        throw MissingBound(
            "singular application needs gradient metadata or a Lipschitz bound");
    const Polytope& P = spec.polytope();
    const Weight& w = spec.weight();
    const double fx = f.evaluate(x);

    IntegrateOptions copt;
    copt.rel_tol = rel_tol;
    auto F = [&](const Vec& t) {
        const Vec y = x + t;
        const double df = f.difference ? f.difference(x, y) : fx - f.evaluate(y);
        return w(P.gauge(t)) * df;
    };

    QuadratureResult res;
    res.converged = true;
    for (const FanCell& cell : spec.fan().cells) {
        const QuadratureResult q = cell_quadrature(cell, F, 0.0, spec.horizon(), copt);
        res.value += q.value;
        res.error_estimate += q.error_estimate;
        res.evaluations += q.evaluations;
        res.converged = res.converged && q.converged;
    }
    return res;
}

QuadratureResult apply_full(const OperatorSpec& spec, const ScalarField& f, const Vec& x,
                            double rel_tol) {
    const QuadratureResult s = apply_singular(spec, f, x, rel_tol);
    const QuadratureResult t = apply_truncated(spec, f, x, rel_tol);
    QuadratureResult res;
    res.value = s.value + t.value;
    res.error_estimate = s.error_estimate + t.error_estimate;
    res.evaluations = s.evaluations + t.evaluations;
    res.converged = s.converged && t.converged;
    return res;
}

double truncated_norm(const OperatorSpec& spec) {
    return 2.0 * static_cast<double>(spec.dim()) * spec.intersection_measure() *
           tail_integral(spec.weight(), spec.horizon());
}

}  // namespace hsa
