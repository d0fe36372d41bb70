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
#include "hsa/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "hsa/errors.hpp"
#include "hsa/quadrature.hpp"

namespace hsa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/* int_a^b c * t^e dt with full divergence handling; b may be infinite. */
double power_piece_integral(double c, double e, double a, double b) {
    if (c == 0.0 || a == b) return 0.0;
    if (e == -1.0) {
        if (a == 0.0 || std::isinf(b))
            throw DivergentNorm("logarithmic endpoint makes the integral infinite");
        return c * std::log(b / a);
    }
    const double e1 = e + 1.0;
    double hi, lo;
    if (std::isinf(b)) {
        if (e1 >= 0.0) throw DivergentNorm("power integrand is not integrable at infinity");
        hi = 0.0;
    } else {
        hi = std::pow(b, e1);
    }
    if (a == 0.0) {
        if (e1 <= 0.0) throw DivergentNorm("power integrand is not integrable at zero");
        lo = 0.0;
    } else {
        lo = std::pow(a, e1);
    }
    return c * (hi - lo) / e1;
}

/* Fritsch-Carlson slopes: each interval of the resulting cubic Hermite
   interpolant is monotone between its endpoint ordinates. */
std::vector<double> pchip_slopes(const std::vector<double>& xs, const std::vector<double>& ys) {
    const int n = static_cast<int>(xs.size());
    std::vector<double> dx(n - 1), delta(n - 1), m(n);
    for (int i = 0; i + 1 < n; ++i) {
        dx[i] = xs[i + 1] - xs[i];
        delta[i] = (ys[i + 1] - ys[i]) / dx[i];
    }
    if (n == 2) {
        m[0] = m[1] = delta[0];
        return m;
    }
    for (int i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            m[i] = 0.0;
        } else {
            const double w1 = 2.0 * dx[i] + dx[i - 1];
            const double w2 = dx[i] + 2.0 * dx[i - 1];
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0)
            s = 0.0;
        else if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0))
            s = 3.0 * d0;
        return s;
    };
    m[0] = end_slope(dx[0], dx[1], delta[0], delta[1]);
    m[n - 1] = end_slope(dx[n - 2], dx[n - 3], delta[n - 2], delta[n - 3]);
    return m;
}

double hermite(double x, double x0, double x1, double y0, double y1, double m0, double m1) {
    const double hh = x1 - x0;
    const double t = (x - x0) / hh;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * hh * m0 +
           (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * hh * m1;
}

void check_horizon(double h) {
    if (std::isnan(h) || !(h > 0.0) || std::isinf(h))
        throw InvalidInterval("truncation radius must be positive and finite");
}

IntegrateOptions smooth_opts() {
    IntegrateOptions o;
    o.rel_tol = 1e-11;
    return o;
}

}  // namespace

double conjugate_exponent(double p) {
    if (std::isnan(p) || p < 1.0)
        throw InvalidInterval("Lebesgue exponent must be at least 1");
    if (std::isinf(p)) return 1.0;
    if (p == 1.0) return kInf;
    return p / (p - 1.0);
}

Weight Weight::power_law(int dim, double gamma) {
    if (dim < 2) throw InvalidInterval("weight dimension must be at least 2");
    if (std::isnan(gamma) || !(gamma > 0.0) || !(gamma < 1.0))
        throw HypothesisViolated("power-law singularity order must lie in (0, 1)");
    Weight w;
    w.dim_ = dim;
    w.power_ = true;
    w.gamma_ = gamma;
    return w;
}

Weight Weight::tabulated(int dim, std::vector<double> grid, std::vector<double> values,
                         std::optional<double> tail_exponent) {
    if (dim < 2) throw InvalidInterval("weight dimension must be at least 2");
    if (grid.size() < 2 || grid.size() != values.size())
        throw InvalidInterval("tabulated weight needs at least two (abscissa, value) pairs");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
            throw InvalidInterval("tabulated abscissas must be positive and finite");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw InvalidInterval("tabulated abscissas must be strictly increasing");
        if (!(values[i] > 0.0) || !std::isfinite(values[i]))
            throw InvalidInterval(
                "tabulated ordinates must be strictly positive (drop the grid tail for compact support)");
    }
    if (tail_exponent && !std::isfinite(*tail_exponent))
        throw InvalidInterval("tail exponent must be finite");
    Weight w;
    w.dim_ = dim;
    w.power_ = false;
    w.grid_ = std::move(grid);
    w.values_ = std::move(values);
    w.tail_exp_ = tail_exponent;
    const std::size_t n = w.grid_.size();
    w.xs_.resize(n);
    w.ys_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        w.xs_[i] = std::log(w.grid_[i]);
        w.ys_[i] = std::log(w.values_[i]);
    }
    w.slopes_ = pchip_slopes(w.xs_, w.ys_);
    return w;
}

std::optional<double> Weight::gamma() const {
    if (power_) return gamma_;
    return std::nullopt;
}

std::optional<double> Weight::tail_exponent() const {
    if (power_) return -(static_cast<double>(dim_) + gamma_);
    return tail_exp_;
}

bool Weight::compact_support() const { return !power_ && !tail_exp_.has_value(); }

double Weight::left_slope() const {
    if (power_) return -(static_cast<double>(dim_) + gamma_);
    return slopes_.front();
}

double Weight::operator()(double t) const {
    if (std::isnan(t) || !(t > 0.0)) throw OutOfDomain("weights are defined for t > 0");
    if (power_) return std::pow(t, -(static_cast<double>(dim_) + gamma_));
    if (t <= grid_.front()) return values_.front() * std::pow(t / grid_.front(), slopes_.front());
    if (t >= grid_.back()) {
        if (t == grid_.back()) return values_.back();
        if (!tail_exp_) return 0.0;
        return values_.back() * std::pow(t / grid_.back(), *tail_exp_);
    }
    const double x = std::log(t);
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    return std::exp(hermite(x, xs_[i], xs_[i + 1], ys_[i], ys_[i + 1], slopes_[i], slopes_[i + 1]));
}

double weight_norm(const Weight& w, double a, double b, double p) {
    if (std::isnan(a) || std::isnan(b) || a < 0.0 || std::isinf(a) || !(a < b))
        throw InvalidInterval("weight norm needs 0 <= a < b");
    if (std::isnan(p) || p < 1.0)
        throw InvalidInterval("Lebesgue exponent must be at least 1");
    const double d = static_cast<double>(w.dim());

    if (std::isinf(p)) {
        // essential sup of t^{d-1} w(t) over (a, b)
        if (w.is_power_law()) {
            // t^{-(1+gamma)} is strictly decreasing
            if (a == 0.0) throw DivergentNorm("weighted kernel is unbounded toward zero");
            return std::pow(a, -(1.0 + *w.gamma()));
        }
        const auto& grid = w.grid();
        double best = 0.0;
        auto consider = [&](double t) {
            if (t > a && t < b) best = std::max(best, std::pow(t, d - 1.0) * w(t));
        };
        // left extension t^{d-1+s} piece: monotone power
        const double ls = d - 1.0 + w.left_slope();
        if (a < grid.front()) {
            if (ls < 0.0 && a == 0.0)
                throw DivergentNorm("weighted kernel is unbounded toward zero");
            consider(std::min(b, grid.front()));
            if (a > 0.0) best = std::max(best, std::pow(a, d - 1.0) * w(a));
        }
        // tail piece
        if (b > grid.back() && !w.compact_support()) {
            const double ts = d - 1.0 + *w.tail_exponent();
            if (ts > 0.0 && std::isinf(b))
                throw DivergentNorm("weighted kernel is unbounded toward infinity");
            consider(std::max(a, grid.back()));
            if (std::isfinite(b)) best = std::max(best, std::pow(b, d - 1.0) * w(b));
        }
        // interior: knots plus a modest sample per interval (the interpolant is
        // monotone in w but the t^{d-1} factor can move the maximum inside)
        for (std::size_t i = 0; i < grid.size(); ++i) consider(grid[i]);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            for (int j = 1; j < 32; ++j) {
                const double t =
                    grid[i] * std::pow(grid[i + 1] / grid[i], static_cast<double>(j) / 32.0);
                consider(t);
            }
        }
        if (std::isfinite(b) && b > a) best = std::max(best, std::pow(b, d - 1.0) * w(b));
        if (a > 0.0) best = std::max(best, std::pow(a, d - 1.0) * w(a));
        return best;
    }

    if (w.is_power_law()) {
        const double e = (d - 1.0) - (d + *w.gamma()) * p;
        return std::pow(power_piece_integral(1.0, e, a, b), 1.0 / p);
    }

    const auto& grid = w.grid();
    const double t0 = grid.front(), tN = grid.back();
    double total = 0.0;
    if (a < t0) {
        const double s = w.left_slope();
        const double c = std::pow(w.values().front(), p) * std::pow(t0, -s * p);
        total += power_piece_integral(c, s * p + d - 1.0, a, std::min(b, t0));
    }
    const double lo = std::max(a, t0);
    const double hi = std::min(std::isinf(b) ? tN : b, tN);
    if (lo < hi) {
        total += integrate_1d(
                     [&](double t) { return std::pow(w(t), p) * std::pow(t, d - 1.0); }, lo, hi,
                     smooth_opts())
                     .value;
    }
    if (b > tN && !w.compact_support()) {
        const double te = *w.tail_exponent();
        const double c = std::pow(w.values().back(), p) * std::pow(tN, -te * p);
        total += power_piece_integral(c, te * p + d - 1.0, std::max(a, tN), b);
    }
    return std::pow(total, 1.0 / p);
}

double g_eval(const Weight& w, double h, double u) {
    check_horizon(h);
    if (std::isnan(u) || !(u > 0.0) || u > h)
        throw OutOfDomain("the g-function is defined on (0, h]");
    const double d = static_cast<double>(w.dim());
    if (u == h) return 0.0;
    if (w.is_power_law()) {
        const double gam = *w.gamma();
        return (std::pow(u, -gam) - std::pow(h, -gam)) / (gam * std::pow(u, d - 1.0));
    }
    IntegrateOptions o = smooth_opts();
    o.singular_lo = true;
    const double core =
        integrate_1d([&](double t) { return w(t) * std::pow(t, d - 1.0); }, u, h, o).value;
    return core * std::pow(u, -(d - 1.0));
}

namespace {

/* Dual norm for tabulated weights on dyadic shells (h 2^{-k-1}, h 2^{-k}).
   Shell masses of a power-type singularity form a geometric sequence; a
   non-contracting sequence certifies divergence, a contracting one is
   summed and its remainder extrapolated geometrically. */
double g_norm_graded(const Weight& w, double h, double pp) {
    const double d = static_cast<double>(w.dim());
    auto G = [&](double u) { return std::pow(g_eval(w, h, u), pp) * std::pow(u, d - 1.0); };
    IntegrateOptions o;
    o.rel_tol = 1e-9;
    double total = 0.0, prev = -1.0, ratio = 0.0;
    double hi = h;
    for (int k = 0; k < 60; ++k) {
        const double lo = 0.5 * hi;
        const double ik = integrate_1d(G, lo, hi, o).value;
        total += ik;
        if (prev > 0.0 && ik > 0.0) ratio = ik / prev;
        prev = ik;
        hi = lo;
        if (total > 0.0 && ik < 1e-16 * total) return std::pow(total, 1.0 / pp);
    }
    if (!(ratio < 1.0 - 1e-3))
        throw DivergentNorm("graded-mesh shell masses do not contract toward the origin");
    total += prev * ratio / (1.0 - ratio);
    return std::pow(total, 1.0 / pp);
}

}  // namespace

double g_norm(const Weight& w, double h, double p_dual) {
    check_horizon(h);
    if (std::isnan(p_dual) || p_dual < 1.0 || std::isinf(p_dual))
        throw InvalidInterval("dual exponent must lie in [1, infinity)");
    const double d = static_cast<double>(w.dim());
    if (w.is_power_law()) {
        const double gam = *w.gamma();
        if (p_dual == 1.0) return std::pow(h, 1.0 - gam) / (1.0 - gam);
        const double a = d - (d - 1.0 + gam) * p_dual;
        if (!(a > 0.0)) throw DivergentNorm("dual-exponent norm of the g-function diverges");
        /* Substituting u = h*x and then x = y^{1/a} turns the norm integral
           into h^a * gamma^{-p'} * (1/a) * int_0^1 (1 - y^{gamma/a})^{p'} dy,
           whose integrand is bounded by one with a boundary layer at y = 1 of
           width ~ a/gamma; this stays resolvable arbitrarily close to the
           divergence threshold, where the raw integrand's mass hides at
           scales like exp(-1/a). */
        const double c = gam / a;
        IntegrateOptions o;
        o.rel_tol = 1e-12;
        o.singular_hi = true;
        auto num = integrate_1d(
            [c, p_dual](double y) {
                if (y <= 0.0) return 1.0;
                if (y >= 1.0) return 0.0;
                return std::pow(-std::expm1(c * std::log(y)), p_dual);
            },
            0.0, 1.0, o);
        const double integral = std::pow(h, a) * std::pow(gam, -p_dual) * (num.value / a);
        return std::pow(integral, 1.0 / p_dual);
    }
    if (p_dual == 1.0) {
        /* Fubini collapses int_0^h u^{d-1} g(u) du to int_0^h w(t) t^d dt,
           one weighted pass over w with closed extension pieces. */
        const double t0 = w.grid().front(), tN = w.grid().back();
        double total = 0.0;
        const double lo_end = std::min(h, t0);
        if (lo_end > 0.0) {
            const double s = w.left_slope();
            total += power_piece_integral(w.values().front() * std::pow(t0, -s), s + d, 0.0,
                                          lo_end);
        }
        if (h > t0) {
            const double hi_end = std::min(h, tN);
            if (hi_end > t0) {
                IntegrateOptions o;
                o.rel_tol = 1e-11;
                total += integrate_1d([&](double t) { return w(t) * std::pow(t, d); }, t0,
                                      hi_end, o)
                             .value;
            }
            if (h > tN) {
                if (const auto te = w.tail_exponent())
                    total += power_piece_integral(w.values().back() * std::pow(tN, -*te),
                                                  *te + d, tN, h);
            }
        }
        return total;
    }
    return g_norm_graded(w, h, p_dual);
}

double tail_integral(const Weight& w, double h) {
    check_horizon(h);
    const double d = static_cast<double>(w.dim());
    if (w.is_power_law()) {
        const double gam = *w.gamma();
        return std::pow(h, -gam) / gam;
    }
    const double tN = w.grid().back();
    double total = 0.0;
    if (h < tN) {
        total += integrate_1d([&](double t) { return w(t) * std::pow(t, d - 1.0); }, h, tN,
                              smooth_opts())
                     .value;
    }
    if (!w.compact_support()) {
        const double te = *w.tail_exponent();
        const double c = w.values().back() * std::pow(tN, -te);
        total += power_piece_integral(c, te + d - 1.0, std::max(h, tN), kInf);
    }
    return total;
}

ClassReport class_check(const Weight& w, double h, double p_dual) {
    check_horizon(h);
    if (std::isnan(p_dual) || p_dual < 1.0 || std::isinf(p_dual))
        throw InvalidInterval("dual exponent must lie in [1, infinity)");
    ClassReport rep;
    try {
        rep.tail_value = tail_integral(w, h);
        rep.in_L1_tail = true;
    } catch (const DivergentNorm&) {
        rep.in_L1_tail = false;
    }
    if (w.is_power_law()) {
        const double d = static_cast<double>(w.dim());
        rep.in_W = p_dual < d / (d - 1.0 + *w.gamma());
        if (rep.in_W) rep.g_norm_value = g_norm(w, h, p_dual);
    } else {
        try {
            rep.g_norm_value = g_norm(w, h, p_dual);
            rep.in_W = true;
        } catch (const DivergentNorm&) {
            rep.in_W = false;
        }
    }
    return rep;
}

GFunction::GFunction(Weight w, double h) : w_(std::move(w)), h_(h) { check_horizon(h_); }

}  // namespace hsa
