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
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "hsa/errors.hpp"
#include "hsa/quadrature.hpp"
#include "hsa/weights.hpp"

using namespace hsa;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

/* Log-spaced samples of t^{-2.5} on [0.1, 10]: log-log linear data, so the
   monotone cubic reproduces the power law essentially exactly. */
Weight power_copy(std::optional<double> tail = -2.5) {
    std::vector<double> grid, vals;
    for (int i = 0; i < 20; ++i) {
        const double t = 0.1 * std::pow(100.0, i / 19.0);
        grid.push_back(t);
        vals.push_back(std::pow(t, -2.5));
    }
    return Weight::tabulated(2, grid, vals, tail);
}
}  // namespace

TEST_CASE("weight construction validates its domain") {
    CHECK_THROWS_AS(Weight::power_law(2, 0.0), HypothesisViolated);
    CHECK_THROWS_AS(Weight::power_law(2, 1.0), HypothesisViolated);
    CHECK_THROWS_AS(Weight::power_law(2, -0.3), HypothesisViolated);
    CHECK_THROWS_AS(Weight::power_law(1, 0.5), InvalidInterval);
    CHECK_NOTHROW(Weight::power_law(3, 0.999));

    CHECK_THROWS_AS(Weight::tabulated(2, {1.0, 0.5}, {1.0, 1.0}, {}), InvalidInterval);
    CHECK_THROWS_AS(Weight::tabulated(2, {1.0}, {1.0}, {}), InvalidInterval);
    CHECK_THROWS_AS(Weight::tabulated(2, {1.0, 2.0}, {1.0, 0.0}, {}), InvalidInterval);
    CHECK_THROWS_AS(Weight::tabulated(2, {-1.0, 2.0}, {1.0, 1.0}, {}), InvalidInterval);
    CHECK_NOTHROW(Weight::tabulated(2, {0.5, 1.0, 2.0}, {4.0, 1.0, 0.25}, -2.0));
}

TEST_CASE("power-law evaluation and weighted norms match closed forms") {
    auto w = Weight::power_law(2, 0.5);
    CHECK(w.is_power_law());
    CHECK(*w.gamma() == 0.5);
    CHECK(*w.tail_exponent() == -2.5);
    CHECK_FALSE(w.compact_support());
    CHECK(w(2.0) == doctest::Approx(std::pow(2.0, -2.5)).epsilon(1e-15));
    CHECK_THROWS_AS(w(0.0), OutOfDomain);
    CHECK_THROWS_AS(w(-1.0), OutOfDomain);

    CHECK(weight_norm(w, 1.0, kInf, 1.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(weight_norm(w, 1.0, 2.0, kInf) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(weight_norm(w, 0.0, 1.0, 1.0), DivergentNorm);
    CHECK_THROWS_AS(weight_norm(w, 0.0, kInf, kInf), DivergentNorm);
    CHECK_THROWS_AS(weight_norm(w, 1.0, 1.0, 1.0), InvalidInterval);
    CHECK_THROWS_AS(weight_norm(w, 1.0, 2.0, 0.5), InvalidInterval);
}

TEST_CASE("tabulated weights reproduce a sampled power law everywhere") {
    auto w = power_copy();
    auto exact = [](double t) { return std::pow(t, -2.5); };
    // interior, below-grid extension, knots, and the declared tail
    for (double t : {0.03, 0.1, 0.2, 0.37, 1.0, 2.5, 9.9, 10.0, 50.0}) {
        CHECK(w(t) == doctest::Approx(exact(t)).epsilon(1e-10));
    }
    CHECK(w.left_slope() == doctest::Approx(-2.5).epsilon(1e-12));

    auto compact = power_copy(std::nullopt);
    CHECK(compact.compact_support());
    CHECK(compact(10.0) == doctest::Approx(std::pow(10.0, -2.5)).epsilon(1e-12));
    CHECK(compact(10.5) == 0.0);

    // numeric norm paths agree with the power-law closed forms
    auto ref = Weight::power_law(2, 0.5);
    CHECK(weight_norm(w, 1.0, kInf, 1.0) ==
          doctest::Approx(weight_norm(ref, 1.0, kInf, 1.0)).epsilon(1e-8));
    CHECK(weight_norm(w, 1.0, 2.0, kInf) ==
          doctest::Approx(weight_norm(ref, 1.0, 2.0, kInf)).epsilon(1e-6));
    CHECK_THROWS_AS(weight_norm(w, 0.0, 1.0, 1.0), DivergentNorm);
}

TEST_CASE("the g function matches closed forms and its defining integral") {
    auto w = Weight::power_law(2, 0.5);
    CHECK(g_eval(w, 1.0, 0.25) == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(g_eval(w, 1.0, 1.0) == 0.0);
    CHECK(g_eval(w, 4.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(g_eval(w, 1.0, 0.0), OutOfDomain);
    CHECK_THROWS_AS(g_eval(w, 1.0, 1.5), OutOfDomain);
    CHECK_THROWS_AS(g_eval(w, 0.0, 0.5), InvalidInterval);

    // closed form vs the defining integral on a 50-point log grid
    for (int i = 0; i < 50; ++i) {
        const double u = std::pow(10.0, -6.0 * (1.0 - i / 50.0));
        IntegrateOptions o;
        o.rel_tol = 1e-12;
        o.singular_lo = true;
        const double direct =
            integrate_1d([&w](double t) { return w(t) * t; }, u, 1.0, o).value / u;
        CHECK(g_eval(w, 1.0, u) == doctest::Approx(direct).epsilon(1e-9));
    }

    // tabulated copy goes through quadrature instead of the closed form
    auto tab = power_copy();
    CHECK(g_eval(tab, 1.0, 0.25) == doctest::Approx(8.0).epsilon(1e-8));

    GFunction g(w, 1.0);
    CHECK(g(0.25) == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(g.horizon() == 1.0);
}

TEST_CASE("g norms follow closed forms, scaling laws, and divergence rules") {
    auto w = Weight::power_law(2, 0.5);
    CHECK(g_norm(w, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(g_norm(w, 4.0, 1.0) == doctest::Approx(4.0).epsilon(1e-13));

    auto nearly = Weight::power_law(2, 0.999);
    CHECK(g_norm(nearly, 1.0, 1.0) == doctest::Approx(1000.0).epsilon(1e-9));

    // power scaling of the norm in the horizon, exponent (1-d-gamma)p' + d
    auto w3 = Weight::power_law(2, 0.3);
    for (double pd : {1.0, 4.0 / 3.0}) {
        const double base = std::pow(g_norm(w3, 1.0, pd), pd);
        for (double h : {0.25, 1.0, 4.0}) {
            const double lhs = std::pow(g_norm(w3, h, pd), pd);
            const double rhs = std::pow(h, (1.0 - 2.0 - 0.3) * pd + 2.0) * base;
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }

    // same scaling for the plain integral of g^{p'-1}, exponent (1-d-gamma)(p'-1) + 1
    {
        const double pd = 4.0 / 3.0;
        auto Iofh = [&](double h) {
            IntegrateOptions o;
            o.rel_tol = 1e-12;
            o.singular_lo = true;
            o.singular_hi = true;  // g vanishes at h, so g^{1/3} has an infinite slope there
            return integrate_1d(
                       [&](double u) { return std::pow(g_eval(w3, h, u), pd - 1.0); }, 0.0, h, o)
                .value;
        };
        const double base = Iofh(1.0);
        for (double h : {0.25, 1.0, 4.0}) {
            const double rhs = std::pow(h, (1.0 - 2.0 - 0.3) * (pd - 1.0) + 1.0) * base;
            CHECK(Iofh(h) == doctest::Approx(rhs).epsilon(1e-9));
        }
    }

    // p' = 2 is never admissible in the plane: (d-1+gamma) * 2 >= d for all gamma > 0
    CHECK_THROWS_AS(g_norm(w, 1.0, 2.0), DivergentNorm);
    CHECK_THROWS_AS(g_norm(w3, 1.0, 2.0), DivergentNorm);
    CHECK_THROWS_AS(g_norm(w, 1.0, kInf), InvalidInterval);
    CHECK_THROWS_AS(g_norm(w, 1.0, 0.5), InvalidInterval);

    // the tabulated graded-mesh path agrees with the closed-form path
    auto tab = power_copy();
    CHECK(g_norm(tab, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(g_norm(tab, 1.0, 1.2) == doctest::Approx(g_norm(w, 1.0, 1.2)).epsilon(1e-5));
    // gamma = 0.5 at p' = 4/3 sits exactly on the divergence boundary
    CHECK_THROWS_AS(g_norm(w, 1.0, 4.0 / 3.0), DivergentNorm);
    CHECK_THROWS_AS(g_norm(tab, 1.0, 2.0), DivergentNorm);
}

TEST_CASE("tail integrals have closed forms and detect fat tails") {
    auto w = Weight::power_law(2, 0.5);
    CHECK(tail_integral(w, 1.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(tail_integral(w, 4.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(tail_integral(w, 1.0) == doctest::Approx(weight_norm(w, 1.0, kInf, 1.0)).epsilon(1e-13));

    auto tab = power_copy();
    CHECK(tail_integral(tab, 1.0) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(tail_integral(tab, 4.0) == doctest::Approx(1.0).epsilon(1e-6));

    std::vector<double> grid = {0.25, 0.5, 0.9};
    std::vector<double> vals = {2.0, 1.0, 0.5};
    auto compact = Weight::tabulated(2, grid, vals, std::nullopt);
    CHECK(tail_integral(compact, 1.0) == 0.0);

    auto fat = Weight::tabulated(2, grid, vals, -2.0);  // borderline: exponent equals -d
    CHECK_THROWS_AS(tail_integral(fat, 1.0), DivergentNorm);
    auto fatter = Weight::tabulated(2, grid, vals, -1.5);
    CHECK_THROWS_AS(tail_integral(fatter, 1.0), DivergentNorm);
}

TEST_CASE("class membership reports certify the admissible range") {
    auto fixture = class_check(Weight::power_law(2, 0.5), 1.0, 1.0);
    CHECK(fixture.in_W);
    CHECK(fixture.in_L1_tail);
    CHECK(*fixture.g_norm_value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(*fixture.tail_value == doctest::Approx(2.0).epsilon(1e-12));

    // p = 4 (dual 4/3): admissible up to gamma < 1 - d/p = 1/2
    CHECK(class_check(Weight::power_law(2, 0.4), 1.0, 4.0 / 3.0).in_W);
    CHECK_FALSE(class_check(Weight::power_law(2, 0.6), 1.0, 4.0 / 3.0).in_W);
    CHECK_FALSE(class_check(Weight::power_law(2, 0.5), 1.0, 4.0 / 3.0).in_W);  // boundary
    CHECK(class_check(Weight::power_law(2, 0.5), 1.0, 4.0 / 3.0 - 1e-9).in_W);
    CHECK(class_check(Weight::power_law(2, 0.6), 1.0, 4.0 / 3.0).in_L1_tail);

    std::vector<double> grid = {0.25, 0.5, 0.9};
    std::vector<double> vals = {2.0, 1.0, 0.5};
    auto compact = class_check(Weight::tabulated(2, grid, vals, std::nullopt), 1.0, 1.0);
    CHECK(compact.in_L1_tail);
    CHECK(*compact.tail_value == 0.0);
    auto fat = class_check(Weight::tabulated(2, grid, vals, -1.5), 1.0, 1.0);
    CHECK_FALSE(fat.in_L1_tail);
    CHECK_FALSE(fat.tail_value.has_value());
}

TEST_CASE("conjugate exponents pair up correctly") {
    CHECK(conjugate_exponent(kInf) == 1.0);
    CHECK(std::isinf(conjugate_exponent(1.0)));
    CHECK(conjugate_exponent(2.0) == doctest::Approx(2.0));
    CHECK(conjugate_exponent(4.0) == doctest::Approx(4.0 / 3.0));
    CHECK_THROWS_AS(conjugate_exponent(0.5), InvalidInterval);
    CHECK_THROWS_AS(conjugate_exponent(std::nan("")), InvalidInterval);
}
