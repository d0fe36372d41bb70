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
#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "hsa/constants.hpp"
#include "hsa/geometry.hpp"
#include "hsa/operator.hpp"
#include "hsa/quadrature.hpp"
#include "hsa/weights.hpp"

namespace {

const double kInf = std::numeric_limits<double>::infinity();

hsa::Polytope cube(int d) {
    std::vector<hsa::Vec> v;
    for (int mask = 0; mask < (1 << d); ++mask) {
        hsa::Vec p(d);
        for (int c = 0; c < d; ++c) p[c] = (mask >> c) & 1 ? 1.0 : -1.0;
        v.push_back(p);
    }
    return hsa::build_polytope(v);
}

std::vector<hsa::Vec> sample_points(int d, int n) {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<hsa::Vec> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        hsa::Vec x(d);
        for (int c = 0; c < d; ++c) x[c] = unif(rng);
        pts.push_back(x);
    }
    return pts;
}

/* Gauge evaluation: the max over facets that sits under every quadrature
   node and Monte Carlo sample. */
void BM_GaugeEval(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const hsa::Polytope P = cube(d);
    const std::vector<hsa::Vec> pts = sample_points(d, 256);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(P.gauge(pts[i]));
        i = (i + 1) & 255;
    }
}
BENCHMARK(BM_GaugeEval)->Arg(2)->Arg(3);

/* Simplicial fan construction for the body/cone intersection. */
void BM_FanDecompose(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const hsa::Polytope P = cube(d);
    const hsa::Cone C = hsa::build_cone(d);
    for (auto _ : state) benchmark::DoNotOptimize(hsa::fan_decompose(P, C));
}
BENCHMARK(BM_FanDecompose)->Arg(2)->Arg(3);

/* Endpoint-graded adaptive quadrature on an integrable singularity. */
void BM_Integrate1dSingular(benchmark::State& state) {
    hsa::IntegrateOptions opt;
    opt.rel_tol = 1e-10;
    opt.singular_lo = true;
    for (auto _ : state) {
        auto r = hsa::integrate_1d([](double u) { return std::pow(u, -0.9); }, 0.0, 1.0, opt);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_Integrate1dSingular);

/* Weighted dual norm of the profile function for a finite dual exponent. */
void BM_GNorm(benchmark::State& state) {
    const hsa::Weight w = hsa::Weight::power_law(2, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(hsa::g_norm(w, 1.0, 4.0 / 3.0));
}
BENCHMARK(BM_GNorm);

/* Extremal-field evaluation: one gauge plus one lookup in the precomputed
   cumulative-profile ladder.  This is the inner integrand of every operator
   application. */
void BM_ExtremalEval(benchmark::State& state) {
    const hsa::OperatorSpec spec(cube(2), hsa::build_cone(2), hsa::Weight::power_law(2, 0.4), 1.0,
                                 4.0);
    const hsa::ScalarField psi = hsa::extremal_psi(spec);
    const std::vector<hsa::Vec> pts = sample_points(2, 256);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(psi.evaluate(pts[i]));
        i = (i + 1) & 255;
    }
}
BENCHMARK(BM_ExtremalEval);

/* Deterministic sharded Monte Carlo over a gauge shell. */
void BM_McThroughput(benchmark::State& state) {
    const hsa::Polytope P = cube(2);
    const hsa::Cone C = hsa::build_cone(2);
    const hsa::Weight w = hsa::Weight::power_law(2, 0.5);
    hsa::McConfig cfg;
    cfg.samples = state.range(0);
    cfg.seed = 42;
    for (auto _ : state) {
        auto r = hsa::mc_region_integrate(
            P, C, [&](const hsa::Vec& y) { return w(P.gauge(y)); },
            hsa::RadialRegion{1.0, 2.0, 0.0}, cfg);
        benchmark::DoNotOptimize(r.estimate);
    }
    state.SetItemsProcessed(state.iterations() * cfg.samples);
}
BENCHMARK(BM_McThroughput)->Arg(100000)->Unit(benchmark::kMillisecond);

/* Full operator application on the bounded extremal at the apex: singular
   grading, fan walk, and exact truncated tail together. */
void BM_ApplyFull(benchmark::State& state) {
    const double p = state.range(0) == 0 ? kInf : static_cast<double>(state.range(0));
    const double gamma = std::isinf(p) ? 0.5 : 0.4;
    const hsa::OperatorSpec spec(cube(2), hsa::build_cone(2), hsa::Weight::power_law(2, gamma),
                                 1.0, p);
    const hsa::ScalarField psi = hsa::extremal_psi(spec);
    const hsa::Vec theta = hsa::Vec::Zero(2);
    for (auto _ : state) benchmark::DoNotOptimize(hsa::apply_full(spec, psi, theta, 1e-8).value);
}
BENCHMARK(BM_ApplyFull)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);

/* End-to-end constants assembly for a config. */
void BM_AdditiveConstants(benchmark::State& state) {
    const hsa::OperatorSpec spec(cube(2), hsa::build_cone(2), hsa::Weight::power_law(2, 0.4), 1.0,
                                 4.0);
    for (auto _ : state) benchmark::DoNotOptimize(hsa::additive_constants(spec).A);
}
BENCHMARK(BM_AdditiveConstants);

}  // namespace

BENCHMARK_MAIN();
