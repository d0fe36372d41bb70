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

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hsa/geometry.hpp"

namespace hsa::test {

inline Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

inline Vec vec3(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

/* Hypercube [-1,1]^d. */
inline Polytope cube_polytope(int d) {
    std::vector<Vec> v;
    for (int mask = 0; mask < (1 << d); ++mask) {
        Vec p(d);
        for (int c = 0; c < d; ++c) p[c] = (mask >> c) & 1 ? 1.0 : -1.0;
        v.push_back(p);
    }
    return build_polytope(v);
}

/* Cross-polytope conv{+-e_i}. */
inline Polytope cross_polytope(int d) {
    std::vector<Vec> v;
    for (int c = 0; c < d; ++c) {
        Vec p = Vec::Zero(d);
        p[c] = 1.0;
        v.push_back(p);
        v.push_back(-p);
    }
    return build_polytope(v);
}

/* Random symmetric polytope with vertex pairs on the unit sphere. */
inline Polytope random_polytope(std::mt19937& rng, int d, int pairs) {
    std::normal_distribution<double> gauss;
    std::vector<Vec> v;
    for (int i = 0; i < pairs; ++i) {
        Vec p(d);
        double n = 0.0;
        do {
            for (int c = 0; c < d; ++c) p[c] = gauss(rng);
            n = p.norm();
        } while (n < 1e-3);
        p /= n;
        v.push_back(p);
        v.push_back(-p);
    }
    return build_polytope(v);
}

/* Random solid cone: generators spread around a random axis. */
inline Cone random_cone(std::mt19937& rng, int d) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (;;) {
        Vec axis(d);
        double n = 0.0;
        do {
            for (int c = 0; c < d; ++c) axis[c] = gauss(rng);
            n = axis.norm();
        } while (n < 1e-3);
        axis /= n;
        int k = d == 2 ? 2 : 3 + static_cast<int>(rng() % 2);
        std::vector<Vec> gens;
        for (int i = 0; i < k; ++i) {
            Vec r(d);
            for (int c = 0; c < d; ++c) r[c] = gauss(rng);
            r -= axis.dot(r) * axis;
            if (r.norm() < 1e-6) continue;
            r /= r.norm();
            double spread = 0.4 + 0.6 * unif(rng);
            gens.push_back((axis + spread * r).normalized());
        }
        if (static_cast<int>(gens.size()) < (d == 2 ? 2 : 3)) continue;
        try {
            return build_cone(gens);
        } catch (const DegenerateCone&) {
            continue;
        }
    }
}

/* Distance from x to the conic hull of the generators, by Lawson-Hanson
   nonnegative least squares.  Independent of the halfspace representation. */
inline double cone_distance_nnls(const std::vector<Vec>& generators, const Vec& x) {
    int n = static_cast<int>(generators.size());
    Eigen::MatrixXd A(x.size(), n);
    for (int i = 0; i < n; ++i) A.col(i) = generators[i];
    Eigen::VectorXd lam = Eigen::VectorXd::Zero(n);
    std::vector<char> passive(n, 0);

    auto solve_passive = [&]() {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (passive[i]) idx.push_back(i);
        Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
        if (idx.empty()) return full;
        Eigen::MatrixXd Ap(A.rows(), idx.size());
        for (size_t j = 0; j < idx.size(); ++j) Ap.col(j) = A.col(idx[j]);
        Eigen::VectorXd z = Ap.colPivHouseholderQr().solve(x);
        for (size_t j = 0; j < idx.size(); ++j) full[idx[j]] = z[j];
        return full;
    };

    for (int it = 0; it < 400; ++it) {
        Eigen::VectorXd w = A.transpose() * (x - A * lam);
        int t = -1;
        double best = 1e-10 * (1.0 + x.norm());
        for (int i = 0; i < n; ++i)
            if (!passive[i] && w[i] > best) {
                best = w[i];
                t = i;
            }
        if (t < 0) break;
        passive[t] = 1;
        Eigen::VectorXd z = solve_passive();
        for (int guard = 0; guard < 200; ++guard) {
            bool ok = true;
            for (int i = 0; i < n; ++i)
                if (passive[i] && z[i] <= 0.0) ok = false;
            if (ok) break;
            double alpha = 1.0;
            for (int i = 0; i < n; ++i)
                if (passive[i] && z[i] <= 0.0 && lam[i] - z[i] > 0.0)
                    alpha = std::min(alpha, lam[i] / (lam[i] - z[i]));
            lam += alpha * (z - lam);
            for (int i = 0; i < n; ++i)
                if (passive[i] && lam[i] <= 1e-13) passive[i] = 0;
            z = solve_passive();
        }
        lam = z;
        for (int i = 0; i < n; ++i) lam[i] = std::max(lam[i], 0.0);
    }
    return (x - A * lam).norm();
}

}  // namespace hsa::test
