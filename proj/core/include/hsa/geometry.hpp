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

#include <vector>

#include <Eigen/Core>

namespace hsa {

using Vec = Eigen::VectorXd;

/* One supporting hyperplane (x, normal) <= offset of the body, with the ids
   of the vertices lying on it.  Normals are unit length and offsets positive
   (the origin is interior). */
struct Facet {
    Vec normal;
    double offset = 0.0;
    std::vector<int> vertex_ids;
};

/* Origin-symmetric convex polytope given by its vertices.  The gauge
   functional |x|_K = max_i (x, n_i)/delta_i induced by the facets is the
   norm whose unit ball is the body. */
class Polytope {
  public:
    int dim() const { return dim_; }
    const std::vector<Vec>& vertices() const { return vertices_; }
    const std::vector<Facet>& facets() const { return facets_; }

    /* Minkowski gauge |x|_K. */
    double gauge(const Vec& x) const;
    /* Dual (polar) norm |z|_{K^o} = max over vertices of (v, z). */
    double polar(const Vec& z) const;
    /* Index of a facet attaining the gauge maximum at x. */
    int supporting_facet(const Vec& x) const;
    /* Coordinate-wise half-widths of the bounding box. */
    const Vec& box_halfwidths() const { return box_; }
    /* Largest vertex coordinate magnitude, used for tolerance scaling. */
    double scale() const { return scale_; }

  private:
    friend Polytope build_polytope(const std::vector<Vec>& vertices);
    int dim_ = 0;
    double scale_ = 0.0;
    Vec box_;
    std::vector<Vec> vertices_;
    std::vector<Facet> facets_;
};

/* Closed convex cone with apex at the origin, either all of R^d or finitely
   generated.  Membership is evaluated against the inward facet normals
   (x, m_j) >= 0. */
class Cone {
  public:
    int dim() const { return dim_; }
    bool full() const { return normals_.empty(); }
    const std::vector<Vec>& generators() const { return generators_; }
    const std::vector<Vec>& inward_normals() const { return normals_; }
    bool contains(const Vec& x) const;

  private:
    friend Cone build_cone(int dim);
    friend Cone build_cone(const std::vector<Vec>& generators);
    int dim_ = 0;
    std::vector<Vec> generators_;
    std::vector<Vec> normals_;
};

/* Simplicial cell of the fan decomposition of K cap C: the cone from the
   origin over a (d-1)-simplex gamma contained in one facet of K.  The slab
   {rho * z : z in gamma, r0 < rho < r1} carries the radial quadratures. */
struct FanCell {
    std::vector<Vec> corners;     // d points spanning gamma, gauge 1
    Vec normal;                   // facet normal n_s
    double offset = 0.0;          // facet offset delta_s
    double facet_measure = 0.0;   // (d-1)-measure of gamma
};

struct FanDecomposition {
    std::vector<FanCell> cells;
    double measure = 0.0;  // d-measure of K cap C
};

/* Validates symmetry and full dimension, enumerates facets. */
Polytope build_polytope(const std::vector<Vec>& vertices);

double gauge_norm(const Polytope& P, const Vec& x);
double polar_norm(const Polytope& P, const Vec& z);

Cone build_cone(int dim);                             // all of R^d
Cone build_cone(const std::vector<Vec>& generators);  // conic hull

/* Splits K cap C into simplicial cells, one fan per facet of K that survives
   the cone restriction; measure is the exact volume sum
   sum_s offset_s * facet_measure_s / d. */
FanDecomposition fan_decompose(const Polytope& P, const Cone& C);

/* Inscribed polytope approximation of the unit Euclidean ball: regular
   polygons for d = 2 (facet count rounded up to even), subdivided
   octahedra for d = 3 (facet count rounded up to 8 * 4^k). */
Polytope ball_polytope(int dim, int facets);

}  // namespace hsa
