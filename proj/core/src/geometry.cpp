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
#include "hsa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hsa/errors.hpp"

namespace hsa {
namespace {

constexpr double kMergeTol = 1e-9;  // coplanarity merge tolerance
constexpr double kJoggle = 1e-12;   // relative perturbation fixing hull combinatorics

struct SplitMix64 {
    uint64_t s;
    explicit SplitMix64(uint64_t seed) : s(seed) {}
    uint64_t next() {
        s += 0x9E3779B97F4A7C15ull;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/* Deterministic tiny perturbation.  Only the hull combinatorics are decided
   in the joggled coordinates; planes are recomputed from the originals. */
std::vector<Vec> joggled_copy(const std::vector<Vec>& pts, double scale) {
    SplitMix64 rng(0x51a7bull ^ (static_cast<uint64_t>(pts.size()) << 20));
    std::vector<Vec> out(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        out[i] = pts[i];
        for (Eigen::Index c = 0; c < out[i].size(); ++c)
            out[i][c] += kJoggle * scale * (2.0 * rng.uniform() - 1.0);
    }
    return out;
}

/* Unit normal of the hyperplane spanned by the rows of E, empty if the rows
   do not span a (k-1)-dimensional space. */
Vec kernel_normal(const Eigen::MatrixXd& E) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(E);
    lu.setThreshold(1e-12);
    if (lu.dimensionOfKernel() != 1) return Vec();
    Vec n = lu.kernel().col(0);
    double nn = n.norm();
    if (!(nn > 0.0) || !std::isfinite(nn)) return Vec();
    return n / nn;
}

/* (k)-dimensional measure of the simplex pts[ids[0]], ..., pts[ids[k]]. */
double simplex_measure(const std::vector<Vec>& pts, const std::vector<int>& ids) {
    int k = static_cast<int>(ids.size()) - 1;
    Eigen::MatrixXd E(pts[ids[0]].size(), k);
    for (int i = 0; i < k; ++i) E.col(i) = pts[ids[i + 1]] - pts[ids[0]];
    double det2 = (E.transpose() * E).determinant();
    double m = std::sqrt(std::max(det2, 0.0));
    for (int i = 2; i <= k; ++i) m /= i;
    return m;
}

/* Greedy affinely independent seed of k+1 points. */
std::vector<int> seed_simplex(const std::vector<Vec>& pts, int k, double scale) {
    int n = static_cast<int>(pts.size());
    int i0 = 0;
    for (int i = 1; i < n; ++i)
        if (pts[i][0] > pts[i0][0]) i0 = i;
    std::vector<int> ids{i0};
    Eigen::MatrixXd B(k, 0);
    while (static_cast<int>(ids.size()) < k + 1) {
        int best = -1;
        double bestr = 1e-9 * scale;
        for (int i = 0; i < n; ++i) {
            if (std::find(ids.begin(), ids.end(), i) != ids.end()) continue;
            Vec r = pts[i] - pts[ids[0]];
            r -= B * (B.transpose() * r);
            double rn = r.norm();
            if (rn > bestr) {
                bestr = rn;
                best = i;
            }
        }
        if (best < 0) throw Degenerate("vertex set does not span the full space");
        Vec r = pts[best] - pts[ids[0]];
        r -= B * (B.transpose() * r);
        r.normalize();
        B.conservativeResize(Eigen::NoChange, B.cols() + 1);
        B.col(B.cols() - 1) = r;
        ids.push_back(best);
    }
    return ids;
}

struct HullFacet {
    std::vector<int> v;  // sorted vertex ids
    Vec n;               // outward unit normal, joggled coordinates
    double off = 0.0;
};

/* Incremental convex hull of a full-dimensional point set in dimension k,
   returning the boundary (k-1)-simplices as index lists.  Exact ties are
   broken by the deterministic joggle. */
std::vector<std::vector<int>> hull_facets(const std::vector<Vec>& pts0, double scale) {
    int n = static_cast<int>(pts0.size());
    int k = static_cast<int>(pts0[0].size());
    if (n < k + 1) throw Degenerate("too few points for a full-dimensional hull");
    if (k == 1) {
        int imin = 0, imax = 0;
        for (int i = 1; i < n; ++i) {
            if (pts0[i][0] < pts0[imin][0]) imin = i;
            if (pts0[i][0] > pts0[imax][0]) imax = i;
        }
        return {{imin}, {imax}};
    }

    std::vector<Vec> pts = joggled_copy(pts0, scale);
    std::vector<int> seed = seed_simplex(pts, k, scale);
    Vec ref = Vec::Zero(k);
    for (int i : seed) ref += pts[i];
    ref /= static_cast<double>(seed.size());

    auto make_facet = [&](std::vector<int> ids) {
        Eigen::MatrixXd E(k - 1, k);
        for (int i = 1; i < k; ++i) E.row(i - 1) = (pts[ids[i]] - pts[ids[0]]).transpose();
        Vec nrm = kernel_normal(E);
        if (nrm.size() == 0) throw Degenerate("degenerate facet in hull construction");
        double off = nrm.dot(pts[ids[0]]);
        if (nrm.dot(ref) > off) {
            nrm = -nrm;
            off = -off;
        }
        std::sort(ids.begin(), ids.end());
        return HullFacet{std::move(ids), std::move(nrm), off};
    };

    std::vector<HullFacet> facets;
    for (int drop = 0; drop <= k; ++drop) {
        std::vector<int> ids;
        for (int j = 0; j <= k; ++j)
            if (j != drop) ids.push_back(seed[j]);
        facets.push_back(make_facet(std::move(ids)));
    }

    const double eps = 1e-14 * scale;
    std::vector<char> used(n, 0);
    for (int i : seed) used[i] = 1;
    for (int p = 0; p < n; ++p) {
        if (used[p]) continue;
        used[p] = 1;
        std::vector<char> vis(facets.size(), 0);
        bool any = false;
        for (size_t f = 0; f < facets.size(); ++f) {
            if (facets[f].n.dot(pts[p]) > facets[f].off + eps) {
                vis[f] = 1;
                any = true;
            }
        }
        if (!any) continue;  // interior of the current hull

        std::map<std::vector<int>, std::vector<int>> ridges;
        for (size_t f = 0; f < facets.size(); ++f) {
            for (int drop = 0; drop < k; ++drop) {
                std::vector<int> r;
                for (int j = 0; j < k; ++j)
                    if (j != drop) r.push_back(facets[f].v[j]);
                ridges[std::move(r)].push_back(static_cast<int>(f));
            }
        }
        std::vector<HullFacet> next;
        for (size_t f = 0; f < facets.size(); ++f)
            if (!vis[f]) next.push_back(std::move(facets[f]));
        for (const auto& [r, fs] : ridges) {
            if (fs.size() != 2) throw Degenerate("hull surface is not closed");
            if (vis[fs[0]] + vis[fs[1]] != 1) continue;
            std::vector<int> ids = r;
            ids.push_back(p);
            next.push_back(make_facet(std::move(ids)));
        }
        facets = std::move(next);
    }

    std::vector<std::vector<int>> out;
    out.reserve(facets.size());
    for (auto& f : facets) out.push_back(std::move(f.v));
    return out;
}

template <class F>
void for_each_combination(int n, int r, F&& body) {
    if (r <= 0 || r > n) return;
    std::vector<int> c(r);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        body(const_cast<const std::vector<int>&>(c));
        int i = r - 1;
        while (i >= 0 && c[i] == n - r + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
    }
}

double binomial_estimate(int n, int r) {
    double v = 1.0;
    for (int i = 0; i < r; ++i) v *= static_cast<double>(n - i) / (i + 1);
    return v;
}

/* Vertices of {x : |x|_K <= 1} cap C by brute-force enumeration of active
   constraint subsets.  Intended for the small facet counts this library
   works with. */
std::vector<Vec> intersection_vertices(const Polytope& P, const Cone& C) {
    int d = P.dim();
    double scale = P.scale();
    std::vector<Vec> A;
    std::vector<double> b;
    for (const auto& f : P.facets()) {
        A.push_back(f.normal);
        b.push_back(f.offset);
    }
    for (const auto& m : C.inward_normals()) {
        A.push_back(-m);
        b.push_back(0.0);
    }
    int mcount = static_cast<int>(A.size());
    if (binomial_estimate(mcount, d) > 5e6)
        throw NoConvergence("facet count too large for intersection vertex enumeration");

    std::vector<Vec> out;
    for_each_combination(mcount, d, [&](const std::vector<int>& c) {
        Eigen::MatrixXd M(d, d);
        Vec rhs(d);
        for (int i = 0; i < d; ++i) {
            M.row(i) = A[c[i]].transpose();
            rhs[i] = b[c[i]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
        lu.setThreshold(1e-10);
        if (lu.rank() < d) return;
        Vec x = lu.solve(rhs);
        if (!x.allFinite()) return;
        if (x.lpNorm<Eigen::Infinity>() > 10.0 * scale) return;
        for (int i = 0; i < mcount; ++i)
            if (A[i].dot(x) > b[i] + kMergeTol * scale) return;
        for (const auto& u : out)
            if ((u - x).norm() <= kMergeTol * scale) return;
        out.push_back(std::move(x));
    });
    return out;
}

/* Triangulates the facet polygon spanned by verts[ids] (all on the plane
   (x, n) = off) into (d-1)-simplices: directly if it already is a simplex,
   otherwise by a fan from its centroid. */
void append_fan_cells(const std::vector<Vec>& verts, const std::vector<int>& ids, const Vec& n,
                      double off, double scale, std::vector<FanCell>& cells) {
    int d = static_cast<int>(n.size());
    double meas_tol = 1e-12 * std::pow(scale, d - 1);
    auto push_cell = [&](std::vector<Vec> corners) {
        std::vector<int> local(corners.size());
        std::iota(local.begin(), local.end(), 0);
        double meas = simplex_measure(corners, local);
        if (meas <= meas_tol) return;
        cells.push_back(FanCell{std::move(corners), n, off, meas});
    };

    if (static_cast<int>(ids.size()) == d) {
        std::vector<Vec> corners;
        for (int id : ids) corners.push_back(verts[id]);
        push_cell(std::move(corners));
        return;
    }

    Vec o = Vec::Zero(d);
    for (int id : ids) o += verts[id];
    o /= static_cast<double>(ids.size());

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(n);
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXd B = Q.rightCols(d - 1);  // orthonormal basis of the plane

    std::vector<Vec> proj;
    proj.reserve(ids.size());
    for (int id : ids) proj.push_back(B.transpose() * (verts[id] - o));

    std::vector<std::vector<int>> boundary;
    try {
        boundary = hull_facets(proj, scale);
    } catch (const Degenerate&) {
        return;  // facet collapsed to a lower-dimensional set
    }
    for (const auto& s : boundary) {
        std::vector<Vec> corners{o};
        for (int j : s) corners.push_back(verts[ids[j]]);
        push_cell(std::move(corners));
    }
}

}  // namespace

double Polytope::gauge(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("gauge: point has wrong dimension");
    double m = 0.0;
    for (const auto& f : facets_) m = std::max(m, f.normal.dot(x) / f.offset);
    return m;
}

double Polytope::polar(const Vec& z) const {
    if (static_cast<int>(z.size()) != dim_) throw DimensionMismatch("polar: point has wrong dimension");
    double m = 0.0;
    for (const auto& v : vertices_) m = std::max(m, v.dot(z));
    return m;
}

int Polytope::supporting_facet(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("supporting_facet: point has wrong dimension");
    int best = 0;
    double bv = -1.0;
    for (size_t i = 0; i < facets_.size(); ++i) {
        double r = facets_[i].normal.dot(x) / facets_[i].offset;
        if (r > bv) {
            bv = r;
            best = static_cast<int>(i);
        }
    }
    return best;
}

Polytope build_polytope(const std::vector<Vec>& vertices) {
    if (vertices.empty()) throw Degenerate("empty vertex list");
    int d = static_cast<int>(vertices[0].size());
    if (d < 2) throw Degenerate("dimension must be at least 2");
    for (const auto& v : vertices)
        if (static_cast<int>(v.size()) != d) throw DimensionMismatch("vertices of mixed dimension");

    double scale = 0.0;
    for (const auto& v : vertices) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
    if (!(scale > 0.0)) throw Degenerate("all vertices coincide with the origin");
    const double sym_tol = 1e-12 * scale;

    std::vector<Vec> V;
    for (const auto& v : vertices) {
        bool dup = false;
        for (const auto& u : V)
            if ((u - v).lpNorm<Eigen::Infinity>() <= sym_tol) {
                dup = true;
                break;
            }
        if (!dup) V.push_back(v);
    }
    if (static_cast<int>(V.size()) < 2 * d) throw Degenerate("need at least 2d distinct vertices");
    for (const auto& v : V) {
        bool mirrored = false;
        for (const auto& u : V)
            if ((u + v).lpNorm<Eigen::Infinity>() <= sym_tol) {
                mirrored = true;
                break;
            }
        if (!mirrored) throw NotSymmetric("vertex set is not symmetric about the origin");
    }

    auto raw = hull_facets(V, scale);

    struct Cluster {
        Vec n;
        double off;
        double best_meas;
        std::set<int> ids;
    };
    std::vector<Cluster> clusters;
    for (const auto& ids : raw) {
        Eigen::MatrixXd M(d, d);
        for (int i = 0; i < d; ++i) M.row(i) = V[ids[i]].transpose();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
        lu.setThreshold(1e-12);
        if (lu.rank() < d) {
            if (simplex_measure(V, ids) > 1e-10 * std::pow(scale, d - 1))
                throw Degenerate("boundary simplex plane passes through the origin");
            continue;  // zero-measure sliver left by the joggle
        }
        Vec nt = lu.solve(Vec::Ones(d));
        double nn = nt.norm();
        if (!(nn > 0.0) || !std::isfinite(nn)) throw Degenerate("facet plane solve failed");
        Vec nrm = nt / nn;
        double off = 1.0 / nn;
        double meas = simplex_measure(V, ids);
        bool merged = false;
        for (auto& c : clusters) {
            if (c.n.dot(nrm) > 1.0 - kMergeTol && std::abs(c.off - off) <= kMergeTol * scale) {
                c.ids.insert(ids.begin(), ids.end());
                if (meas > c.best_meas) {
                    c.best_meas = meas;
                    c.n = nrm;
                    c.off = off;
                }
                merged = true;
                break;
            }
        }
        if (!merged) clusters.push_back(Cluster{std::move(nrm), off, meas, {ids.begin(), ids.end()}});
    }

    Polytope P;
    P.dim_ = d;
    P.scale_ = scale;
    P.vertices_ = V;
    for (auto& c : clusters) {
        Facet f;
        f.normal = std::move(c.n);
        f.offset = c.off;
        f.vertex_ids.assign(c.ids.begin(), c.ids.end());
        P.facets_.push_back(std::move(f));
    }

    for (const auto& v : V) {
        double g = P.gauge(v);
        if (std::abs(g - 1.0) > 1e-10)
            throw Degenerate("input point is not a vertex of the hull");
    }

    P.box_ = Vec::Zero(d);
    for (const auto& v : V)
        for (int c = 0; c < d; ++c) P.box_[c] = std::max(P.box_[c], std::abs(v[c]));
    return P;
}

double gauge_norm(const Polytope& P, const Vec& x) { return P.gauge(x); }
double polar_norm(const Polytope& P, const Vec& z) { return P.polar(z); }

bool Cone::contains(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("cone membership: wrong dimension");
    if (normals_.empty()) return true;
    double tol = 1e-12 * (1.0 + x.norm());
    for (const auto& m : normals_)
        if (m.dot(x) < -tol) return false;
    return true;
}

Cone build_cone(int dim) {
    if (dim < 2) throw DegenerateCone("dimension must be at least 2");
    Cone c;
    c.dim_ = dim;
    return c;
}

Cone build_cone(const std::vector<Vec>& generators) {
    if (generators.empty()) throw DegenerateCone("no generators");
    int d = static_cast<int>(generators[0].size());
    if (d < 2) throw DegenerateCone("dimension must be at least 2");
    std::vector<Vec> G;
    for (const auto& g : generators) {
        if (static_cast<int>(g.size()) != d) throw DimensionMismatch("generators of mixed dimension");
        double n = g.norm();
        if (!(n > 0.0)) throw DegenerateCone("zero generator");
        G.push_back(g / n);
    }
    Eigen::MatrixXd GM(G.size(), d);
    for (size_t i = 0; i < G.size(); ++i) GM.row(i) = G[i].transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(GM);
    lu.setThreshold(1e-9);
    if (lu.rank() < d) throw DegenerateCone("generators do not span the full space");

    int n = static_cast<int>(G.size());
    std::vector<Vec> normals;
    for_each_combination(n, d - 1, [&](const std::vector<int>& c) {
        Eigen::MatrixXd E(d - 1, d);
        for (int i = 0; i < d - 1; ++i) E.row(i) = G[c[i]].transpose();
        Vec m = kernel_normal(E);
        if (m.size() == 0) return;
        double dmin = 0.0, dmax = 0.0;
        for (const auto& g : G) {
            double t = m.dot(g);
            dmin = std::min(dmin, t);
            dmax = std::max(dmax, t);
        }
        if (dmin >= -1e-12) {
            // keep m
        } else if (dmax <= 1e-12) {
            m = -m;
        } else {
            return;
        }
        for (const auto& u : normals)
            if (u.dot(m) > 1.0 - 1e-10) return;
        normals.push_back(std::move(m));
    });

    Cone c;
    c.dim_ = d;
    c.generators_ = generators;
    c.normals_ = std::move(normals);
    return c;
}

FanDecomposition fan_decompose(const Polytope& P, const Cone& C) {
    if (P.dim() != C.dim()) throw DimensionMismatch("polytope and cone dimensions differ");
    int d = P.dim();
    double scale = P.scale();

    std::vector<Vec> verts;
    std::vector<std::vector<int>> on_facet(P.facets().size());
    if (C.full()) {
        verts = P.vertices();
        for (size_t i = 0; i < P.facets().size(); ++i) on_facet[i] = P.facets()[i].vertex_ids;
    } else {
        verts = intersection_vertices(P, C);
        for (size_t i = 0; i < P.facets().size(); ++i) {
            const auto& f = P.facets()[i];
            for (size_t j = 0; j < verts.size(); ++j)
                if (std::abs(f.normal.dot(verts[j]) - f.offset) <= kMergeTol * scale)
                    on_facet[i].push_back(static_cast<int>(j));
        }
    }

    FanDecomposition out;
    for (size_t i = 0; i < P.facets().size(); ++i) {
        if (static_cast<int>(on_facet[i].size()) < d) continue;
        const auto& f = P.facets()[i];
        append_fan_cells(verts, on_facet[i], f.normal, f.offset, scale, out.cells);
    }
    for (const auto& c : out.cells) out.measure += c.offset * c.facet_measure / d;
    if (out.cells.empty() || !(out.measure > 1e-12 * std::pow(scale, d)))
        throw DegenerateIntersection("body and cone intersect in a lower-dimensional set");
    return out;
}

namespace {

void subdivide_sphere_face(const Vec& a, const Vec& b, const Vec& c, int level,
                           std::vector<Vec>& out) {
    if (level == 0) {
        out.push_back(a);
        out.push_back(b);
        out.push_back(c);
        return;
    }
    Vec ab = (a + b) / 2.0, bc = (b + c) / 2.0, ca = (c + a) / 2.0;
    ab /= ab.norm();
    bc /= bc.norm();
    ca /= ca.norm();
    subdivide_sphere_face(a, ab, ca, level - 1, out);
    subdivide_sphere_face(ab, b, bc, level - 1, out);
    subdivide_sphere_face(ca, bc, c, level - 1, out);
    subdivide_sphere_face(ab, bc, ca, level - 1, out);
}

}  // namespace

Polytope ball_polytope(int dim, int facets) {
    if (dim == 2) {
        int m = std::max(4, facets);
        if (m % 2) ++m;
        std::vector<Vec> v;
        for (int j = 0; j < m / 2; ++j) {
            double a = 2.0 * M_PI * j / m;
            Vec p(2);
            p << std::cos(a), std::sin(a);
            v.push_back(p);
            v.push_back(-p);
        }
        return build_polytope(v);
    }
    if (dim == 3) {
        int level = 0;
        while (8 * (1 << (2 * level)) < facets && level < 5) ++level;
        std::vector<Vec> tri;
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) {
                    Vec a = Vec::Zero(3), b = Vec::Zero(3), c = Vec::Zero(3);
                    a[0] = sx;
                    b[1] = sy;
                    c[2] = sz;
                    subdivide_sphere_face(a, b, c, level, tri);
                }
        std::vector<Vec> v;
        for (const auto& p : tri) {
            bool dup = false;
            for (const auto& u : v)
                if ((u - p).lpNorm<Eigen::Infinity>() <= 1e-13) {
                    dup = true;
                    break;
                }
            if (!dup) v.push_back(p);
        }
        return build_polytope(v);
    }
    throw Degenerate("ball approximation available for dimensions 2 and 3");
}

}  // namespace hsa
