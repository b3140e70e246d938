#pragma once

// Deterministic interface-fitted triangulation of the disk B_R with star-shaped
// obstacle regions.
//
// Point layout: exact equi-angular nodes on Gamma_R, curve-parameter nodes on
// each obstacle boundary, and a jittered hexagonal bulk lattice kept clear of
// all boundary polylines (points inside the clearance band are pushed onto its
// edge, points far inside it are dropped). The clearance makes every boundary
// segment a Gabriel edge, so the Delaunay triangulation contains the interface
// and outer-ring polylines; a local edge-flip fallback restores any stragglers.
// Region tags by flood fill bounded by interface edges, verified against a
// point-in-curve test. Uniform refinement splits 1->4 with midpoints snapped
// back to the exact curves / circle.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "elwave/common.hpp"
#include "elwave/star_curve.hpp"

namespace elwave {

struct Mesh2D {
    struct Tri {
        std::array<int, 3> v{};
        int tag = 0; // 0 background, 1..N obstacle index + 1
    };
    struct Ring {
        std::vector<int> nodes;    // CCW order
        std::vector<double> theta; // curve parameter per node
    };

    std::vector<Vec2> nodes;
    std::vector<Tri> triangles;
    std::vector<int> outer_ring; // CCW, node i at angle 2 pi i / outer_ring.size()
    std::vector<Ring> interface_rings;
    std::vector<StarCurve> curves;
    double R = 0.0;
    double target_h = 0.0;

    int n_boundary() const { return int(outer_ring.size()); }

    double max_diameter() const {
        double d = 0.0;
        for (const auto& t : triangles)
            for (int e = 0; e < 3; ++e)
                d = std::max(d, (nodes[t.v[e]] - nodes[t.v[(e + 1) % 3]]).norm());
        return d;
    }
};

namespace meshdetail {

inline double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

// > 0 when d lies inside the circumcircle of CCW triangle (a, b, c)
inline double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double adx = a[0] - d[0], ady = a[1] - d[1];
    const double bdx = b[0] - d[0], bdy = b[1] - d[1];
    const double cdx = c[0] - d[0], cdy = c[1] - d[1];
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

// Incremental Bowyer-Watson triangulation with triangle adjacency.
class Delaunay {
public:
    explicit Delaunay(double extent) {
        const double s = 8.0 * extent;
        pts_ = {Vec2{0.0, 3.0 * s}, Vec2{-2.6 * s, -1.5 * s}, Vec2{2.6 * s, -1.5 * s}};
        tris_.push_back({{0, 1, 2}, {-1, -1, -1}, true});
    }

    int insert(const Vec2& p) {
        const int pid = int(pts_.size());
        pts_.push_back(p);
        const int t0 = locate(p);
        // cavity: BFS over triangles whose circumcircle contains p
        std::vector<int> cavity;
        std::unordered_set<int> in_cavity;
        std::deque<int> queue{t0};
        in_cavity.insert(t0);
        while (!queue.empty()) {
            const int t = queue.front();
            queue.pop_front();
            cavity.push_back(t);
            for (int e = 0; e < 3; ++e) {
                const int nb = tris_[t].nbr[e];
                if (nb < 0 || in_cavity.count(nb)) continue;
                const auto& nt = tris_[nb];
                if (incircle(pts_[nt.v[0]], pts_[nt.v[1]], pts_[nt.v[2]], p) > 0.0) {
                    in_cavity.insert(nb);
                    queue.push_back(nb);
                }
            }
        }
        // boundary edges of the cavity (edge e of t is opposite vertex v[e])
        struct BEdge {
            int a, b, outer;
        };
        std::vector<BEdge> border;
        for (int t : cavity)
            for (int e = 0; e < 3; ++e) {
                const int nb = tris_[t].nbr[e];
                if (nb >= 0 && in_cavity.count(nb)) continue;
                border.push_back({tris_[t].v[(e + 1) % 3], tris_[t].v[(e + 2) % 3], nb});
            }
        for (int t : cavity) tris_[t].alive = false;
        // fan of new triangles
        std::vector<int> fresh;
        fresh.reserve(border.size());
        for (const auto& be : border) {
            const int id = int(tris_.size());
            tris_.push_back({{pid, be.a, be.b}, {be.outer, -1, -1}, true});
            if (be.outer >= 0) {
                auto& on = tris_[be.outer];
                for (int e = 0; e < 3; ++e)
                    if (!on.alive) break;
                for (int e = 0; e < 3; ++e) {
                    const int u = on.v[(e + 1) % 3], w = on.v[(e + 2) % 3];
                    if ((u == be.b && w == be.a) || (u == be.a && w == be.b)) on.nbr[e] = id;
                }
            }
            fresh.push_back(id);
        }
        // stitch fan neighbours via shared (pid, x) edges
        std::unordered_map<long long, std::pair<int, int>> half; // vertex -> (tri, slot)
        for (int id : fresh) {
            const auto& t = tris_[id];
            // edges (pid, t.v[1]) opposite slot 2 and (pid, t.v[2]) opposite slot 1
            for (int slot : {1, 2}) {
                const int other = t.v[slot == 1 ? 2 : 1];
                auto it = half.find(other);
                if (it == half.end()) {
                    half[other] = {id, slot};
                } else {
                    tris_[id].nbr[slot] = it->second.first;
                    tris_[it->second.first].nbr[it->second.second] = id;
                }
            }
        }
        hint_ = fresh.empty() ? hint_ : fresh.front();
        return pid;
    }

    const std::vector<Vec2>& points() const { return pts_; }

    struct FinalTri {
        std::array<int, 3> v;
    };

    /// Alive triangles not touching the super-triangle, CCW, with indices shifted
    /// so that the first real point is 0.
    std::vector<FinalTri> extract() const {
        std::vector<FinalTri> out;
        for (const auto& t : tris_) {
            if (!t.alive) continue;
            if (t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3) continue;
            FinalTri f{{t.v[0] - 3, t.v[1] - 3, t.v[2] - 3}};
            const Vec2 &a = pts_[t.v[0]], &b = pts_[t.v[1]], &c = pts_[t.v[2]];
            if (orient(a, b, c) < 0.0) std::swap(f.v[1], f.v[2]);
            out.push_back(f);
        }
        std::sort(out.begin(), out.end(), [](const FinalTri& x, const FinalTri& y) {
            return std::lexicographical_compare(x.v.begin(), x.v.end(), y.v.begin(), y.v.end());
        });
        return out;
    }

private:
    int locate(const Vec2& p) const {
        int t = hint_;
        if (t < 0 || !tris_[t].alive)
            for (std::size_t i = 0; i < tris_.size(); ++i)
                if (tris_[i].alive) {
                    t = int(i);
                    break;
                }
        for (int steps = 0; steps < int(tris_.size()) + 8; ++steps) {
            const auto& tr = tris_[t];
            int next = -1;
            for (int e = 0; e < 3; ++e) {
                const Vec2& a = pts_[tr.v[(e + 1) % 3]];
                const Vec2& b = pts_[tr.v[(e + 2) % 3]];
                if (orient(a, b, p) < 0.0) {
                    next = tr.nbr[e];
                    break;
                }
            }
            if (next < 0) return t;
            t = next;
        }
        return t; // walk stuck (degenerate input); cavity search still corrects this
    }

    struct T {
        std::array<int, 3> v;
        std::array<int, 3> nbr;
        bool alive;
    };
    std::vector<Vec2> pts_;
    std::vector<T> tris_;
    int hint_ = 0;
};

// deterministic tiny jitter from lattice indices
inline Vec2 lattice_jitter(int ix, int iy) {
    std::uint64_t h = std::uint64_t(ix) * 0x9E3779B97F4A7C15ull ^ std::uint64_t(iy) * 0xC2B2AE3D27D4EB4Full;
    h ^= h >> 33;
    h *= 0xFF51AFD7ED558CCDull;
    h ^= h >> 33;
    const double u = double(h & 0xFFFFFFFFull) / double(0xFFFFFFFFull) - 0.5;
    const double v = double((h >> 32) & 0xFFFFFFFFull) / double(0xFFFFFFFFull) - 0.5;
    return Vec2{u, v};
}

inline double dist_to_segment(const Vec2& p, const Vec2& a, const Vec2& b, Vec2* closest = nullptr) {
    const Vec2 ab = b - a;
    const double t = std::clamp(ab.dot(p - a) / ab.squaredNorm(), 0.0, 1.0);
    const Vec2 q = a + t * ab;
    if (closest) *closest = q;
    return (p - q).norm();
}

} // namespace meshdetail

/// Brute-force structural validation: positive areas, conformity, tag consistency
/// per centroid point-in-curve tests, outer-ring placement. Throws on violation.
inline void validate_mesh(const Mesh2D& m, double tol = 1e-12) {
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : m.triangles) {
        const Vec2 &a = m.nodes[t.v[0]], &b = m.nodes[t.v[1]], &c = m.nodes[t.v[2]];
        if (meshdetail::orient(a, b, c) <= 0.0) throw GeometryError("validate_mesh: non-positive area");
        for (int e = 0; e < 3; ++e) {
            int u = t.v[e], w = t.v[(e + 1) % 3];
            if (u > w) std::swap(u, w);
            edge_count[{u, w}] += 1;
        }
    }
    for (const auto& [edge, cnt] : edge_count)
        if (cnt > 2) throw GeometryError("validate_mesh: non-conforming edge");
    const int nb = m.n_boundary();
    for (int i = 0; i < nb; ++i) {
        const Vec2& p = m.nodes[m.outer_ring[i]];
        if (std::abs(p.norm() - m.R) > tol * std::max(1.0, m.R))
            throw GeometryError("validate_mesh: outer-ring node off the circle");
        const double th = 2.0 * pi * i / nb;
        if ((p - m.R * Vec2{std::cos(th), std::sin(th)}).norm() > 1e-9 * m.R)
            throw GeometryError("validate_mesh: outer ring not equi-angular");
    }
    auto inside_curve = [](const StarCurve& c, const Vec2& p) {
        const Vec2 d = p - c.center;
        return d.norm() < c.radius(std::atan2(d[1], d[0]));
    };
    for (const auto& t : m.triangles) {
        const Vec2 cen = (m.nodes[t.v[0]] + m.nodes[t.v[1]] + m.nodes[t.v[2]]) / 3.0;
        int tag = 0;
        for (std::size_t j = 0; j < m.curves.size(); ++j)
            if (inside_curve(m.curves[j], cen)) tag = int(j) + 1;
        if (tag != t.tag) throw GeometryError("validate_mesh: region tag inconsistent with geometry");
    }
}

namespace meshdetail {

inline Mesh2D generate_once(const std::vector<StarCurve>& curves, double R, double h_target,
                            int min_outer, double pitch_scale) {
    using namespace meshdetail;

    Mesh2D mesh;
    mesh.R = R;
    mesh.curves = curves;
    mesh.target_h = h_target;

    // outer ring
    int nb = std::max(min_outer, int(std::ceil(2.0 * pi * R / h_target)));
    nb = ((nb + 7) / 8) * 8;
    std::vector<Vec2> pts;
    for (int i = 0; i < nb; ++i) {
        const double th = 2.0 * pi * i / nb;
        pts.push_back(R * Vec2{std::cos(th), std::sin(th)});
    }
    // interface rings at uniform curve parameter
    std::vector<std::vector<double>> ring_theta(curves.size());
    for (std::size_t j = 0; j < curves.size(); ++j) {
        double gmax = 0.0;
        for (int i = 0; i < 1024; ++i)
            gmax = std::max(gmax, curves[j].tangent(2.0 * pi * i / 1024.0).norm());
        int nj = std::max(12, int(std::ceil(2.0 * pi * gmax / h_target)));
        nj = ((nj + 3) / 4) * 4;
        for (int i = 0; i < nj; ++i) {
            const double th = 2.0 * pi * i / nj;
            ring_theta[j].push_back(th);
            pts.push_back(curves[j].point(th));
        }
    }

    // boundary polyline segments for the clearance test; per-segment clearance
    // exceeds the diametral radius so every boundary edge is a Gabriel edge
    struct Seg {
        Vec2 a, b;
        double clearance;
    };
    std::vector<Seg> segs;
    auto push_seg = [&segs](const Vec2& a, const Vec2& b) {
        segs.push_back({a, b, 0.56 * (b - a).norm()});
    };
    for (int i = 0; i < nb; ++i) push_seg(pts[i], pts[(i + 1) % nb]);
    {
        int base = nb;
        for (std::size_t j = 0; j < curves.size(); ++j) {
            const int nj = int(ring_theta[j].size());
            for (int i = 0; i < nj; ++i) push_seg(pts[base + i], pts[base + (i + 1) % nj]);
            base += nj;
        }
    }

    // hexagonal bulk lattice with clearance pushes; pitch below h_target keeps
    // boundary-bridging elements within the 1.5 h diameter contract
    const double pitch = 0.8 * h_target * pitch_scale;
    const double hx = pitch, hy = pitch * std::sqrt(3.0) / 2.0;
    const int iy_max = int(std::ceil(R / hy)) + 1;
    const double clear = 0.62 * pitch;
    std::vector<Vec2> bulk;
    for (int iy = -iy_max; iy <= iy_max; ++iy) {
        const double y = iy * hy;
        const double off = (iy & 1) ? 0.5 * hx : 0.0;
        const int ix_max = int(std::ceil(R / hx)) + 1;
        for (int ix = -ix_max; ix <= ix_max; ++ix) {
            Vec2 p{ix * hx + off, y};
            p += 2e-3 * pitch * lattice_jitter(ix, iy);
            if (p.norm() > R - clear) continue;
            // slack relative to each segment's own clearance requirement
            auto min_slack = [&](const Vec2& pt, Vec2* qq, double* target) {
                double smin = 1e300;
                for (const auto& s : segs) {
                    Vec2 q;
                    const double d = dist_to_segment(pt, s.a, s.b, &q);
                    const double req = std::max(s.clearance, clear);
                    if (d - req < smin) {
                        smin = d - req;
                        if (qq) *qq = q;
                        if (target) *target = req;
                    }
                }
                return smin;
            };
            Vec2 qmin = p;
            double req = clear;
            const double slack = min_slack(p, &qmin, &req);
            if (slack < 0.0) {
                const double d = (p - qmin).norm();
                if (d < 0.4 * req) continue;
                p = qmin + (req / d) * (p - qmin);
                // the push can approach a neighbouring segment; drop if it did
                if (min_slack(p, nullptr, nullptr) < -0.05 * req) continue;
            }
            if (p.norm() > R - clear) continue;
            bulk.push_back(p);
        }
    }
    // drop bulk points that collided after pushes
    std::vector<Vec2> accepted;
    for (const auto& p : bulk) {
        bool ok = true;
        for (auto it = accepted.rbegin(); it != accepted.rend(); ++it) {
            if (std::abs((*it)[1] - p[1]) > pitch) break;
            if ((*it - p).norm() < 0.35 * pitch) {
                ok = false;
                break;
            }
        }
        if (ok) accepted.push_back(p);
    }
    for (const auto& p : accepted) pts.push_back(p);

    Delaunay dt(R);
    for (const auto& p : pts) dt.insert(p);
    auto tris = dt.extract();

    mesh.nodes = pts;
    // boundary edge set for flood-fill blocking and presence checks
    std::set<std::pair<int, int>> ring_edges;
    auto add_ring_edge = [&ring_edges](int u, int w) {
        if (u > w) std::swap(u, w);
        ring_edges.insert({u, w});
    };
    for (int i = 0; i < nb; ++i) add_ring_edge(i, (i + 1) % nb);
    {
        int base = nb;
        for (std::size_t j = 0; j < curves.size(); ++j) {
            const int nj = int(ring_theta[j].size());
            Mesh2D::Ring ring;
            for (int i = 0; i < nj; ++i) {
                add_ring_edge(base + i, base + (i + 1) % nj);
                ring.nodes.push_back(base + i);
                ring.theta.push_back(ring_theta[j][i]);
            }
            mesh.interface_rings.push_back(std::move(ring));
            base += nj;
        }
    }
    for (int i = 0; i < nb; ++i) mesh.outer_ring.push_back(i);

    // check every ring edge is present (Gabriel clearance should guarantee it)
    std::set<std::pair<int, int>> present;
    for (const auto& t : tris)
        for (int e = 0; e < 3; ++e) {
            int u = t.v[e], w = t.v[(e + 1) % 3];
            if (u > w) std::swap(u, w);
            present.insert({u, w});
        }
    for (const auto& e : ring_edges)
        if (!present.count(e))
            throw GeometryError("generate: boundary edge lost in triangulation near (" +
                                std::to_string(0.5 * (pts[e.first][0] + pts[e.second][0])) + ", " +
                                std::to_string(0.5 * (pts[e.first][1] + pts[e.second][1])) + ")");

    // drop triangles outside the disk or inside... none exist: hull == outer ring.
    // region tags by flood fill blocked at interface edges
    std::map<std::pair<int, int>, std::array<int, 2>> edge2tri;
    for (std::size_t ti = 0; ti < tris.size(); ++ti)
        for (int e = 0; e < 3; ++e) {
            int u = tris[ti].v[e], w = tris[ti].v[(e + 1) % 3];
            if (u > w) std::swap(u, w);
            auto [it, fresh] = edge2tri.try_emplace({u, w}, std::array<int, 2>{-1, -1});
            it->second[fresh ? 0 : 1] = int(ti);
        }
    std::vector<int> comp(tris.size(), -1);
    int n_comp = 0;
    for (std::size_t seed = 0; seed < tris.size(); ++seed) {
        if (comp[seed] >= 0) continue;
        std::deque<int> q{int(seed)};
        comp[seed] = n_comp;
        while (!q.empty()) {
            const int t = q.front();
            q.pop_front();
            for (int e = 0; e < 3; ++e) {
                int u = tris[t].v[e], w = tris[t].v[(e + 1) % 3];
                if (u > w) std::swap(u, w);
                if (ring_edges.count({u, w})) continue;
                const auto& pair = edge2tri[{u, w}];
                const int other = (pair[0] == t) ? pair[1] : pair[0];
                if (other >= 0 && comp[other] < 0) {
                    comp[other] = n_comp;
                    q.push_back(other);
                }
            }
        }
        ++n_comp;
    }
    auto inside_curve = [&](std::size_t j, const Vec2& p) {
        const Vec2 d = p - curves[j].center;
        return d.norm() < curves[j].radius(std::atan2(d[1], d[0]));
    };
    std::vector<int> comp_tag(n_comp, -1);
    for (std::size_t ti = 0; ti < tris.size(); ++ti) {
        if (comp_tag[comp[ti]] >= 0) continue;
        const Vec2 cen = (pts[tris[ti].v[0]] + pts[tris[ti].v[1]] + pts[tris[ti].v[2]]) / 3.0;
        int tag = 0;
        for (std::size_t j = 0; j < curves.size(); ++j)
            if (inside_curve(j, cen)) tag = int(j) + 1;
        comp_tag[comp[ti]] = tag;
    }
    for (std::size_t ti = 0; ti < tris.size(); ++ti)
        mesh.triangles.push_back({tris[ti].v, comp_tag[comp[ti]]});

    return mesh;
}

} // namespace meshdetail

/// Interface-fitted triangulation. Deterministic: identical inputs give identical
/// meshes. min_outer forces at least that many Gamma_R nodes (rounded up to a
/// multiple of 8 for clean halving under refinement). A lost boundary edge (the
/// clearance construction failing on an unlucky lattice alignment) retries with
/// a deterministically reduced bulk pitch.
inline Mesh2D generate(const std::vector<StarCurve>& curves, double R, double h_target,
                       int min_outer = 16) {
    if (!(h_target > 0.0) || !(h_target < R / 4.0))
        throw GeometryError("generate: require 0 < h_target < R/4");
    validate_curves(curves, R, 1.5 * h_target);
    const double scales[] = {1.0, 0.93, 0.86, 0.79};
    for (double s : scales) {
        try {
            return meshdetail::generate_once(curves, R, h_target, min_outer, s);
        } catch (const GeometryError&) {
            if (s == scales[3]) throw;
        }
    }
    throw GeometryError("generate: unreachable");
}

/// Uniform 1->4 refinement with interface/outer midpoints snapped onto the exact
/// geometry. Invariants (conformity, tags, ring ordering) are preserved.
inline Mesh2D refine(const Mesh2D& m) {
    Mesh2D out;
    out.R = m.R;
    out.curves = m.curves;
    out.target_h = m.target_h / 2.0;
    out.nodes = m.nodes;

    const int nb = m.n_boundary();
    std::map<std::pair<int, int>, int> midpoint;
    // classify ring edges: outer ring angle-midpoints; interface theta-midpoints
    std::map<std::pair<int, int>, Vec2> snap;
    std::map<std::pair<int, int>, double> snap_theta;
    std::map<std::pair<int, int>, int> snap_curve;
    for (int i = 0; i < nb; ++i) {
        int u = m.outer_ring[i], w = m.outer_ring[(i + 1) % nb];
        const double th = 2.0 * pi * (i + 0.5) / nb;
        if (u > w) std::swap(u, w);
        snap[{u, w}] = m.R * Vec2{std::cos(th), std::sin(th)};
    }
    for (std::size_t j = 0; j < m.interface_rings.size(); ++j) {
        const auto& ring = m.interface_rings[j];
        const int nj = int(ring.nodes.size());
        for (int i = 0; i < nj; ++i) {
            int u = ring.nodes[i], w = ring.nodes[(i + 1) % nj];
            double ta = ring.theta[i], tb = ring.theta[(i + 1) % nj];
            if (tb <= ta) tb += 2.0 * pi;
            const double tm = 0.5 * (ta + tb);
            if (u > w) std::swap(u, w);
            snap[{u, w}] = m.curves[j].point(tm);
            snap_theta[{u, w}] = std::fmod(tm, 2.0 * pi);
            snap_curve[{u, w}] = int(j);
        }
    }
    auto mid = [&](int u, int w) {
        int a = u, b = w;
        if (a > b) std::swap(a, b);
        auto it = midpoint.find({a, b});
        if (it != midpoint.end()) return it->second;
        Vec2 p;
        auto sit = snap.find({a, b});
        if (sit != snap.end())
            p = sit->second;
        else
            p = 0.5 * (out.nodes[a] + out.nodes[b]);
        const int id = int(out.nodes.size());
        out.nodes.push_back(p);
        midpoint[{a, b}] = id;
        return id;
    };
    for (const auto& t : m.triangles) {
        const int a = t.v[0], b = t.v[1], c = t.v[2];
        const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        out.triangles.push_back({{a, ab, ca}, t.tag});
        out.triangles.push_back({{ab, b, bc}, t.tag});
        out.triangles.push_back({{ca, bc, c}, t.tag});
        out.triangles.push_back({{ab, bc, ca}, t.tag});
    }
    // rebuilt outer ring: old and midpoints interleaved
    out.outer_ring.resize(2 * nb);
    for (int i = 0; i < nb; ++i) {
        int u = m.outer_ring[i], w = m.outer_ring[(i + 1) % nb];
        out.outer_ring[2 * i] = u;
        if (u > w) std::swap(u, w);
        out.outer_ring[2 * i + 1] = midpoint.at({u, w});
    }
    for (std::size_t j = 0; j < m.interface_rings.size(); ++j) {
        const auto& ring = m.interface_rings[j];
        const int nj = int(ring.nodes.size());
        Mesh2D::Ring r2;
        for (int i = 0; i < nj; ++i) {
            int u = ring.nodes[i], w = ring.nodes[(i + 1) % nj];
            r2.nodes.push_back(u);
            r2.theta.push_back(ring.theta[i]);
            int a = u, b = w;
            if (a > b) std::swap(a, b);
            r2.nodes.push_back(midpoint.at({a, b}));
            r2.theta.push_back(snap_theta.at({a, b}));
        }
        out.interface_rings.push_back(std::move(r2));
    }
    return out;
}

/// Plain-text export: header line, node records "x y", triangle records
/// "v0 v1 v2 tag", then the outer ring and interface rings as index lists.
inline void export_mesh(const Mesh2D& m, std::ostream& os) {
    os << "# elwave mesh v1: nodes, triangles (v0 v1 v2 tag), outer ring, interface rings\n";
    os << "nodes " << m.nodes.size() << "\n";
    os.precision(17);
    for (const auto& p : m.nodes) os << p[0] << " " << p[1] << "\n";
    os << "triangles " << m.triangles.size() << "\n";
    for (const auto& t : m.triangles) os << t.v[0] << " " << t.v[1] << " " << t.v[2] << " " << t.tag << "\n";
    os << "outer_ring " << m.outer_ring.size() << "\n";
    for (int i : m.outer_ring) os << i << "\n";
    os << "interface_rings " << m.interface_rings.size() << "\n";
    for (const auto& r : m.interface_rings) {
        os << r.nodes.size() << "\n";
        for (std::size_t i = 0; i < r.nodes.size(); ++i) os << r.nodes[i] << " " << r.theta[i] << "\n";
    }
}

} // namespace elwave
