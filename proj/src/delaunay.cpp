#include "pmcb/io.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <numeric>

#include "pmcb/geometry.hpp"

namespace pmcb {

namespace {

// Incremental Bowyer-Watson on exact integer coordinates. Triangles are
// stored in a soup with neighbour links; point location walks from the last
// touched triangle. Ghost handling via a large bounding triangle whose
// vertices are removed at the end.

struct Tri {
    std::array<uint32_t, 3> v;
    std::array<uint32_t, 3> nb;  // nb[i] opposite v[i]
    bool alive = true;
};

struct Triangulator {
    std::vector<Coord> pts;
    std::vector<Tri> tris;
    uint32_t last = 0;

    int orient3(uint32_t a, uint32_t b, uint32_t c) const {
        return orient(pts[a], pts[b], pts[c]);
    }

    // d strictly inside the circumcircle of (a,b,c) (counterclockwise)
    bool in_circle(uint32_t a, uint32_t b, uint32_t c, uint32_t d) const {
        const Coord &pa = pts[a], &pb = pts[b], &pc = pts[c], &pd = pts[d];
        int128 adx = pa.x - pd.x, ady = pa.y - pd.y;
        int128 bdx = pb.x - pd.x, bdy = pb.y - pd.y;
        int128 cdx = pc.x - pd.x, cdy = pc.y - pd.y;
        int128 ad = adx * adx + ady * ady;
        int128 bd = bdx * bdx + bdy * bdy;
        int128 cd = cdx * cdx + cdy * cdy;
        int128 det = adx * (bdy * cd - cdy * bd) - ady * (bdx * cd - cdx * bd) +
                     ad * (bdx * cdy - cdx * bdy);
        return det > 0;
    }

    uint32_t locate(uint32_t p) {
        uint32_t t = last;
        for (size_t steps = 0; steps < tris.size() + 4; ++steps) {
            if (!tris[t].alive) { t = first_alive(); continue; }
            bool moved = false;
            for (int i = 0; i < 3; ++i) {
                uint32_t a = tris[t].v[(i + 1) % 3], b = tris[t].v[(i + 2) % 3];
                if (orient3(a, b, p) < 0) {
                    t = tris[t].nb[i];
                    moved = true;
                    break;
                }
            }
            if (!moved) return t;
        }
        // fallback: linear scan (degenerate walks)
        for (uint32_t t2 = 0; t2 < tris.size(); ++t2) {
            if (!tris[t2].alive) continue;
            bool in = true;
            for (int i = 0; i < 3; ++i) {
                uint32_t a = tris[t2].v[(i + 1) % 3], b = tris[t2].v[(i + 2) % 3];
                if (orient3(a, b, p) < 0) { in = false; break; }
            }
            if (in) return t2;
        }
        fail(ErrorCode::Internal, "delaunay point location failed");
    }

    uint32_t first_alive() const {
        for (uint32_t t = 0; t < tris.size(); ++t)
            if (tris[t].alive) return t;
        return 0;
    }

    void insert(uint32_t p) {
        uint32_t seed = locate(p);
        // cavity: BFS over triangles whose circumcircle contains p
        std::vector<uint32_t> cavity;
        std::vector<uint32_t> stack{seed};
        std::vector<char> in_cavity(tris.size(), 0);
        in_cavity[seed] = 1;
        while (!stack.empty()) {
            uint32_t t = stack.back();
            stack.pop_back();
            cavity.push_back(t);
            for (int i = 0; i < 3; ++i) {
                uint32_t nt = tris[t].nb[i];
                if (nt == kNone || !tris[nt].alive || in_cavity[nt]) continue;
                if (in_circle(tris[nt].v[0], tris[nt].v[1], tris[nt].v[2], p)) {
                    in_cavity[nt] = 1;
                    stack.push_back(nt);
                }
            }
        }
        // boundary of the cavity: directed edges (a,b) with outside neighbour
        struct Hole { uint32_t a, b, outside; };
        std::vector<Hole> border;
        for (uint32_t t : cavity) {
            for (int i = 0; i < 3; ++i) {
                uint32_t nt = tris[t].nb[i];
                if (nt != kNone && in_cavity[nt]) continue;
                border.push_back(Hole{tris[t].v[(i + 1) % 3], tris[t].v[(i + 2) % 3], nt});
            }
            tris[t].alive = false;
        }
        // retriangulate: fan from p. New triangle for hole edge (a,b) is
        // (p,a,b), counterclockwise since the cavity lies left of (a,b).
        std::vector<uint32_t> fresh;
        std::vector<std::pair<uint32_t, uint32_t>> start_of;  // hole start vertex -> tri
        for (const Hole& h : border) {
            uint32_t t = uint32_t(tris.size());
            tris.push_back(Tri{{p, h.a, h.b}, {h.outside, kNone, kNone}, true});
            in_cavity.push_back(0);
            if (h.outside != kNone) {
                for (int i = 0; i < 3; ++i) {
                    uint32_t a = tris[h.outside].v[(i + 1) % 3];
                    uint32_t b = tris[h.outside].v[(i + 2) % 3];
                    if (a == h.b && b == h.a) tris[h.outside].nb[i] = t;
                }
            }
            start_of.emplace_back(h.a, t);
            fresh.push_back(t);
        }
        auto tri_starting_at = [&](uint32_t v) {
            for (auto [a, t] : start_of)
                if (a == v) return t;
            fail(ErrorCode::Internal, "cavity boundary not a cycle");
        };
        for (uint32_t t : fresh) {
            // nb[1] across edge (b,p): the fan triangle starting at b
            // nb[2] across edge (p,a): the fan triangle ending at a
            tris[t].nb[1] = tri_starting_at(tris[t].v[2]);
            tris[tris[t].nb[1]].nb[2] = t;
        }
        last = fresh.empty() ? first_alive() : fresh[0];
    }
};

} // namespace

std::vector<EdgeRec> delaunay_edges(const std::vector<Coord>& pts) {
    uint32_t n = uint32_t(pts.size());
    if (n < 3) {
        std::vector<EdgeRec> out;
        if (n == 2) out.push_back(EdgeRec{0, 1, 0});
        return out;
    }
    int64_t lim = 0;
    for (const auto& p : pts) lim = std::max({lim, std::abs(p.x), std::abs(p.y)});
    int64_t big = 4 * lim + 16;

    Triangulator tr;
    tr.pts = pts;
    uint32_t s0 = n, s1 = n + 1, s2 = n + 2;
    tr.pts.push_back(Coord{-3 * big, -big});
    tr.pts.push_back(Coord{3 * big, -big});
    tr.pts.push_back(Coord{0, 3 * big});
    tr.tris.push_back(Tri{{s0, s1, s2}, {kNone, kNone, kNone}, true});

    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    // deterministic shuffle for expected near-linear behaviour
    uint64_t st = 0x9e3779b97f4a7c15ull;
    for (uint32_t i = n; i > 1; --i) {
        st ^= st << 13; st ^= st >> 7; st ^= st << 17;
        std::swap(order[i - 1], order[st % i]);
    }
    for (uint32_t p : order) tr.insert(p);

    std::vector<EdgeRec> edges;
    for (const Tri& t : tr.tris) {
        if (!t.alive) continue;
        for (int i = 0; i < 3; ++i) {
            uint32_t a = t.v[i], b = t.v[(i + 1) % 3];
            if (a >= n || b >= n || a > b) continue;
            edges.push_back(EdgeRec{a, b, 0});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const EdgeRec& x, const EdgeRec& y) {
        return std::pair(x.u, x.v) < std::pair(y.u, y.v);
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const EdgeRec& x, const EdgeRec& y) {
                                return x.u == y.u && x.v == y.v;
                            }),
                edges.end());
    return edges;
}

} // namespace pmcb
