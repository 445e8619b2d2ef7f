#include "pmcb/io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

namespace pmcb {

namespace {

struct LineReader {
    std::istream& in;
    long line_no = 0;
    std::string line;

    bool next() {
        while (std::getline(in, line)) {
            ++line_no;
            size_t i = line.find_first_not_of(" \t\r");
            if (i == std::string::npos) continue;
            if (line[i] == '#') continue;
            return true;
        }
        return false;
    }
    [[noreturn]] void bad(const std::string& what) const {
        fail(ErrorCode::ParseError, what + " at line " + std::to_string(line_no), line_no);
    }
};

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

uint64_t parse_u64(const LineReader& r, const std::string& tok, const char* what) {
    if (!tok.empty() && tok[0] == '-')
        fail(ErrorCode::NegativeWeight, std::string(what) + " is negative at line " +
                                            std::to_string(r.line_no), r.line_no);
    uint64_t v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        fail(ErrorCode::ParseError, std::string("bad ") + what + " at line " +
                                        std::to_string(r.line_no), r.line_no);
    return v;
}

// decimal with up to 6 places -> micro-units, exactly
int64_t parse_coord(const LineReader& r, const std::string& tok) {
    bool neg = false;
    size_t i = 0;
    if (i < tok.size() && (tok[i] == '-' || tok[i] == '+')) neg = tok[i++] == '-';
    int64_t ip = 0;
    size_t digits = 0;
    while (i < tok.size() && isdigit(uint8_t(tok[i]))) {
        ip = ip * 10 + (tok[i] - '0');
        ++i; ++digits;
        if (ip > (int64_t(1) << 56)) r.bad("coordinate too large");
    }
    int64_t frac = 0;
    int fd = 0;
    if (i < tok.size() && tok[i] == '.') {
        ++i;
        while (i < tok.size() && isdigit(uint8_t(tok[i]))) {
            if (fd < 6) frac = frac * 10 + (tok[i] - '0');
            else if (tok[i] != '0') r.bad("more than 6 decimal places");
            ++i; ++fd;
        }
    }
    if (i != tok.size() || digits + fd == 0) r.bad("bad coordinate");
    while (fd < 6 && fd > 0) { frac *= 10; ++fd; }
    if (fd == 0) frac = 0;
    int64_t v = ip * 1000000 + frac;
    return neg ? -v : v;
}

std::string coord_to_string(int64_t c) {
    std::string sign = c < 0 ? "-" : "";
    uint64_t a = c < 0 ? uint64_t(-(c + 1)) + 1 : uint64_t(c);
    std::string s = sign + std::to_string(a / 1000000) + ".";
    std::string f = std::to_string(a % 1000000);
    s += std::string(6 - f.size(), '0') + f;
    return s;
}

} // namespace

PlgDocument parse_plg(std::istream& in) {
    LineReader r{in};
    if (!r.next()) fail(ErrorCode::ParseError, "empty PLG input", 0);
    {
        auto t = split_ws(r.line);
        if (t.size() != 2 || t[0] != "PLG" || t[1] != "1") r.bad("expected 'PLG 1' header");
    }
    if (!r.next()) r.bad("missing size line");
    auto sz = split_ws(r.line);
    if (sz.size() != 2) r.bad("expected 'n m'");
    uint64_t n = parse_u64(r, sz[0], "vertex count");
    uint64_t m = parse_u64(r, sz[1], "edge count");

    PlgDocument doc;
    std::unordered_set<uint64_t> seen_ids;
    for (uint64_t i = 0; i < n; ++i) {
        if (!r.next()) r.bad("truncated vertex section");
        auto t = split_ws(r.line);
        if (t.size() != 3) r.bad("expected 'id x y'");
        uint64_t id = parse_u64(r, t[0], "vertex id");
        if (id < 1 || id > n) r.bad("vertex id out of range");
        if (!seen_ids.insert(id).second)
            fail(ErrorCode::DuplicateVertex, "duplicate vertex id at line " +
                                                 std::to_string(r.line_no), r.line_no);
        PlgDocument::Vertex v;
        v.id = uint32_t(id);
        v.pos = Coord{parse_coord(r, t[1]), parse_coord(r, t[2])};
        doc.vertices.push_back(v);
    }
    for (uint64_t i = 0; i < m; ++i) {
        if (!r.next()) r.bad("truncated edge section");
        auto t = split_ws(r.line);
        if (t.size() != 3) r.bad("expected 'u v w'");
        PlgDocument::Edge e;
        e.u = uint32_t(parse_u64(r, t[0], "edge endpoint"));
        e.v = uint32_t(parse_u64(r, t[1], "edge endpoint"));
        if (e.u < 1 || e.u > n || e.v < 1 || e.v > n) r.bad("edge endpoint out of range");
        e.w = parse_u64(r, t[2], "edge weight");
        doc.edges.push_back(e);
    }
    if (r.next()) r.bad("trailing content");
    std::sort(doc.vertices.begin(), doc.vertices.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    return doc;
}

PlgDocument parse_plg_string(const std::string& text) {
    std::istringstream is(text);
    return parse_plg(is);
}

std::string serialize_plg(const PlgDocument& doc) {
    std::string out = "PLG 1\n";
    out += std::to_string(doc.vertices.size()) + " " + std::to_string(doc.edges.size()) + "\n";
    for (const auto& v : doc.vertices)
        out += std::to_string(v.id) + " " + coord_to_string(v.pos.x) + " " +
               coord_to_string(v.pos.y) + "\n";
    for (const auto& e : doc.edges)
        out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + std::to_string(e.w) + "\n";
    return out;
}

PlgDocument to_plg(const PlanarGraph& g) {
    PlgDocument doc;
    for (uint32_t v = 0; v < g.num_vertices(); ++v)
        doc.vertices.push_back({g.label(v), g.coord(v)});
    for (uint32_t e = 0; e < g.num_edges(); ++e)
        doc.edges.push_back(
            {g.label(g.edge(e).u), g.label(g.edge(e).v), g.edge(e).w});
    return doc;
}

PlanarGraph from_plg(const PlgDocument& doc) {
    uint32_t n = uint32_t(doc.vertices.size());
    std::vector<Coord> pts(n);
    for (uint32_t i = 0; i < n; ++i) {
        if (doc.vertices[i].id != i + 1)
            fail(ErrorCode::ParseError, "vertex ids not dense 1..n");
        pts[i] = doc.vertices[i].pos;
    }
    std::vector<EdgeRec> edges;
    for (const auto& e : doc.edges) edges.push_back(EdgeRec{e.u - 1, e.v - 1, e.w});
    return build_embedding(pts, edges);
}

ImcbDocument parse_imcb(std::istream& in) {
    LineReader r{in};
    auto expect_counted = [&](const char* key) -> uint64_t {
        if (!r.next()) r.bad(std::string("missing '") + key + "' section");
        auto t = split_ws(r.line);
        if (t.size() != 2 || t[0] != key) r.bad(std::string("expected '") + key + " <count>'");
        return parse_u64(r, t[1], key);
    };
    if (!r.next()) fail(ErrorCode::ParseError, "empty IMCB input", 0);
    {
        auto t = split_ws(r.line);
        if (t.size() != 2 || t[0] != "IMCB" || t[1] != "1") r.bad("expected 'IMCB 1' header");
    }
    ImcbDocument doc;
    if (!r.next()) r.bad("missing size line");
    auto sz = split_ws(r.line);
    if (sz.size() != 2) r.bad("expected 'n m'");
    doc.n = uint32_t(parse_u64(r, sz[0], "n"));
    doc.m = uint32_t(parse_u64(r, sz[1], "m"));

    uint64_t k = expect_counted("trees");
    for (uint64_t i = 0; i < k; ++i) {
        if (!r.next()) r.bad("truncated tree header");
        auto t = split_ws(r.line);
        if (t.size() != 2 || t[0] != "tree") r.bad("expected 'tree <size>'");
        uint64_t sz2 = parse_u64(r, t[1], "tree size");
        ImcbDocument::Tree tree;
        for (uint64_t j = 0; j < sz2; ++j) {
            if (!r.next()) r.bad("truncated tree");
            auto w = split_ws(r.line);
            if (w.size() != 3) r.bad("expected 'vertex parent_index parent_edge'");
            tree.vertices.push_back(uint32_t(parse_u64(r, w[0], "vertex")));
            tree.parent.push_back(w[1] == "-" ? kNone : uint32_t(parse_u64(r, w[1], "parent")));
            tree.parent_edge.push_back(w[2] == "-" ? kNone
                                                   : uint32_t(parse_u64(r, w[2], "edge")));
        }
        if (tree.vertices.empty()) r.bad("empty tree");
        tree.root = tree.vertices[0];
        doc.trees.push_back(std::move(tree));
    }
    uint64_t nt = expect_counted("triples");
    for (uint64_t i = 0; i < nt; ++i) {
        if (!r.next()) r.bad("truncated triples");
        auto t = split_ws(r.line);
        if (t.size() != 3) r.bad("expected 'tree edge weight'");
        doc.triples.push_back({uint32_t(parse_u64(r, t[0], "tree")),
                               uint32_t(parse_u64(r, t[1], "edge")),
                               parse_u64(r, t[2], "weight")});
    }
    uint64_t nr = expect_counted("regions");
    for (uint64_t i = 0; i < nr; ++i) {
        if (!r.next()) r.bad("truncated regions");
        auto t = split_ws(r.line);
        if (t.size() != 3) r.bad("expected 'parent face triple'");
        auto opt = [&](const std::string& s, const char* what) {
            return s == "-" ? kNone : uint32_t(parse_u64(r, s, what));
        };
        doc.regions.push_back({opt(t[0], "parent"), opt(t[1], "face"), opt(t[2], "triple")});
    }
    if (r.next()) r.bad("trailing content");
    return doc;
}

ImcbDocument parse_imcb_string(const std::string& text) {
    std::istringstream is(text);
    return parse_imcb(is);
}

std::string serialize_imcb(const ImcbDocument& doc) {
    std::string out = "IMCB 1\n";
    out += std::to_string(doc.n) + " " + std::to_string(doc.m) + "\n";
    out += "trees " + std::to_string(doc.trees.size()) + "\n";
    auto opt = [](uint32_t v) { return v == kNone ? std::string("-") : std::to_string(v); };
    for (const auto& t : doc.trees) {
        out += "tree " + std::to_string(t.vertices.size()) + "\n";
        for (size_t i = 0; i < t.vertices.size(); ++i)
            out += std::to_string(t.vertices[i]) + " " + opt(t.parent[i]) + " " +
                   opt(t.parent_edge[i]) + "\n";
    }
    out += "triples " + std::to_string(doc.triples.size()) + "\n";
    for (const auto& t : doc.triples)
        out += std::to_string(t.tree) + " " + std::to_string(t.edge) + " " +
               std::to_string(t.w) + "\n";
    out += "regions " + std::to_string(doc.regions.size()) + "\n";
    for (const auto& rgn : doc.regions)
        out += opt(rgn.parent) + " " + opt(rgn.face) + " " + opt(rgn.triple) + "\n";
    return out;
}

PlanarGraph gen_lower_bound(uint32_t n) {
    if (n < 3) fail(ErrorCode::TooSmall, "lower-bound family needs n >= 3");
    // v2..vn on a convex arc, v1 below; chords from v1 stay inside the fan
    std::vector<Coord> pts(n);
    for (uint32_t j = 1; j < n; ++j) {
        int64_t x = int64_t(j) * 1000000;
        int64_t dx = int64_t(j) - int64_t(n / 2);
        pts[j] = Coord{x, dx * dx * 1000};
    }
    pts[0] = Coord{int64_t(n / 2) * 1000000, -int64_t(n) * int64_t(n) * 1000000};
    std::vector<EdgeRec> edges;
    // path edges e_i = (v_i, v_{i+1}) of weight 0
    edges.push_back(EdgeRec{0, 1, 0});
    for (uint32_t i = 1; i + 1 < n; ++i) edges.push_back(EdgeRec{i, i + 1, 0});
    // chords e_i' = (v_1, v_{i+2}) of weight 1
    for (uint32_t i = 0; i + 2 < n; ++i) edges.push_back(EdgeRec{0, i + 2, 1});
    return build_embedding(pts, edges);
}

PlanarGraph gen_random_planar(uint32_t n, uint64_t seed, RandomPlanarOptions opt) {
    if (n < 3) fail(ErrorCode::TooSmall, "need n >= 3");
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 12345);
    std::uniform_int_distribution<int64_t> dist(0, (int64_t(1) << 20) - 1);
    std::vector<Coord> pts;
    std::unordered_set<uint64_t> used;
    pts.reserve(n);
    while (pts.size() < n) {
        Coord p{dist(rng), dist(rng)};
        if (used.insert(uint64_t(p.x) << 21 | uint64_t(p.y)).second) pts.push_back(p);
    }
    std::vector<EdgeRec> edges = delaunay_edges(pts);

    if (opt.thin_to > 0) {
        uint32_t target = std::max<uint32_t>(n - 1, uint32_t(opt.thin_to * n));
        if (target < edges.size()) {
            // keep a random spanning tree, then add random extras up to target
            std::vector<uint32_t> order(edges.size());
            std::iota(order.begin(), order.end(), 0u);
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<uint32_t> uf(n);
            std::iota(uf.begin(), uf.end(), 0u);
            auto find = [&](uint32_t x) {
                while (uf[x] != x) { uf[x] = uf[uf[x]]; x = uf[x]; }
                return x;
            };
            std::vector<char> keep(edges.size(), 0);
            uint32_t kept = 0;
            for (uint32_t e : order) {
                uint32_t a = find(edges[e].u), b = find(edges[e].v);
                if (a != b) { uf[a] = b; keep[e] = 1; ++kept; }
            }
            for (uint32_t e : order) {
                if (kept >= target) break;
                if (!keep[e]) { keep[e] = 1; ++kept; }
            }
            std::vector<EdgeRec> thinned;
            for (uint32_t e = 0; e < edges.size(); ++e)
                if (keep[e]) thinned.push_back(edges[e]);
            edges = std::move(thinned);
        }
    }
    std::sort(edges.begin(), edges.end(), [](const EdgeRec& a, const EdgeRec& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    std::uniform_int_distribution<uint64_t> wdist(0, opt.max_weight);
    for (auto& e : edges) e.w = opt.unweighted ? 1 : wdist(rng);

    // generators produce known-plane drawings; skip the crossing scan by
    // assembling from the angular sort directly
    std::vector<std::vector<uint32_t>> rot(n);
    for (uint32_t e = 0; e < edges.size(); ++e) {
        rot[edges[e].u].push_back(2 * e);
        rot[edges[e].v].push_back(2 * e + 1);
    }
    for (uint32_t v = 0; v < n; ++v) {
        auto& r = rot[v];
        std::sort(r.begin(), r.end(), [&](uint32_t d1, uint32_t d2) {
            uint32_t h1 = (d1 & 1) ? edges[d1 >> 1].u : edges[d1 >> 1].v;
            uint32_t h2 = (d2 & 1) ? edges[d2 >> 1].u : edges[d2 >> 1].v;
            return angle_less(pts[h1].x - pts[v].x, pts[h1].y - pts[v].y,
                              pts[h2].x - pts[v].x, pts[h2].y - pts[v].y);
        });
    }
    return assemble_plane_graph(n, std::move(edges), std::move(rot), std::move(pts));
}

} // namespace pmcb
