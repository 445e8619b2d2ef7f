#ifndef PMCB_GEOMETRY_HPP
#define PMCB_GEOMETRY_HPP

#include <cstdint>
#include <tuple>

namespace pmcb {

// Coordinates are stored in exact micro-units (decimal input scaled by 1e6),
// so every geometric predicate below is evaluated in exact integer arithmetic.
struct Coord {
    int64_t x = 0;
    int64_t y = 0;

    friend bool operator==(const Coord& a, const Coord& b) = default;
    friend auto operator<=>(const Coord& a, const Coord& b) = default;
};

using int128 = __int128;

inline int128 cross(const Coord& o, const Coord& a, const Coord& b) {
    return int128(a.x - o.x) * (b.y - o.y) - int128(a.y - o.y) * (b.x - o.x);
}

/// Sign of the orientation of the triple (o, a, b): +1 counterclockwise,
/// -1 clockwise, 0 collinear.
inline int orient(const Coord& o, const Coord& a, const Coord& b) {
    int128 c = cross(o, a, b);
    return c > 0 ? 1 : (c < 0 ? -1 : 0);
}

/// Half-plane index used for angular sorting: 0 for directions in
/// (-90, 90] degrees measured from positive x, 1 for the rest.
inline int angle_half(int64_t dx, int64_t dy) {
    if (dy < 0 || (dy == 0 && dx < 0)) return 1;
    return 0;
}

/// Compares direction vectors (dx1,dy1) and (dx2,dy2) by counterclockwise
/// angle from the positive x axis. Exact; vectors must be nonzero.
inline bool angle_less(int64_t dx1, int64_t dy1, int64_t dx2, int64_t dy2) {
    int h1 = angle_half(dx1, dy1), h2 = angle_half(dx2, dy2);
    if (h1 != h2) return h1 < h2;
    int128 c = int128(dx1) * dy2 - int128(dy1) * dx2;
    return c > 0;
}

} // namespace pmcb

#endif
