#include "bqlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bq::geom {

double signed_area(const Polygon& p)
{
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += cross(p[i], p[(i + 1) % p.size()]);
    return 0.5 * s;
}

double area(const Polygon& p) { return std::abs(signed_area(p)); }

bool is_convex(const Polygon& p, double tol)
{
    if (p.size() < 3) return false;
    int sign = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Point2 e1 = p[(i + 1) % p.size()] - p[i];
        const Point2 e2 = p[(i + 2) % p.size()] - p[(i + 1) % p.size()];
        const double c = cross(e1, e2);
        const double scale = std::hypot(e1.x, e1.y) * std::hypot(e2.x, e2.y);
        if (std::abs(c) <= tol * scale) continue;
        const int sg = c > 0 ? 1 : -1;
        if (sign == 0) sign = sg;
        else if (sg != sign) return false;
    }
    return sign != 0;
}

Polygon convex_hull(std::vector<Point2> pts)
{
    std::sort(pts.begin(), pts.end(),
              [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) return pts;
    Polygon hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip)
{
    Polygon out = subject;
    for (std::size_t i = 0; i < clip.size() && !out.empty(); ++i) {
        const Point2 a = clip[i], b = clip[(i + 1) % clip.size()];
        const Point2 edge = b - a;
        auto inside = [&](const Point2& p) { return cross(edge, p - a) >= 0.0; };
        auto intersect = [&](const Point2& p, const Point2& q) {
            const double dp = cross(edge, p - a), dq = cross(edge, q - a);
            return p + (q - p) * (dp / (dp - dq));
        };
        Polygon in = std::move(out);
        out.clear();
        for (std::size_t j = 0; j < in.size(); ++j) {
            const Point2 cur = in[j], prev = in[(j + in.size() - 1) % in.size()];
            if (inside(cur)) {
                if (!inside(prev)) out.push_back(intersect(prev, cur));
                out.push_back(cur);
            } else if (inside(prev)) {
                out.push_back(intersect(prev, cur));
            }
        }
    }
    return out;
}

namespace {

Polygon ccw(const Polygon& p) { return signed_area(p) < 0 ? Polygon(p.rbegin(), p.rend()) : p; }

void require_valid(const Polygon& p, const char* which)
{
    if (p.size() > 8)
        throw std::invalid_argument(std::string("polygon_overlap_area: ") + which +
                                    " has more than 8 vertices");
    if (!is_convex(p))
        throw std::invalid_argument(std::string("polygon_overlap_area: ") + which +
                                    " is not convex");
    if (area(p) == 0.0)
        throw std::invalid_argument(std::string("polygon_overlap_area: ") + which +
                                    " has zero area");
}

} // namespace

double polygon_overlap_area(const Polygon& P, const Polygon& Q)
{
    require_valid(P, "P");
    require_valid(Q, "Q");
    const Polygon r = clip_convex(ccw(P), ccw(Q));
    return r.size() < 3 ? 0.0 : area(r);
}

Polygon minkowski_sum(const Polygon& P, const Polygon& Q)
{
    std::vector<Point2> pts;
    pts.reserve(P.size() * Q.size());
    for (const auto& p : P)
        for (const auto& q : Q) pts.push_back(p + q);
    return convex_hull(std::move(pts));
}

Polygon translate(const Polygon& p, const Point2& by)
{
    Polygon out(p);
    for (auto& v : out) v = v + by;
    return out;
}

Polygon negate(const Polygon& p)
{
    Polygon out(p);
    for (auto& v : out) v = -v;
    return out;
}

bool contains(const Polygon& p, const Point2& q, double tol)
{
    const Polygon c = ccw(p);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Point2 a = c[i], b = c[(i + 1) % c.size()];
        const Point2 e = b - a;
        if (cross(e, q - a) < -tol * std::hypot(e.x, e.y)) return false;
    }
    return true;
}

} // namespace bq::geom
