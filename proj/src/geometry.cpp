#include "cpforge/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cpforge::geom {

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
double dist(Vec2 a, Vec2 b) { return norm(a - b); }

PlanarIsometry PlanarIsometry::compose(const PlanarIsometry& o) const {
    PlanarIsometry r;
    r.linear[0] = linear[0] * o.linear[0] + linear[1] * o.linear[2];
    r.linear[1] = linear[0] * o.linear[1] + linear[1] * o.linear[3];
    r.linear[2] = linear[2] * o.linear[0] + linear[3] * o.linear[2];
    r.linear[3] = linear[2] * o.linear[1] + linear[3] * o.linear[3];
    r.translation = {linear[0] * o.translation.x + linear[1] * o.translation.y + translation.x,
                     linear[2] * o.translation.x + linear[3] * o.translation.y + translation.y};
    r.parity = parity * o.parity;
    return r;
}

bool PlanarIsometry::approx_equal(const PlanarIsometry& o, double tol) const {
    for (int i = 0; i < 4; ++i) {
        if (std::abs(linear[i] - o.linear[i]) > tol) return false;
    }
    return std::abs(translation.x - o.translation.x) <= tol &&
           std::abs(translation.y - o.translation.y) <= tol;
}

bool PlanarIsometry::is_orthogonal(double tol) const {
    const double a = linear[0], b = linear[1], c = linear[2], d = linear[3];
    return std::abs(a * a + c * c - 1.0) <= tol && std::abs(b * b + d * d - 1.0) <= tol &&
           std::abs(a * b + c * d) <= tol;
}

PlanarIsometry reflect_across(Vec2 point, Vec2 dir) {
    const double len2 = dot(dir, dir);
    if (len2 <= kEps * kEps) {
        throw std::invalid_argument("reflect_across: zero direction");
    }
    PlanarIsometry r;
    const double dx = dir.x, dy = dir.y;
    r.linear = {(dx * dx - dy * dy) / len2, 2.0 * dx * dy / len2,
                2.0 * dx * dy / len2, (dy * dy - dx * dx) / len2};
    const Vec2 mp = {r.linear[0] * point.x + r.linear[1] * point.y,
                     r.linear[2] * point.x + r.linear[3] * point.y};
    r.translation = point - mp;
    r.parity = -1;
    return r;
}

double signed_area(const Polygon& poly) {
    double a = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        a += cross(p, q);
    }
    return 0.5 * a;
}

Vec2 centroid(const Polygon& poly) {
    const double a = signed_area(poly);
    if (std::abs(a) <= kEps * kEps) {
        // Degenerate: fall back to vertex mean.
        Vec2 m{0, 0};
        for (const Vec2& p : poly) m = m + p;
        return m * (1.0 / static_cast<double>(poly.size()));
    }
    Vec2 c{0, 0};
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const double w = cross(p, q);
        c.x += (p.x + q.x) * w;
        c.y += (p.y + q.y) * w;
    }
    return c * (1.0 / (6.0 * a));
}

namespace {

bool point_on_segment(Vec2 p, Vec2 a, Vec2 b, double eps) {
    const Vec2 d = b - a;
    const double len2 = dot(d, d);
    if (len2 <= eps * eps) return dist(p, a) <= eps;
    const double t = dot(p - a, d) / len2;
    if (t < -eps || t > 1.0 + eps) return false;
    const Vec2 proj = a + d * std::clamp(t, 0.0, 1.0);
    return dist(p, proj) <= eps;
}

// Open-interval variant: p strictly between a and b.
bool point_in_segment_interior(Vec2 p, Vec2 a, Vec2 b, double eps) {
    return point_on_segment(p, a, b, eps) && dist(p, a) > eps && dist(p, b) > eps;
}

struct SegHit {
    bool crossing = false;   // single intersection point
    bool collinear = false;  // segments on the same line
    Vec2 point{0, 0};
};

SegHit intersect_segments(Vec2 p1, Vec2 p2, Vec2 p3, Vec2 p4) {
    SegHit hit;
    const Vec2 d1 = p2 - p1, d2 = p4 - p3;
    const double denom = cross(d1, d2);
    const double len1 = norm(d1), len2 = norm(d2);
    if (std::abs(denom) <= kEps * std::max(1.0, len1 * len2)) {
        // Parallel. Collinear iff p3 lies on line(p1,p2).
        if (len1 > kEps && std::abs(cross(p3 - p1, d1)) <= kEps * len1) {
            hit.collinear = true;
        }
        return hit;
    }
    const double t = cross(p3 - p1, d2) / denom;
    const Vec2 x = p1 + d1 * t;
    if (point_on_segment(x, p1, p2, kEps) && point_on_segment(x, p3, p4, kEps)) {
        hit.crossing = true;
        hit.point = x;
    }
    return hit;
}

}  // namespace

bool is_simple_polygon(const Polygon& poly) {
    const size_t n = poly.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        if (dist(poly[i], poly[(i + 1) % n]) <= kEps) return false;
    }
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            const SegHit h = intersect_segments(poly[i], poly[(i + 1) % n],
                                                poly[j], poly[(j + 1) % n]);
            if (adjacent) {
                if (h.collinear &&
                    point_in_segment_interior(poly[(i + 1) % n] == poly[j] ? poly[(j + 1) % n]
                                                                           : poly[i],
                                              poly[i], poly[(i + 1) % n], kEps)) {
                    return false;
                }
                continue;
            }
            if (h.crossing || h.collinear) {
                if (h.collinear) {
                    // Disjoint collinear segments are fine.
                    if (point_on_segment(poly[j], poly[i], poly[(i + 1) % n], kEps) ||
                        point_on_segment(poly[(j + 1) % n], poly[i], poly[(i + 1) % n], kEps) ||
                        point_on_segment(poly[i], poly[j], poly[(j + 1) % n], kEps)) {
                        return false;
                    }
                    continue;
                }
                return false;
            }
        }
    }
    return true;
}

bool point_strictly_inside(const Polygon& poly, Vec2 p) {
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        if (point_on_segment(p, poly[i], poly[(i + 1) % n], kEps)) return false;
    }
    // Crossing-number test.
    bool inside = false;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = poly[i], b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

namespace {

// Ear-clipping triangulation of a simple polygon (input orientation free).
std::vector<std::array<Vec2, 3>> triangulate(Polygon poly) {
    std::vector<std::array<Vec2, 3>> tris;
    if (poly.size() < 3) return tris;
    if (signed_area(poly) < 0) std::reverse(poly.begin(), poly.end());

    std::vector<int> idx(poly.size());
    for (size_t i = 0; i < poly.size(); ++i) idx[i] = static_cast<int>(i);

    auto is_ear = [&](size_t k) {
        const size_t n = idx.size();
        const Vec2 a = poly[idx[(k + n - 1) % n]];
        const Vec2 b = poly[idx[k]];
        const Vec2 c = poly[idx[(k + 1) % n]];
        if (cross(b - a, c - b) <= kEps) return false;  // reflex or degenerate
        for (size_t m = 0; m < n; ++m) {
            if (m == k || m == (k + n - 1) % n || m == (k + 1) % n) continue;
            const Vec2 p = poly[idx[m]];
            const double s1 = cross(b - a, p - a);
            const double s2 = cross(c - b, p - b);
            const double s3 = cross(a - c, p - c);
            if (s1 > -kEps && s2 > -kEps && s3 > -kEps) return false;
        }
        return true;
    };

    size_t guard = 0;
    while (idx.size() > 3 && guard < poly.size() * poly.size() + 16) {
        bool clipped = false;
        for (size_t k = 0; k < idx.size(); ++k) {
            if (is_ear(k)) {
                const size_t n = idx.size();
                tris.push_back({poly[idx[(k + n - 1) % n]], poly[idx[k]],
                                poly[idx[(k + 1) % n]]});
                idx.erase(idx.begin() + static_cast<long>(k));
                clipped = true;
                break;
            }
        }
        if (!clipped) break;
        ++guard;
    }
    if (idx.size() == 3) {
        tris.push_back({poly[idx[0]], poly[idx[1]], poly[idx[2]]});
    }
    return tris;
}

// Sutherland-Hodgman: clip `subject` by the half-plane left of (a,b).
Polygon clip_halfplane(const Polygon& subject, Vec2 a, Vec2 b) {
    Polygon out;
    const size_t n = subject.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2 cur = subject[i];
        const Vec2 prev = subject[(i + n - 1) % n];
        const double dc = cross(b - a, cur - a);
        const double dp = cross(b - a, prev - a);
        const bool cin = dc >= -kEps;
        const bool pin = dp >= -kEps;
        if (cin) {
            if (!pin) {
                const double t = dp / (dp - dc);
                out.push_back(prev + (cur - prev) * t);
            }
            out.push_back(cur);
        } else if (pin) {
            const double t = dp / (dp - dc);
            out.push_back(prev + (cur - prev) * t);
        }
    }
    return out;
}

double convex_clip_area(const std::array<Vec2, 3>& t1, const std::array<Vec2, 3>& t2) {
    Polygon subject(t1.begin(), t1.end());
    if (signed_area(subject) < 0) std::reverse(subject.begin(), subject.end());
    Polygon clip(t2.begin(), t2.end());
    if (signed_area(clip) < 0) std::reverse(clip.begin(), clip.end());
    for (size_t i = 0; i < clip.size() && !subject.empty(); ++i) {
        subject = clip_halfplane(subject, clip[i], clip[(i + 1) % clip.size()]);
    }
    if (subject.size() < 3) return 0.0;
    return std::abs(signed_area(subject));
}

}  // namespace

Vec2 interior_point(const Polygon& poly) {
    const Vec2 c = centroid(poly);
    if (point_strictly_inside(poly, c)) return c;
    const auto tris = triangulate(poly);
    for (const auto& t : tris) {
        const Vec2 m = {(t[0].x + t[1].x + t[2].x) / 3.0, (t[0].y + t[1].y + t[2].y) / 3.0};
        if (point_strictly_inside(poly, m)) return m;
    }
    return c;
}

double polygon_overlap(const Polygon& a, const Polygon& b) {
    if (!is_simple_polygon(a) || !is_simple_polygon(b)) {
        throw std::invalid_argument("polygon_overlap: input polygon is not simple");
    }
    const auto ta = triangulate(a);
    const auto tb = triangulate(b);
    double area = 0.0;
    for (const auto& x : ta) {
        for (const auto& y : tb) {
            area += convex_clip_area(x, y);
        }
    }
    // Clamp numeric fuzz from shared boundaries.
    return area <= 4.0 * kEps ? 0.0 : area;
}

std::optional<std::pair<Vec2, Vec2>> clip_segment_to_polygon(Vec2 a, Vec2 b,
                                                             const Polygon& poly) {
    const double len = dist(a, b);
    if (len <= kEps) return std::nullopt;
    std::vector<double> ts = {0.0, 1.0};
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const SegHit h = intersect_segments(a, b, poly[i], poly[(i + 1) % n]);
        if (h.crossing) {
            ts.push_back(std::clamp(dot(h.point - a, b - a) / (len * len), 0.0, 1.0));
        } else if (h.collinear) {
            for (const Vec2 p : {poly[i], poly[(i + 1) % n]}) {
                if (point_on_segment(p, a, b, kEps)) {
                    ts.push_back(std::clamp(dot(p - a, b - a) / (len * len), 0.0, 1.0));
                }
            }
        }
    }
    std::sort(ts.begin(), ts.end());
    double best_len = 0.0;
    std::pair<Vec2, Vec2> best;
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
        const double t0 = ts[i], t1 = ts[i + 1];
        if ((t1 - t0) * len <= kEps) continue;
        const Vec2 p0 = a + (b - a) * t0;
        const Vec2 p1 = a + (b - a) * t1;
        const Vec2 mid = a + (b - a) * (0.5 * (t0 + t1));
        if (point_strictly_inside(poly, mid)) {
            const double l = (t1 - t0) * len;
            if (l > best_len + kEps) {
                best_len = l;
                best = {p0, p1};
            }
        }
    }
    if (best_len <= kEps) return std::nullopt;
    return best;
}

int PlanarSubdivision::find_point(Vec2 p) const {
    for (size_t i = 0; i < points_.size(); ++i) {
        if (dist(points_[i], p) <= snap_) return static_cast<int>(i);
    }
    return -1;
}

int PlanarSubdivision::add_point(Vec2 p) {
    const int found = find_point(p);
    if (found >= 0) return found;
    points_.push_back(p);
    return static_cast<int>(points_.size() - 1);
}

void PlanarSubdivision::insert_edge(int a, int b) {
    if (a == b) return;
    const auto key = std::minmax(a, b);
    for (const auto& e : edges_) {
        if (std::minmax(e.first, e.second) == key) return;
    }
    edges_.emplace_back(a, b);
}

void PlanarSubdivision::add_segment(Vec2 pa, Vec2 pb) {
    const int ia = add_point(pa);
    const int ib = add_point(pb);
    if (ia == ib) return;
    const Vec2 a = points_[ia], b = points_[ib];

    // Split existing edges crossed by (a, b) or touched by its endpoints.
    const size_t n_edges = edges_.size();
    for (size_t ei = 0; ei < n_edges; ++ei) {
        auto [u, v] = edges_[ei];
        const Vec2 pu = points_[u], pv = points_[v];
        std::vector<int> splits;
        const SegHit h = intersect_segments(a, b, pu, pv);
        if (h.crossing) {
            if (point_in_segment_interior(h.point, pu, pv, snap_)) {
                splits.push_back(add_point(h.point));
            }
        } else if (h.collinear) {
            for (const int cand : {ia, ib}) {
                if (point_in_segment_interior(points_[cand], pu, pv, snap_)) {
                    splits.push_back(cand);
                }
            }
        }
        if (splits.empty()) continue;
        // Order split points along (u, v) and re-chain the edge.
        std::sort(splits.begin(), splits.end(), [&](int x, int y) {
            return dot(points_[x] - pu, pv - pu) < dot(points_[y] - pu, pv - pu);
        });
        splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
        int prev = u;
        edges_[ei] = {u, splits.front()};
        prev = splits.front();
        for (size_t k = 1; k < splits.size(); ++k) {
            insert_edge(prev, splits[k]);
            prev = splits[k];
        }
        insert_edge(prev, v);
    }

    // Chain the new segment through every point lying on it.
    std::vector<int> chain;
    for (size_t pi = 0; pi < points_.size(); ++pi) {
        if (point_on_segment(points_[pi], a, b, snap_)) chain.push_back(static_cast<int>(pi));
    }
    std::sort(chain.begin(), chain.end(), [&](int x, int y) {
        return dot(points_[x] - a, b - a) < dot(points_[y] - a, b - a);
    });
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
        insert_edge(chain[k], chain[k + 1]);
    }
}

std::vector<std::vector<int>> PlanarSubdivision::bounded_faces() const {
    struct Half {
        int from, to;
    };
    std::vector<Half> halves;
    halves.reserve(edges_.size() * 2);
    for (const auto& [u, v] : edges_) {
        halves.push_back({u, v});
        halves.push_back({v, u});
    }
    // Outgoing half-edges per vertex, sorted counterclockwise.
    std::map<int, std::vector<int>> out;
    for (size_t h = 0; h < halves.size(); ++h) {
        out[halves[h].from].push_back(static_cast<int>(h));
    }
    for (auto& [v, list] : out) {
        std::sort(list.begin(), list.end(), [&](int x, int y) {
            const Vec2 dx = points_[halves[x].to] - points_[halves[x].from];
            const Vec2 dy = points_[halves[y].to] - points_[halves[y].from];
            return std::atan2(dx.y, dx.x) < std::atan2(dy.y, dy.x);
        });
    }
    // next(u->v) = the outgoing edge at v one step clockwise from (v->u);
    // this keeps the face interior on the left.
    auto next_half = [&](int h) {
        const int v = halves[h].to;
        const int u = halves[h].from;
        const auto& list = out.at(v);
        int pos = -1;
        for (size_t k = 0; k < list.size(); ++k) {
            if (halves[list[k]].to == u) {
                pos = static_cast<int>(k);
                break;
            }
        }
        const int n = static_cast<int>(list.size());
        return list[(pos - 1 + n) % n];
    };

    std::vector<bool> visited(halves.size(), false);
    std::vector<std::vector<int>> faces;
    for (size_t h0 = 0; h0 < halves.size(); ++h0) {
        if (visited[h0]) continue;
        std::vector<int> cycle;
        int h = static_cast<int>(h0);
        size_t guard = 0;
        while (!visited[h] && guard <= halves.size()) {
            visited[h] = true;
            cycle.push_back(halves[h].from);
            h = next_half(h);
            ++guard;
        }
        if (cycle.size() < 3) continue;
        Polygon poly;
        poly.reserve(cycle.size());
        for (int vi : cycle) poly.push_back(points_[vi]);
        if (signed_area(poly) > 1e-12) faces.push_back(std::move(cycle));
    }
    return faces;
}

std::vector<ArrangementCell> arrange_polygons(const std::vector<Polygon>& polys) {
    PlanarSubdivision sub;
    for (const auto& poly : polys) {
        const size_t n = poly.size();
        for (size_t i = 0; i < n; ++i) {
            sub.add_segment(poly[i], poly[(i + 1) % n]);
        }
    }
    std::vector<ArrangementCell> cells;
    for (const auto& cycle : sub.bounded_faces()) {
        ArrangementCell cell;
        cell.outline.reserve(cycle.size());
        for (int vi : cycle) cell.outline.push_back(sub.points()[vi]);
        const Vec2 rep = interior_point(cell.outline);
        for (size_t pi = 0; pi < polys.size(); ++pi) {
            if (point_strictly_inside(polys[pi], rep)) {
                cell.covering.push_back(static_cast<int>(pi));
            }
        }
        if (!cell.covering.empty()) cells.push_back(std::move(cell));
    }
    std::sort(cells.begin(), cells.end(), [](const ArrangementCell& a, const ArrangementCell& b) {
        const Vec2 ca = centroid(a.outline), cb = centroid(b.outline);
        if (std::abs(ca.x - cb.x) > kEps) return ca.x < cb.x;
        if (std::abs(ca.y - cb.y) > kEps) return ca.y < cb.y;
        return a.covering < b.covering;
    });
    return cells;
}

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double quantize(double v, double step) {
    return static_cast<double>(std::llround(v / step)) * step;
}

}  // namespace cpforge::geom
