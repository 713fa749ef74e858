#include "wehsim/geometry.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

namespace wehsim {

namespace {

constexpr double kVertexMergeTol = 1e-7;   // m; above clipping noise, below feature scale
constexpr double kBoundaryTol = 1e-9;      // m; inner-vertex / border classification
constexpr double kMinSiteSeparation = 1e-9;

// Clips a polygon against the half-plane { p : dot(p - origin, normal) <= 0 }.
std::vector<Point> clip_half_plane(const std::vector<Point>& poly, Point origin,
                                   Point normal) {
    std::vector<Point> out;
    out.reserve(poly.size() + 1);
    const auto side = [&](Point p) { return dot(p - origin, normal); };
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly[i];
        const Point b = poly[(i + 1) % n];
        const double da = side(a);
        const double db = side(b);
        if (da <= 0.0) {
            out.push_back(a);
            if (db > 0.0) {
                const double t = da / (da - db);
                out.push_back(a + t * (b - a));
            }
        } else if (db <= 0.0) {
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

// Removes consecutive near-duplicate vertices (wrap-around included).
std::vector<Point> dedupe_ring(const std::vector<Point>& poly, double tol) {
    std::vector<Point> out;
    out.reserve(poly.size());
    for (const Point& p : poly) {
        if (out.empty() || distance(out.back(), p) > tol) out.push_back(p);
    }
    while (out.size() > 1 && distance(out.front(), out.back()) <= tol) out.pop_back();
    return out;
}

// Merges geometrically coincident points into indexed vertices.
struct VertexBank {
    std::vector<Point> points;

    int find_or_add(Point p) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (distance(points[i], p) <= kVertexMergeTol) return static_cast<int>(i);
        }
        points.push_back(p);
        return static_cast<int>(points.size() - 1);
    }
};

// Both endpoints on the same border line of the region rectangle.
bool on_same_border(Point a, Point b, Region region) {
    const double s = region.side;
    if (std::abs(a.x) <= kBoundaryTol && std::abs(b.x) <= kBoundaryTol) return true;
    if (std::abs(a.x - s) <= kBoundaryTol && std::abs(b.x - s) <= kBoundaryTol) return true;
    if (std::abs(a.y) <= kBoundaryTol && std::abs(b.y) <= kBoundaryTol) return true;
    if (std::abs(a.y - s) <= kBoundaryTol && std::abs(b.y - s) <= kBoundaryTol) return true;
    return false;
}

}  // namespace

double Path::total_length() const {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
        len += distance(waypoints[i], waypoints[i + 1]);
    if (closed && waypoints.size() >= 2) len += distance(waypoints.back(), waypoints.front());
    return len;
}

Path make_path(std::vector<Point> waypoints, bool closed) {
    if (waypoints.size() < 2) throw InvalidPath("path needs at least 2 waypoints");
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        if (distance(waypoints[i], waypoints[i + 1]) <= 0.0)
            throw InvalidPath("consecutive waypoints must be distinct");
    }
    if (closed && distance(waypoints.back(), waypoints.front()) <= 0.0)
        throw InvalidPath("closed path wrap pair must be distinct");
    Path p{std::move(waypoints), closed};
    if (p.total_length() <= 0.0) throw InvalidPath("path has zero length");
    return p;
}

Point point_along_path(const Path& path, double arc_length) {
    const double total = path.total_length();
    double s = arc_length;
    if (path.closed) {
        s = std::fmod(s, total);
        if (s < 0.0) s += total;
    } else {
        // Back-and-forth traversal: triangle wave with period 2 * total.
        s = std::fmod(s, 2.0 * total);
        if (s < 0.0) s += 2.0 * total;
        if (s > total) s = 2.0 * total - s;
    }
    const std::size_t n = path.waypoints.size();
    const std::size_t nseg = path.closed ? n : n - 1;
    for (std::size_t i = 0; i < nseg; ++i) {
        const Point a = path.waypoints[i];
        const Point b = path.waypoints[(i + 1) % n];
        const double len = distance(a, b);
        if (s <= len) {
            const double t = (len > 0.0) ? s / len : 0.0;
            return a + t * (b - a);
        }
        s -= len;
    }
    return path.closed ? path.waypoints.front() : path.waypoints.back();
}

VoronoiDiagram build_voronoi(std::span<const Point> sites, Region region) {
    if (sites.empty()) throw TooFewSites("at least one site required");
    for (const Point& p : sites) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !region.contains(p))
            throw SiteOutsideRegion("site (" + std::to_string(p.x) + ", " +
                                    std::to_string(p.y) + ") outside region");
    }
    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t j = i + 1; j < sites.size(); ++j) {
            if (distance(sites[i], sites[j]) < kMinSiteSeparation)
                throw DuplicateSites("sites " + std::to_string(i) + " and " +
                                     std::to_string(j) + " coincide");
        }
    }

    VoronoiDiagram d;
    d.sites.assign(sites.begin(), sites.end());
    d.region = region;
    d.cells.reserve(sites.size());

    const std::vector<Point> box = {
        {0.0, 0.0}, {region.side, 0.0}, {region.side, region.side}, {0.0, region.side}};

    for (std::size_t i = 0; i < sites.size(); ++i) {
        std::vector<Point> poly = box;
        for (std::size_t j = 0; j < sites.size() && !poly.empty(); ++j) {
            if (j == i) continue;
            // Keep the side of the perpendicular bisector closer to site i.
            const Point mid = 0.5 * (sites[i] + sites[j]);
            const Point normal = sites[j] - sites[i];
            poly = clip_half_plane(poly, mid, normal);
        }
        d.cells.push_back(dedupe_ring(poly, kBoundaryTol));
    }

    // Collect cell-separating segments; region border pieces are not edges.
    VertexBank bank;
    std::map<std::pair<int, int>, int> seen;
    for (const auto& cell : d.cells) {
        const std::size_t n = cell.size();
        for (std::size_t k = 0; k < n; ++k) {
            const Point a = cell[k];
            const Point b = cell[(k + 1) % n];
            if (distance(a, b) <= kVertexMergeTol) continue;
            if (on_same_border(a, b, region)) continue;
            int va = bank.find_or_add(a);
            int vb = bank.find_or_add(b);
            if (va == vb) continue;
            if (va > vb) std::swap(va, vb);
            seen.emplace(std::make_pair(va, vb), static_cast<int>(seen.size()));
        }
    }
    d.vertices = bank.points;
    d.edges.resize(seen.size());
    for (const auto& [key, idx] : seen) d.edges[idx] = key;

    for (std::size_t v = 0; v < d.vertices.size(); ++v) {
        const Point p = d.vertices[v];
        const double margin =
            std::min(std::min(p.x, region.side - p.x), std::min(p.y, region.side - p.y));
        if (margin > kBoundaryTol) d.inner_vertices.push_back(static_cast<int>(v));
    }
    return d;
}

int nearest_site(const VoronoiDiagram& diagram, Point p) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < diagram.sites.size(); ++i) {
        const double dsq = distance_sq(diagram.sites[i], p);
        if (dsq < best_d) {
            best_d = dsq;
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::vector<int> incident_edges(const VoronoiDiagram& diagram, int vertex_index) {
    if (vertex_index < 0 || vertex_index >= static_cast<int>(diagram.vertices.size()))
        throw InvalidVertex("vertex index " + std::to_string(vertex_index) +
                            " out of range");
    std::vector<int> out;
    for (std::size_t e = 0; e < diagram.edges.size(); ++e) {
        if (diagram.edges[e].first == vertex_index || diagram.edges[e].second == vertex_index)
            out.push_back(static_cast<int>(e));
    }
    return out;
}

bool cell_contains(const VoronoiDiagram& diagram, int cell_index, Point p, double tol) {
    const auto& poly = diagram.cells.at(static_cast<std::size_t>(cell_index));
    const std::size_t n = poly.size();
    if (n < 3) return false;
    // Convex CCW polygon: p is inside iff it is on the left of every edge.
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly[i];
        const Point b = poly[(i + 1) % n];
        const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (cross < -tol * distance(a, b)) return false;
    }
    return true;
}

double polygon_area(std::span<const Point> polygon) {
    double twice = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = polygon[i];
        const Point b = polygon[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * std::abs(twice);
}

Path tsp_tour(std::span<const Point> sites) {
    const int n = static_cast<int>(sites.size());
    if (n < 2) throw TooFewSites("tour needs at least 2 sites");
    const std::vector<Point> pts(sites.begin(), sites.end());

    // Nearest-neighbor construction from site 0, ties to the lowest index.
    std::vector<int> order;
    order.reserve(n);
    std::vector<bool> used(n, false);
    order.push_back(0);
    used[0] = true;
    for (int step = 1; step < n; ++step) {
        const Point cur = pts[order.back()];
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double dsq = distance_sq(cur, pts[j]);
            if (dsq < best_d) {
                best_d = dsq;
                best = j;
            }
        }
        order.push_back(best);
        used[best] = true;
    }

    // 2-opt: reverse segments while any reversal shortens the tour.
    // First-improvement with a fixed scan order keeps the result deterministic.
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i + 1 < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const int a = order[i];
                const int b = order[(i + 1) % n];
                const int c = order[j];
                const int e = order[(j + 1) % n];
                if (a == c || b == e) continue;
                const double delta = distance(pts[a], pts[c]) + distance(pts[b], pts[e]) -
                                     distance(pts[a], pts[b]) - distance(pts[c], pts[e]);
                if (delta < -1e-12) {
                    std::reverse(order.begin() + i + 1, order.begin() + j + 1);
                    improved = true;
                }
            }
        }
    }

    std::vector<Point> waypoints;
    waypoints.reserve(n);
    for (int idx : order) waypoints.push_back(pts[idx]);
    return make_path(std::move(waypoints), /*closed=*/true);
}

}  // namespace wehsim
