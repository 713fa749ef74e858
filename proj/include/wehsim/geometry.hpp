#ifndef WEHSIM_GEOMETRY_HPP
#define WEHSIM_GEOMETRY_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wehsim {

// 2-D position in meters.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double distance_sq(Point a, Point b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}
inline double distance(Point a, Point b) { return std::sqrt(distance_sq(a, b)); }

// Square deployment area [0, side] x [0, side].
struct Region {
    double side = 0.0;

    bool contains(Point p) const {
        return p.x >= 0.0 && p.x <= side && p.y >= 0.0 && p.y <= side;
    }
    double area() const { return side * side; }
};

// An ordered polyline. Closed paths wrap from the last waypoint back to the
// first; open paths are traversed back and forth (arc length reflects at the
// ends with period 2 * total length).
struct Path {
    std::vector<Point> waypoints;
    bool closed = false;

    double total_length() const;
};

struct InvalidPath : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Validates the waypoint list: >= 2 points, consecutive points distinct
// (including the wrap pair of a closed path), positive total length.
Path make_path(std::vector<Point> waypoints, bool closed);

// Position at a given arc length from the start of the path.
Point point_along_path(const Path& path, double arc_length);

struct DuplicateSites : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SiteOutsideRegion : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct TooFewSites : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidVertex : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Bounded Voronoi tessellation over a set of sites, clipped to the region.
//
// `cells[i]` is the CCW polygon of points at least as close to site i as to
// any other site. `edges` are the cell-separating segments (region border
// pieces are not edges); `vertices` holds their deduplicated endpoints.
// `inner_vertices` indexes the vertices strictly interior to the region.
struct VoronoiDiagram {
    std::vector<Point> sites;
    Region region;
    std::vector<std::vector<Point>> cells;
    std::vector<Point> vertices;
    std::vector<std::pair<int, int>> edges;  // vertex index pairs, first < second
    std::vector<int> inner_vertices;
};

// Half-plane intersection per site against the region rectangle. O(n^2) per
// cell, which is fine at the site counts this simulator works with.
VoronoiDiagram build_voronoi(std::span<const Point> sites, Region region);

// Index of the site nearest to p; ties broken by lowest site index.
int nearest_site(const VoronoiDiagram& diagram, Point p);

// Indices of all edges having the vertex as an endpoint, sorted ascending.
std::vector<int> incident_edges(const VoronoiDiagram& diagram, int vertex_index);

// True when p lies inside (or on the boundary of) the cell polygon, within
// tolerance. Test/debug aid: lets callers cross-check cell assignment against
// direct distance comparison.
bool cell_contains(const VoronoiDiagram& diagram, int cell_index, Point p,
                   double tol = 1e-9);

// Closed tour visiting every site exactly once, built by nearest-neighbor
// construction followed by 2-opt improvement to a local optimum. Waypoints
// are the site positions in visit order, starting at site 0.
Path tsp_tour(std::span<const Point> sites);

// Shoelace area of a simple polygon.
double polygon_area(std::span<const Point> polygon);

}  // namespace wehsim

#endif
