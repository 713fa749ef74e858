#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "wehsim/mobility.hpp"
#include "wehsim/rng.hpp"

using namespace wehsim;

namespace {

std::vector<EventPoint> square_eps(double lo, double hi) {
    return {{0, {lo, lo}, -5.0}, {1, {hi, lo}, -5.0}, {2, {hi, hi}, -5.0}, {3, {lo, hi}, -5.0}};
}

std::vector<EventPoint> random_eps(int n, std::uint64_t seed, double side) {
    Rng rng(seed);
    std::vector<EventPoint> eps;
    for (int i = 0; i < n; ++i)
        eps.push_back({i, {rng.uniform(0.5, side - 0.5), rng.uniform(0.5, side - 0.5)}, -5.0});
    return eps;
}

// Distance from a point to a segment.
double segment_distance(Point p, Point a, Point b) {
    const double len_sq = distance_sq(a, b);
    double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
}

// Buckets plan positions by the tour edge they sit on and checks the
// equidistant spacing within each edge (both end gaps included).
std::vector<int> per_edge_counts(const DeploymentPlan& plan, const Path& tour) {
    const std::size_t n = tour.waypoints.size();
    std::vector<std::vector<double>> along(n);
    for (const auto& actor : plan.actors) {
        bool placed = false;
        for (std::size_t e = 0; e < n && !placed; ++e) {
            const Point a = tour.waypoints[e];
            const Point b = tour.waypoints[(e + 1) % n];
            if (segment_distance(actor.position, a, b) < 1e-9) {
                const double d = distance(a, actor.position);
                if (d > 1e-9 && distance(actor.position, b) > 1e-9) {
                    along[e].push_back(d);
                    placed = true;
                }
            }
        }
        REQUIRE(placed);
    }
    std::vector<int> counts;
    for (std::size_t e = 0; e < n; ++e) {
        std::sort(along[e].begin(), along[e].end());
        const double len = distance(tour.waypoints[e], tour.waypoints[(e + 1) % n]);
        const int k = static_cast<int>(along[e].size());
        for (int j = 0; j < k; ++j) {
            const double expected = (j + 1) * len / (k + 1);
            CHECK(along[e][j] == doctest::Approx(expected).epsilon(1e-9));
        }
        counts.push_back(k);
    }
    return counts;
}

}  // namespace

TEST_SUITE("mobility") {

TEST_CASE("eleven actors over a four-point tour split 3-3-3-2") {
    const auto eps = square_eps(2.0, 8.0);
    std::vector<Point> sites;
    for (const auto& ep : eps) sites.push_back(ep.position);
    const Path tour = tsp_tour(sites);

    const DeploymentPlan plan = deploy_cm(eps, tour, 11, /*mobile=*/true);
    REQUIRE(plan.actors.size() == 11);
    auto counts = per_edge_counts(plan, tour);
    std::sort(counts.begin(), counts.end(), std::greater<>());
    CHECK(counts == std::vector<int>{3, 3, 3, 2});
    CHECK(counts.front() - counts.back() <= 1);
}

TEST_CASE("a single tour actor sits at the first edge midpoint") {
    const auto eps = square_eps(2.0, 8.0);
    std::vector<Point> sites;
    for (const auto& ep : eps) sites.push_back(ep.position);
    const Path tour = tsp_tour(sites);

    const DeploymentPlan plan = deploy_cm(eps, tour, 1, /*mobile=*/true);
    REQUIRE(plan.actors.size() == 1);
    const Point mid = 0.5 * (tour.waypoints[0] + tour.waypoints[1]);
    CHECK(distance(plan.actors[0].position, mid) < 1e-9);
    REQUIRE(plan.actors[0].path.has_value());
    CHECK(plan.actors[0].path->closed);
}

TEST_CASE("parked tour actors occupy the event points round-robin") {
    const auto eps = square_eps(2.0, 8.0);
    std::vector<Point> sites;
    for (const auto& ep : eps) sites.push_back(ep.position);
    const Path tour = tsp_tour(sites);

    const DeploymentPlan plan = deploy_cm(eps, tour, 11, /*mobile=*/false);
    REQUIRE(plan.actors.size() == 11);
    std::map<int, int> occupancy;
    for (const auto& actor : plan.actors) {
        CHECK(!actor.path.has_value());
        bool found = false;
        for (const auto& ep : eps) {
            if (distance(actor.position, ep.position) < 1e-12) {
                occupancy[ep.id] += 1;
                found = true;
            }
        }
        CHECK(found);
    }
    std::vector<int> counts;
    for (const auto& [id, c] : occupancy) counts.push_back(c);
    std::sort(counts.begin(), counts.end(), std::greater<>());
    CHECK(counts == std::vector<int>{3, 3, 3, 2});
}

TEST_CASE("mobile tour actors all patrol the same loop at distinct offsets") {
    const auto eps = random_eps(10, 42, 20.0);
    std::vector<Point> sites;
    for (const auto& ep : eps) sites.push_back(ep.position);
    const Path tour = tsp_tour(sites);

    const DeploymentPlan plan = deploy_cm(eps, tour, 10, /*mobile=*/true);
    std::set<long long> offsets;
    for (const auto& actor : plan.actors) {
        REQUIRE(actor.path.has_value());
        REQUIRE(actor.path->waypoints.size() == tour.waypoints.size());
        for (std::size_t i = 0; i < tour.waypoints.size(); ++i) {
            CHECK(actor.path->waypoints[i].x == tour.waypoints[i].x);
            CHECK(actor.path->waypoints[i].y == tour.waypoints[i].y);
        }
        offsets.insert(static_cast<long long>(actor.arc_offset_m * 1e9));
        const Point on_path = point_along_path(*actor.path, actor.arc_offset_m);
        CHECK(distance(on_path, actor.position) < 1e-9);
    }
    CHECK(offsets.size() == plan.actors.size());
}

TEST_CASE("edge deployment spreads actors one per branch") {
    // Three sites in general position give exactly one interior junction.
    const Region region{10.0};
    const std::vector<Point> sites = {{5.0, 2.0}, {8.0, 8.0}, {2.0, 7.0}};
    const VoronoiDiagram d = build_voronoi(sites, region);
    REQUIRE(d.inner_vertices.size() == 1);
    const int hub = d.inner_vertices[0];
    const auto spokes = incident_edges(d, hub);
    REQUIRE(spokes.size() == 3);

    const DeploymentPlan plan = deploy_em(d, 3, /*mobile=*/false);
    REQUIRE(plan.actors.size() == 3);
    // Each actor sits at the midpoint of one distinct spoke.
    std::set<int> used;
    for (const auto& actor : plan.actors) {
        for (int e : spokes) {
            const auto [a, b] = d.edges[e];
            const Point mid = 0.5 * (d.vertices[a] + d.vertices[b]);
            if (distance(actor.position, mid) < 1e-9) used.insert(e);
        }
    }
    CHECK(used.size() == 3);
}

TEST_CASE("edge deployment needs an interior vertex") {
    const Region region{10.0};
    const std::vector<Point> sites = {{2.0, 5.0}, {8.0, 5.0}};
    const VoronoiDiagram d = build_voronoi(sites, region);
    CHECK(d.inner_vertices.empty());
    CHECK_THROWS_AS(deploy_em(d, 5, true), NoInnerVertices);
    CHECK_THROWS_AS(deploy_em(d, 0, true), NoActors);
}

TEST_CASE("a single edge actor anchors at the first interior vertex") {
    const Region region{25.0};
    const auto eps = random_eps(10, 42, region.side);
    std::vector<Point> sites;
    for (const auto& ep : eps) sites.push_back(ep.position);
    const VoronoiDiagram d = build_voronoi(sites, region);
    REQUIRE(!d.inner_vertices.empty());

    const DeploymentPlan plan = deploy_em(d, 1, /*mobile=*/true);
    REQUIRE(plan.actors.size() == 1);
    const Point anchor = d.vertices[d.inner_vertices[0]];
    REQUIRE(plan.actors[0].path.has_value());
    // The patrol chain passes through the anchor vertex.
    bool touches_anchor = false;
    for (const Point& w : plan.actors[0].path->waypoints)
        if (distance(w, anchor) < 1e-9) touches_anchor = true;
    CHECK(touches_anchor);
    // And the actor starts on one of the anchor's own edges.
    bool on_spoke = false;
    for (int e : incident_edges(d, d.inner_vertices[0])) {
        const auto [a, b] = d.edges[e];
        if (segment_distance(plan.actors[0].position, d.vertices[a], d.vertices[b]) < 1e-9)
            on_spoke = true;
    }
    CHECK(on_spoke);
}

TEST_CASE("edge-patrol actors start on their own paths") {
    const Region region{20.0};
    for (std::uint64_t seed : {42, 7, 13}) {
        const auto eps = random_eps(10, seed, region.side);
        std::vector<Point> sites;
        for (const auto& ep : eps) sites.push_back(ep.position);
        const VoronoiDiagram d = build_voronoi(sites, region);
        const DeploymentPlan plan = deploy_em(d, 11, /*mobile=*/true);
        REQUIRE(plan.actors.size() == 11);
        for (const auto& actor : plan.actors) {
            REQUIRE(actor.path.has_value());
            CHECK(!actor.path->closed);
            const Point on_path = point_along_path(*actor.path, actor.arc_offset_m);
            CHECK(distance(on_path, actor.position) < 1e-9);
        }
    }
}

TEST_CASE("branch counts stay within one of each other") {
    const Region region{20.0};
    for (int n_actors : {1, 10, 11, 40}) {
        const auto eps = random_eps(10, 3, region.side);
        std::vector<Point> sites;
        for (const auto& ep : eps) sites.push_back(ep.position);
        const VoronoiDiagram d = build_voronoi(sites, region);

        const DeploymentPlan plan = deploy_em(d, n_actors, /*mobile=*/false);
        REQUIRE(static_cast<int>(plan.actors.size()) == n_actors);

        // Recover per-branch counts by bucketing positions onto edges.
        std::map<int, int> by_edge;
        for (const auto& actor : plan.actors) {
            for (std::size_t e = 0; e < d.edges.size(); ++e) {
                const auto [a, b] = d.edges[e];
                if (segment_distance(actor.position, d.vertices[a], d.vertices[b]) < 1e-9) {
                    by_edge[static_cast<int>(e)] += 1;
                    break;
                }
            }
        }
        int placed = 0, max_c = 0;
        for (const auto& [e, c] : by_edge) {
            placed += c;
            max_c = std::max(max_c, c);
        }
        CHECK(placed == n_actors);
        // Evenness: occupied branches minus empty ones never exceed one when
        // there are more branches than actors, and counts differ by <= 1.
        int min_c = max_c;
        std::vector<bool> inner(d.vertices.size(), false);
        for (int v : d.inner_vertices) inner[v] = true;
        int n_branches = 0;
        for (const auto& [a, b] : d.edges)
            if (inner[a] || inner[b]) ++n_branches;
        for (int e = 0; e < static_cast<int>(d.edges.size()); ++e) {
            const auto [a, b] = d.edges[e];
            if (!(inner[a] || inner[b])) continue;
            const auto it = by_edge.find(e);
            min_c = std::min(min_c, it == by_edge.end() ? 0 : it->second);
        }
        CHECK(max_c - min_c <= 1);
        CHECK(n_branches >= static_cast<int>(by_edge.size()));
    }
}

TEST_CASE("build_plan dispatches all four variants deterministically") {
    const Region region{20.0};
    const auto eps = random_eps(10, 42, region.side);
    std::vector<Point> sites;
    for (const auto& ep : eps) sites.push_back(ep.position);
    const VoronoiDiagram d = build_voronoi(sites, region);

    const DeploymentPlan parked = build_plan(MobilityModel::static_cm, eps, d, 7);
    for (const auto& a : parked.actors) CHECK(!a.path.has_value());

    const DeploymentPlan touring = build_plan(MobilityModel::mobile_cm, eps, d, 7);
    for (const auto& a : touring.actors) {
        REQUIRE(a.path.has_value());
        CHECK(a.path->closed);
    }

    const DeploymentPlan patrol = build_plan(MobilityModel::mobile_em, eps, d, 7);
    for (const auto& a : patrol.actors) {
        REQUIRE(a.path.has_value());
        CHECK(!a.path->closed);
    }

    for (MobilityModel m : {MobilityModel::static_em, MobilityModel::mobile_em,
                            MobilityModel::static_cm, MobilityModel::mobile_cm}) {
        const DeploymentPlan p1 = build_plan(m, eps, d, 9);
        const DeploymentPlan p2 = build_plan(m, eps, d, 9);
        REQUIRE(p1.actors.size() == p2.actors.size());
        for (std::size_t i = 0; i < p1.actors.size(); ++i) {
            CHECK(p1.actors[i].position.x == p2.actors[i].position.x);
            CHECK(p1.actors[i].position.y == p2.actors[i].position.y);
            CHECK(p1.actors[i].arc_offset_m == p2.actors[i].arc_offset_m);
        }
    }
}

TEST_CASE("model names round-trip") {
    for (MobilityModel m : {MobilityModel::static_em, MobilityModel::mobile_em,
                            MobilityModel::static_cm, MobilityModel::mobile_cm}) {
        CHECK(mobility_model_from_string(to_string(m)) == m);
    }
    CHECK_THROWS_AS(mobility_model_from_string("hovercraft"), std::invalid_argument);
}

}  // TEST_SUITE
