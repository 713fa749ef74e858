#include "wehsim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wehsim {

std::string to_string(MobilityModel m) {
    switch (m) {
        case MobilityModel::static_em: return "static_em";
        case MobilityModel::mobile_em: return "mobile_em";
        case MobilityModel::static_cm: return "static_cm";
        case MobilityModel::mobile_cm: return "mobile_cm";
    }
    return "unknown";
}

MobilityModel mobility_model_from_string(const std::string& s) {
    if (s == "static_em") return MobilityModel::static_em;
    if (s == "mobile_em") return MobilityModel::mobile_em;
    if (s == "static_cm") return MobilityModel::static_cm;
    if (s == "mobile_cm") return MobilityModel::mobile_cm;
    throw std::invalid_argument("unknown mobility model: " + s);
}

namespace {

// Deal n items over `slots` bins one at a time: the first n % slots bins end
// up with one extra item.
std::vector<int> round_robin_counts(int n, int slots) {
    std::vector<int> counts(slots, n / slots);
    for (int i = 0; i < n % slots; ++i) counts[i] += 1;
    return counts;
}

// Arc offset of a point lying on the path, found by walking the segments.
double arc_offset_of(const Path& path, Point p) {
    const std::size_t n = path.waypoints.size();
    const std::size_t nseg = path.closed ? n : n - 1;
    double cum = 0.0;
    for (std::size_t i = 0; i < nseg; ++i) {
        const Point a = path.waypoints[i];
        const Point b = path.waypoints[(i + 1) % n];
        const double len = distance(a, b);
        const double da = distance(a, p);
        const double db = distance(p, b);
        if (da + db <= len + 1e-9) return cum + da;
        cum += len;
    }
    throw std::logic_error("point does not lie on path");
}

}  // namespace

DeploymentPlan deploy_cm(std::span<const EventPoint> eps, const Path& tour, int n_actors,
                         bool mobile) {
    if (n_actors < 1) throw NoActors("deployment needs at least one actor");
    if (eps.empty()) throw std::invalid_argument("deployment needs at least one event point");
    DeploymentPlan plan;
    plan.actors.reserve(n_actors);

    if (!mobile) {
        // Parked on the event points, one per point in turn.
        for (int a = 0; a < n_actors; ++a) {
            const EventPoint& ep = eps[static_cast<std::size_t>(a) % eps.size()];
            plan.actors.push_back({ep.position, std::nullopt, 0.0});
        }
        return plan;
    }

    const std::size_t n_edges = tour.waypoints.size();
    const auto counts = round_robin_counts(n_actors, static_cast<int>(n_edges));
    double edge_start = 0.0;
    for (std::size_t e = 0; e < n_edges; ++e) {
        const Point a = tour.waypoints[e];
        const Point b = tour.waypoints[(e + 1) % n_edges];
        const double len = distance(a, b);
        const int k = counts[e];
        for (int j = 1; j <= k; ++j) {
            const double along = static_cast<double>(j) * len / (k + 1);
            const double arc = edge_start + along;
            plan.actors.push_back({point_along_path(tour, arc), tour, arc});
        }
        edge_start += len;
    }
    return plan;
}

namespace {

struct Branch {
    int edge_index;
    int anchor;  // inner vertex the branch hangs off
    int far;     // other endpoint (inner or boundary vertex)
};

std::vector<Branch> collect_branches(const VoronoiDiagram& diagram) {
    std::vector<bool> inner(diagram.vertices.size(), false);
    for (int v : diagram.inner_vertices) inner[v] = true;

    std::vector<Branch> branches;
    for (std::size_t e = 0; e < diagram.edges.size(); ++e) {
        const auto [a, b] = diagram.edges[e];
        if (!inner[a] && !inner[b]) continue;
        const int anchor = inner[a] ? (inner[b] ? std::min(a, b) : a) : b;
        const int far = (anchor == a) ? b : a;
        branches.push_back({static_cast<int>(e), anchor, far});
    }
    std::sort(branches.begin(), branches.end(), [](const Branch& l, const Branch& r) {
        if (l.anchor != r.anchor) return l.anchor < r.anchor;
        return l.edge_index < r.edge_index;
    });
    return branches;
}

// Open chain visiting every edge incident to the anchor: far endpoint of the
// first edge, through the anchor, out and back through each remaining edge.
Path patrol_chain(const VoronoiDiagram& diagram, int anchor) {
    const std::vector<int> incident = incident_edges(diagram, anchor);
    const Point v = diagram.vertices[anchor];
    std::vector<Point> waypoints;
    waypoints.reserve(2 * incident.size());
    for (std::size_t t = 0; t < incident.size(); ++t) {
        const auto [a, b] = diagram.edges[incident[t]];
        const Point far = diagram.vertices[(a == anchor) ? b : a];
        if (t == 0) {
            waypoints.push_back(far);
            waypoints.push_back(v);
        } else {
            waypoints.push_back(far);
            if (t + 1 < incident.size()) waypoints.push_back(v);
        }
    }
    return make_path(std::move(waypoints), /*closed=*/false);
}

}  // namespace

DeploymentPlan deploy_em(const VoronoiDiagram& diagram, int n_actors, bool mobile) {
    if (n_actors < 1) throw NoActors("deployment needs at least one actor");
    if (diagram.inner_vertices.empty())
        throw NoInnerVertices("tessellation has no interior vertex to anchor patrols");

    const std::vector<Branch> branches = collect_branches(diagram);
    const auto counts = round_robin_counts(n_actors, static_cast<int>(branches.size()));

    DeploymentPlan plan;
    plan.actors.reserve(n_actors);
    for (std::size_t b = 0; b < branches.size(); ++b) {
        const Branch& branch = branches[b];
        const Point from = diagram.vertices[branch.anchor];
        const Point to = diagram.vertices[branch.far];
        const int k = counts[b];
        for (int j = 1; j <= k; ++j) {
            const double t = static_cast<double>(j) / (k + 1);
            const Point pos = from + t * (to - from);
            if (mobile) {
                Path chain = patrol_chain(diagram, branch.anchor);
                const double arc = arc_offset_of(chain, pos);
                plan.actors.push_back({pos, std::move(chain), arc});
            } else {
                plan.actors.push_back({pos, std::nullopt, 0.0});
            }
        }
    }
    return plan;
}

DeploymentPlan build_plan(MobilityModel model, std::span<const EventPoint> eps,
                          const VoronoiDiagram& diagram, int n_actors) {
    switch (model) {
        case MobilityModel::static_em:
            return deploy_em(diagram, n_actors, /*mobile=*/false);
        case MobilityModel::mobile_em:
            return deploy_em(diagram, n_actors, /*mobile=*/true);
        case MobilityModel::static_cm:
        case MobilityModel::mobile_cm: {
            std::vector<Point> sites;
            sites.reserve(eps.size());
            for (const EventPoint& ep : eps) sites.push_back(ep.position);
            const Path tour = tsp_tour(sites);
            return deploy_cm(eps, tour, n_actors, model == MobilityModel::mobile_cm);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace wehsim
