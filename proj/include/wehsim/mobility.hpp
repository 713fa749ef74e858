#ifndef WEHSIM_MOBILITY_HPP
#define WEHSIM_MOBILITY_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wehsim/entities.hpp"
#include "wehsim/geometry.hpp"

namespace wehsim {

// The four actor placement/motion variants. CM actors relate to the tour
// through the event points; EM actors relate to the tessellation edges.
enum class MobilityModel { static_em, mobile_em, static_cm, mobile_cm };

std::string to_string(MobilityModel m);
MobilityModel mobility_model_from_string(const std::string& s);

inline bool is_mobile(MobilityModel m) {
    return m == MobilityModel::mobile_em || m == MobilityModel::mobile_cm;
}

struct NoActors : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NoInnerVertices : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Initial position plus, for mobile variants, the patrol path and the arc
// offset of the position along it.
struct ActorPlacement {
    Point position;
    std::optional<Path> path;
    double arc_offset_m = 0.0;
};

struct DeploymentPlan {
    std::vector<ActorPlacement> actors;
};

// Tour-based deployment. Mobile: actors are spread over the tour edges as
// evenly as possible (per-edge counts differ by at most one, extra actors
// going to the earliest edges in tour order) and sit equidistantly within
// each edge; every actor patrols the full closed tour from its offset.
// Static: actors are parked on the event points round-robin.
DeploymentPlan deploy_cm(std::span<const EventPoint> eps, const Path& tour, int n_actors,
                         bool mobile);

// Edge-based deployment. Branches are tessellation edges anchored at an inner
// vertex (edges between two inner vertices are anchored at the lower index;
// boundary-clipped edges at their single inner endpoint), ordered by anchor
// vertex then edge index. Actors are spread over branches as evenly as
// possible and sit equidistantly within each branch, measured from the
// anchor. Mobile: each actor patrols back and forth along the chain of all
// edges incident to its anchor.
DeploymentPlan deploy_em(const VoronoiDiagram& diagram, int n_actors, bool mobile);

// Dispatch over the four variants. CM variants build the tour over the event
// points; EM variants read the tessellation.
DeploymentPlan build_plan(MobilityModel model, std::span<const EventPoint> eps,
                          const VoronoiDiagram& diagram, int n_actors);

}  // namespace wehsim

#endif
