#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "geofl/geometry.hpp"
#include "geofl/rng.hpp"

namespace geofl {

/// Square deployment area plus the parameters of the random-walk mobility
/// model and of the cluster geometry derived from it. device_density is the
/// density of participating devices (service popularity already applied;
/// app_popularity is carried for bookkeeping only).
struct Scenario {
    double side_length = 0.0;          // m, area is side x side
    double device_density = 0.0;       // participating devices per m^2
    double app_popularity = 1.0;       // fraction of devices running the service
    double d_min = 0.0;                // m, distance below which data correlates
    double d_max = 0.0;                // m, service coverage diameter
    int history_len = 10;              // T, number of position samples kept
    double sample_interval = 1.0;      // s between samples
    double speed_min = 0.5;            // m/s
    double speed_max = 1.5;            // m/s
    double heading_resample_prob = 0.2; // per-step chance of picking a new heading

    void validate() const;
};

/// Built-in scenario presets: "dense", "moderate", "sparse".
Scenario preset_scenario(const std::string& name);

/// Position history of one node, oldest sample first; size == history_len.
struct NodeTrace {
    int node_id = 0;
    std::vector<Point> positions;
};

struct Deployment {
    Scenario scenario;
    std::uint64_t seed = 0;
    std::vector<NodeTrace> traces;
};

/// Walking state of one node between samples.
struct MobilityState {
    Point pos;
    double heading = 0.0; // radians
    double speed = 0.0;   // m/s
};

/// Advances one sample interval: possibly re-samples the heading, then moves
/// speed * interval along it with specular reflection at the area boundary
/// (path length is preserved; the heading flips per reflected axis).
/// Returns the new position and updates the state in place.
Point step_mobility(MobilityState& state, const Scenario& scenario, Rng& rng);

/// Draws the node count from Poisson(density * side^2), places nodes
/// uniformly, and walks each for history_len samples. Bit-reproducible for a
/// given seed. A zero-node draw is reported as an error so callers can retry
/// with another seed.
Deployment generate_deployment(const Scenario& scenario, std::uint64_t seed);

/// Text round-trip used for regression fixtures. Coordinates are written with
/// six decimals, so a reread deployment is quantized to that precision.
void write_deployment(std::ostream& os, const Deployment& d);
Deployment read_deployment(std::istream& is);

} // namespace geofl
