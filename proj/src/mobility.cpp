#include "geofl/mobility.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "geofl/text.hpp"

namespace geofl {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Folds x into [0, L] as a specular reflection; flipped reports whether the
/// direction of travel reversed (odd number of wall hits).
std::pair<double, bool> reflect_coordinate(double x, double L) {
    double m = std::fmod(x, 2.0 * L);
    if (m < 0.0) m += 2.0 * L;
    if (m > L) return {2.0 * L - m, true};
    return {m, false};
}

} // namespace

void Scenario::validate() const {
    if (!(side_length > 0.0)) throw std::invalid_argument("scenario: side_length must be positive");
    if (!(device_density > 0.0)) throw std::invalid_argument("scenario: device_density must be positive");
    if (!(app_popularity > 0.0) || app_popularity > 1.0)
        throw std::invalid_argument("scenario: app_popularity must be in (0, 1]");
    if (!(d_min > 0.0) || !(d_min < d_max))
        throw std::invalid_argument("scenario: need 0 < d_min < d_max");
    if (d_max > side_length)
        throw std::invalid_argument("scenario: d_max cannot exceed side_length");
    if (history_len < 1) throw std::invalid_argument("scenario: history_len must be >= 1");
    if (!(sample_interval >= 0.0)) throw std::invalid_argument("scenario: sample_interval must be >= 0");
    if (!(speed_min > 0.0) || !(speed_max >= speed_min))
        throw std::invalid_argument("scenario: need 0 < speed_min <= speed_max");
    if (heading_resample_prob < 0.0 || heading_resample_prob > 1.0)
        throw std::invalid_argument("scenario: heading_resample_prob must be in [0, 1]");
}

Scenario preset_scenario(const std::string& name) {
    Scenario s;
    s.app_popularity = 0.4;
    if (name == "dense") {
        s.side_length = 100.0;
        s.device_density = 4e-2;
        s.d_min = 10.0;
        s.d_max = 100.0;
    } else if (name == "moderate") {
        s.side_length = 200.0;
        s.device_density = 4e-3;
        s.d_min = 32.0;
        s.d_max = 200.0;
    } else if (name == "sparse") {
        s.side_length = 1000.0;
        s.device_density = 4e-4;
        s.d_min = 100.0;
        s.d_max = 1000.0;
    } else {
        throw std::invalid_argument("unknown scenario preset: " + name);
    }
    s.validate();
    return s;
}

Point step_mobility(MobilityState& state, const Scenario& scenario, Rng& rng) {
    if (rng.next_unit() < scenario.heading_resample_prob)
        state.heading = rng.uniform(0.0, kTwoPi);
    const double step = state.speed * scenario.sample_interval;
    const double rx = state.pos.x + step * std::cos(state.heading);
    const double ry = state.pos.y + step * std::sin(state.heading);
    const auto [nx, fx] = reflect_coordinate(rx, scenario.side_length);
    const auto [ny, fy] = reflect_coordinate(ry, scenario.side_length);
    if (fx || fy) {
        double vx = std::cos(state.heading);
        double vy = std::sin(state.heading);
        if (fx) vx = -vx;
        if (fy) vy = -vy;
        state.heading = std::atan2(vy, vx);
    }
    state.pos = Point{nx, ny};
    return state.pos;
}

Deployment generate_deployment(const Scenario& scenario, std::uint64_t seed) {
    scenario.validate();
    Rng root(seed);
    const double mean = scenario.device_density * scenario.side_length * scenario.side_length;
    const long n = root.poisson(mean);
    if (n == 0) throw std::runtime_error("empty deployment");

    Deployment d;
    d.scenario = scenario;
    d.seed = seed;
    d.traces.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        Rng r = root.derive(static_cast<std::uint64_t>(i));
        MobilityState st;
        st.pos.x = r.uniform(0.0, scenario.side_length);
        st.pos.y = r.uniform(0.0, scenario.side_length);
        st.heading = r.uniform(0.0, kTwoPi);
        st.speed = r.uniform(scenario.speed_min, scenario.speed_max);

        NodeTrace trace;
        trace.node_id = static_cast<int>(i);
        trace.positions.reserve(static_cast<std::size_t>(scenario.history_len));
        trace.positions.push_back(st.pos);
        for (int t = 1; t < scenario.history_len; ++t)
            trace.positions.push_back(step_mobility(st, scenario, r));
        d.traces.push_back(std::move(trace));
    }
    return d;
}

void write_deployment(std::ostream& os, const Deployment& d) {
    os << "side_length " << format_fixed(d.scenario.side_length) << '\n';
    os << "device_density " << format_fixed(d.scenario.device_density, 8) << '\n';
    os << "app_popularity " << format_fixed(d.scenario.app_popularity) << '\n';
    os << "d_min " << format_fixed(d.scenario.d_min) << '\n';
    os << "d_max " << format_fixed(d.scenario.d_max) << '\n';
    os << "history_len " << d.scenario.history_len << '\n';
    os << "sample_interval " << format_fixed(d.scenario.sample_interval) << '\n';
    os << "speed_min " << format_fixed(d.scenario.speed_min) << '\n';
    os << "speed_max " << format_fixed(d.scenario.speed_max) << '\n';
    os << "heading_resample_prob " << format_fixed(d.scenario.heading_resample_prob) << '\n';
    os << "seed " << d.seed << '\n';
    os << "nodes " << d.traces.size() << '\n';
    for (const auto& tr : d.traces)
        for (std::size_t t = 0; t < tr.positions.size(); ++t)
            os << tr.node_id << ',' << t << ','
               << format_fixed(tr.positions[t].x) << ','
               << format_fixed(tr.positions[t].y) << '\n';
}

Deployment read_deployment(std::istream& is) {
    Deployment d;
    std::size_t nodes = 0;
    std::string line;
    // scenario block: "key value" lines up to and including "nodes".
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto sp = line.find(' ');
        if (sp == std::string::npos) throw std::runtime_error("deployment: bad header line: " + line);
        const std::string key = line.substr(0, sp);
        const std::string val = trim(line.substr(sp + 1));
        if (key == "side_length") d.scenario.side_length = parse_double(val);
        else if (key == "device_density") d.scenario.device_density = parse_double(val);
        else if (key == "app_popularity") d.scenario.app_popularity = parse_double(val);
        else if (key == "d_min") d.scenario.d_min = parse_double(val);
        else if (key == "d_max") d.scenario.d_max = parse_double(val);
        else if (key == "history_len") d.scenario.history_len = static_cast<int>(parse_int(val));
        else if (key == "sample_interval") d.scenario.sample_interval = parse_double(val);
        else if (key == "speed_min") d.scenario.speed_min = parse_double(val);
        else if (key == "speed_max") d.scenario.speed_max = parse_double(val);
        else if (key == "heading_resample_prob") d.scenario.heading_resample_prob = parse_double(val);
        else if (key == "seed") d.seed = static_cast<std::uint64_t>(parse_int(val));
        else if (key == "nodes") { nodes = static_cast<std::size_t>(parse_int(val)); break; }
        else throw std::runtime_error("deployment: unknown header key: " + key);
    }
    d.scenario.validate();
    if (nodes == 0) throw std::runtime_error("empty deployment");
    d.traces.assign(nodes, NodeTrace{});
    for (std::size_t i = 0; i < nodes; ++i) {
        d.traces[i].node_id = static_cast<int>(i);
        d.traces[i].positions.reserve(static_cast<std::size_t>(d.scenario.history_len));
    }
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 4) throw std::runtime_error("deployment: bad trace row: " + line);
        const auto id = static_cast<std::size_t>(parse_int(f[0]));
        const auto t = static_cast<std::size_t>(parse_int(f[1]));
        if (id >= nodes) throw std::runtime_error("deployment: trace row for unknown node");
        if (t != d.traces[id].positions.size())
            throw std::runtime_error("deployment: trace rows out of order");
        d.traces[id].positions.push_back(Point{parse_double(f[2]), parse_double(f[3])});
    }
    for (const auto& tr : d.traces)
        if (tr.positions.size() != static_cast<std::size_t>(d.scenario.history_len))
            throw std::runtime_error("deployment: trace length mismatch");
    return d;
}

} // namespace geofl
