#include "geofl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "geofl/text.hpp"

namespace geofl {

namespace {

constexpr double kSmoothing = 1e-9;

/// (distance to ref, statistic) per non-reference location, distance-sorted.
struct Ranked {
    double dist;
    double value;
    bool operator<(const Ranked& o) const { return dist < o.dist; }
};

std::vector<Ranked> ranked_against_ref(const MeasurementSet& m, int ref,
                                       const std::vector<double>& values) {
    std::vector<Ranked> out;
    for (int i = 0; i < m.location_count(); ++i) {
        if (i == ref) continue;
        out.push_back({distance(m.positions[static_cast<std::size_t>(ref)],
                                m.positions[static_cast<std::size_t>(i)]),
                       values[static_cast<std::size_t>(i)]});
    }
    std::stable_sort(out.begin(), out.end());
    return out;
}

std::vector<double> column(const MeasurementSet& m, int i) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.sample_count()));
    for (const auto& row : m.samples) out.push_back(row[static_cast<std::size_t>(i)]);
    return out;
}

} // namespace

int MeasurementSet::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    throw std::invalid_argument("unknown location label: " + label);
}

void MeasurementSet::validate() const {
    if (labels.empty()) throw std::invalid_argument("measurements: no locations");
    if (labels.size() != positions.size())
        throw std::invalid_argument("measurements: label/position count mismatch");
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size())
        throw std::invalid_argument("measurements: duplicate location label");
    if (samples.size() < 2)
        throw std::invalid_argument("measurements: need at least two sample times");
    for (const auto& row : samples)
        if (row.size() != labels.size())
            throw std::invalid_argument("measurements: sample row width mismatch");
}

std::vector<Histogram> build_histograms(const MeasurementSet& m, int bin_count) {
    m.validate();
    if (bin_count < 1) throw std::invalid_argument("histogram: bin_count must be >= 1");

    double lo = m.samples[0][0], hi = m.samples[0][0];
    for (const auto& row : m.samples)
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!(hi > lo)) throw std::runtime_error("degenerate range: all readings are equal");

    const double width = (hi - lo) / bin_count;
    std::vector<double> edges(static_cast<std::size_t>(bin_count) + 1);
    for (int b = 0; b <= bin_count; ++b) edges[static_cast<std::size_t>(b)] = lo + b * width;
    edges.back() = hi;

    std::vector<Histogram> out(static_cast<std::size_t>(m.location_count()));
    const double n = static_cast<double>(m.sample_count());
    for (int i = 0; i < m.location_count(); ++i) {
        std::vector<double> counts(static_cast<std::size_t>(bin_count), 0.0);
        for (const auto& row : m.samples) {
            const double v = row[static_cast<std::size_t>(i)];
            int b = v >= hi ? bin_count - 1 : static_cast<int>((v - lo) / width);
            b = std::clamp(b, 0, bin_count - 1);
            counts[static_cast<std::size_t>(b)] += 1.0;
        }
        Histogram h;
        h.edges = edges;
        h.probs.resize(static_cast<std::size_t>(bin_count));
        for (int b = 0; b < bin_count; ++b)
            h.probs[static_cast<std::size_t>(b)] = counts[static_cast<std::size_t>(b)] / n;
        out[static_cast<std::size_t>(i)] = std::move(h);
    }
    return out;
}

double kl_divergence(const Histogram& p, const Histogram& q) {
    if (p.edges != q.edges)
        throw std::invalid_argument("kl_divergence: histograms use different bin edges");
    if (p.probs.size() != q.probs.size())
        throw std::invalid_argument("kl_divergence: bin count mismatch");
    double psum = 0.0, qsum = 0.0;
    for (std::size_t b = 0; b < p.probs.size(); ++b) {
        psum += p.probs[b] + kSmoothing;
        qsum += q.probs[b] + kSmoothing;
    }
    double kl = 0.0;
    for (std::size_t b = 0; b < p.probs.size(); ++b) {
        const double pb = (p.probs[b] + kSmoothing) / psum;
        const double qb = (q.probs[b] + kSmoothing) / qsum;
        kl += pb * std::log(pb / qb);
    }
    return kl;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("pearson: need at least two samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    const double denom = static_cast<double>(n - 1);
    cov /= denom;
    vx /= denom;
    vy /= denom;
    if (vx == 0.0 || vy == 0.0)
        throw std::domain_error("undefined correlation: zero variance input");
    return std::clamp(cov / (std::sqrt(vx) * std::sqrt(vy)), -1.0, 1.0);
}

double estimate_d_max(const MeasurementSet& m, const std::string& ref_label,
                      double kl_threshold, double confidence, int bin_count) {
    m.validate();
    const int ref = m.index_of(ref_label);
    const auto hists = build_histograms(m, bin_count);
    std::vector<double> kl(static_cast<std::size_t>(m.location_count()), 0.0);
    for (int i = 0; i < m.location_count(); ++i)
        if (i != ref)
            kl[static_cast<std::size_t>(i)] =
                kl_divergence(hists[static_cast<std::size_t>(ref)], hists[static_cast<std::size_t>(i)]);

    const auto ranked = ranked_against_ref(m, ref, kl);
    double best = 0.0;
    std::size_t below = 0;
    for (std::size_t e = 0; e < ranked.size(); ++e) {
        if (ranked[e].value < kl_threshold) ++below;
        // prefix must close at a distance boundary, ties included as a block
        if (e + 1 < ranked.size() && ranked[e + 1].dist == ranked[e].dist) continue;
        const double frac = static_cast<double>(below) / static_cast<double>(e + 1);
        if (frac >= confidence) best = std::max(best, ranked[e].dist);
    }
    return best;
}

double estimate_d_min(const MeasurementSet& m, const std::string& ref_label,
                      double corr_threshold, double confidence) {
    m.validate();
    const int ref = m.index_of(ref_label);
    const auto refcol = column(m, ref);
    std::vector<double> rho(static_cast<std::size_t>(m.location_count()), 0.0);
    for (int i = 0; i < m.location_count(); ++i)
        if (i != ref) rho[static_cast<std::size_t>(i)] = pearson(refcol, column(m, i));

    const auto ranked = ranked_against_ref(m, ref, rho);
    std::vector<double> candidates{0.0};
    for (const auto& r : ranked)
        if (candidates.back() != r.dist) candidates.push_back(r.dist);

    for (double d : candidates) {
        std::size_t total = 0, below = 0;
        for (const auto& r : ranked) {
            if (r.dist <= d) continue;
            ++total;
            if (r.value < corr_threshold) ++below;
        }
        if (total == 0) return d; // nothing farther; vacuously independent
        const double frac = static_cast<double>(below) / static_cast<double>(total);
        if (frac >= confidence) return d;
    }
    return candidates.back(); // unreachable: the last candidate always returns
}

MeasurementSet read_measurements(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || trim(line) != "label,x,y")
        throw std::runtime_error("measurements: expected 'label,x,y' header");

    MeasurementSet m;
    bool in_samples = false;
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (t.empty()) {
            if (!m.labels.empty()) in_samples = true;
            continue;
        }
        auto fields = split(t, ',');
        if (!in_samples && fields.size() == 3 && !is_number(fields[0])) {
            m.labels.push_back(trim(fields[0]));
            m.positions.push_back(Point{parse_double(fields[1]), parse_double(fields[2])});
            continue;
        }
        in_samples = true;
        if (fields.size() != m.labels.size())
            throw std::runtime_error("measurements: sample row has " + std::to_string(fields.size()) +
                                     " fields, expected " + std::to_string(m.labels.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f));
        m.samples.push_back(std::move(row));
    }
    m.validate();
    return m;
}

void write_iid_report(std::ostream& os, const MeasurementSet& m, const std::string& ref_label,
                      double kl_threshold, double corr_threshold,
                      double confidence, int bin_count, double kl_unit_scale) {
    m.validate();
    const int ref = m.index_of(ref_label);
    const auto hists = build_histograms(m, bin_count);
    const auto refcol = column(m, ref);

    struct Row {
        double dist;
        std::string label;
        double kl;
        double rho;
    };
    std::vector<Row> rows;
    for (int i = 0; i < m.location_count(); ++i) {
        if (i == ref) continue;
        Row r;
        r.dist = distance(m.positions[static_cast<std::size_t>(ref)],
                          m.positions[static_cast<std::size_t>(i)]);
        r.label = m.labels[static_cast<std::size_t>(i)];
        r.kl = kl_divergence(hists[static_cast<std::size_t>(ref)],
                             hists[static_cast<std::size_t>(i)]) / kl_unit_scale;
        r.rho = pearson(refcol, column(m, i));
        rows.push_back(std::move(r));
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.label < b.label;
    });

    os << "ref,label,distance_m,kl,pearson\n";
    for (const auto& r : rows)
        os << ref_label << ',' << r.label << ',' << format_fixed(r.dist) << ','
           << format_fixed(r.kl) << ',' << format_fixed(r.rho) << '\n';
    os << "d_max=" << format_fixed(estimate_d_max(m, ref_label, kl_threshold * kl_unit_scale,
                                                  confidence, bin_count)) << '\n';
    os << "d_min=" << format_fixed(estimate_d_min(m, ref_label, corr_threshold, confidence)) << '\n';
}

} // namespace geofl
