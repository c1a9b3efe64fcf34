#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "geofl/geometry.hpp"

namespace geofl {

/// Readings collected at a set of measurement locations: samples[t][i] is the
/// reading at sample time t for location i.
struct MeasurementSet {
    std::vector<std::string> labels;
    std::vector<Point> positions;
    std::vector<std::vector<double>> samples;

    int location_count() const { return static_cast<int>(labels.size()); }
    int sample_count() const { return static_cast<int>(samples.size()); }
    int index_of(const std::string& label) const; // throws on unknown label
    void validate() const;
};

/// Normalized histogram over shared bin edges (bin_count + 1 ascending edges).
struct Histogram {
    std::vector<double> edges;
    std::vector<double> probs;

    int bin_count() const { return static_cast<int>(probs.size()); }
};

/// One histogram per location over shared equal-width bins spanning the global
/// min/max of all readings. Values on an interior edge fall into the right
/// bin; the last bin includes its right edge. Errors when all readings are
/// equal (degenerate range).
std::vector<Histogram> build_histograms(const MeasurementSet& m, int bin_count);

/// KL divergence D(p || q) in nats. Both histograms get an additive 1e-9
/// smoothing and renormalization first, so identical inputs give exactly 0 and
/// empty bins stay finite. Requires identical edges.
double kl_divergence(const Histogram& p, const Histogram& q);

/// Pearson correlation with unbiased (n-1) sample moments, clamped to
/// [-1, 1]. Errors on length mismatch, fewer than two samples, or zero
/// variance (undefined correlation).
double pearson(std::span<const double> x, std::span<const double> y);

/// Largest distance d such that, among the locations within d of the
/// reference, at least `confidence` of them have KL(ref, loc) below
/// kl_threshold; 0 if no distance qualifies.
double estimate_d_max(const MeasurementSet& m, const std::string& ref_label,
                      double kl_threshold, double confidence = 0.95, int bin_count = 5);

/// Smallest distance d such that, among the locations strictly farther than d
/// from the reference, at least `confidence` of them have correlation with the
/// reference below corr_threshold. 0 when every location already qualifies; at
/// most the farthest location's distance otherwise.
double estimate_d_min(const MeasurementSet& m, const std::string& ref_label,
                      double corr_threshold, double confidence = 0.95);

/// Ingestion format: a "label,x,y" header, one location row per line beneath
/// it, then sample rows (one per sample time, one reading per location, in
/// location order). The sample block starts at the first row whose first field
/// is numeric, or after a blank line.
MeasurementSet read_measurements(std::istream& is);

/// Per-location report against a reference: "ref,label,distance_m,kl,pearson"
/// rows sorted by distance, then "d_max=..." / "d_min=..." trailer lines.
/// kl_unit_scale divides the reported KL values and multiplies the threshold
/// handed to the distance estimate (1.0 keeps nats; ln 2 reports bits).
void write_iid_report(std::ostream& os, const MeasurementSet& m, const std::string& ref_label,
                      double kl_threshold, double corr_threshold,
                      double confidence = 0.95, int bin_count = 5, double kl_unit_scale = 1.0);

} // namespace geofl
