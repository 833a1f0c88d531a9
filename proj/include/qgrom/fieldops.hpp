#pragma once

#include <string>
#include <vector>

#include "qgrom/field.hpp"

namespace qgrom::fieldops {

// Single-layer field records at increasing times (days).
struct FieldSeries {
    int nx = 0, ny = 0;
    std::vector<double> times;
    std::vector<Field> fields;

    std::size_t size() const { return fields.size(); }
    void validate() const;  // shapes match, times strictly increasing
};

// Point-to-point projection: coarse node (i,j) takes the fine value at
// (i*r, j*r) with r = (n_f-1)/(n_c-1). No filtering.
Field subsample(const Field& fine, int coarse_n);

Field time_mean(const FieldSeries& s);

// Pointwise population standard deviation.
Field std_field(const FieldSeries& s);

// sqrt of the plain node sum of squared differences; no area weighting.
double l2_distance(const Field& a, const Field& b);

// Time average of the l2 distance from each record to the series time mean.
double mean_phase_distance(const FieldSeries& s);

// Loads one layer of a snapshot file, multiplying values by scale
// (1/f0 converts PV to the reporting units).
FieldSeries series_from_snapshots(const std::string& path, int layer, double scale);

}  // namespace qgrom::fieldops
