#pragma once

#include <map>
#include <string>
#include <vector>

#include "icesurf/core.hpp"

namespace icesurf {

struct SliceMetrics {
    double mean_error = 0.0;
    std::map<int, double> precision_at;
};

/// Column-wise absolute label error against ground truth, in pixels.
struct MetricsReport {
    double mean_error = 0.0;
    double median_mean_error = 0.0;   // median over slices of the per-slice mean
    std::map<int, double> precision_at;  // k -> fraction of pixels with |error| <= k
    std::vector<SliceMetrics> per_slice;
};

inline const std::vector<int> kDefaultTolerances{1, 5};

/// Throws DimMismatch when the surfaces differ in shape.
MetricsReport evaluate(const Surface& pred, const Surface& gt, const std::vector<int>& ks = kDefaultTolerances);

/// Fixed-width text table with the usual Mean / Median Mean / precision columns.
std::string format_table(const std::vector<std::pair<std::string, MetricsReport>>& rows);

}  // namespace icesurf
