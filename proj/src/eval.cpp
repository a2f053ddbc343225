#include "icesurf/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <set>

namespace icesurf {

MetricsReport evaluate(const Surface& pred, const Surface& gt, const std::vector<int>& ks) {
    if (pred.l() != gt.l() || pred.phi() != gt.phi()) {
        throw DimMismatch("prediction is " + std::to_string(pred.l()) + "x" + std::to_string(pred.phi()) +
                          ", ground truth is " + std::to_string(gt.l()) + "x" + std::to_string(gt.phi()));
    }
    const std::set<int> tolerances(ks.begin(), ks.end());
    MetricsReport report;
    const int l = gt.l();
    const int phi = gt.phi();
    if (l == 0 || phi == 0) return report;

    std::map<int, long long> hits;
    long long total_error = 0;
    for (int i = 0; i < l; ++i) {
        SliceMetrics slice;
        long long slice_error = 0;
        std::map<int, long long> slice_hits;
        for (int j = 0; j < phi; ++j) {
            const int err = std::abs(pred.at(i, j) - gt.at(i, j));
            slice_error += err;
            for (int k : tolerances) {
                if (err <= k) ++slice_hits[k];
            }
        }
        slice.mean_error = static_cast<double>(slice_error) / phi;
        for (int k : tolerances) {
            slice.precision_at[k] = static_cast<double>(slice_hits[k]) / phi;
            hits[k] += slice_hits[k];
        }
        total_error += slice_error;
        report.per_slice.push_back(std::move(slice));
    }

    const double pixels = static_cast<double>(l) * phi;
    report.mean_error = static_cast<double>(total_error) / pixels;
    for (int k : tolerances) report.precision_at[k] = static_cast<double>(hits[k]) / pixels;

    std::vector<double> means;
    for (const auto& s : report.per_slice) means.push_back(s.mean_error);
    std::sort(means.begin(), means.end());
    const std::size_t n = means.size();
    report.median_mean_error = n % 2 == 1 ? means[n / 2] : 0.5 * (means[n / 2 - 1] + means[n / 2]);
    return report;
}

std::string format_table(const std::vector<std::pair<std::string, MetricsReport>>& rows) {
    std::set<int> ks;
    for (const auto& [name, r] : rows) {
        for (const auto& [k, v] : r.precision_at) ks.insert(k);
    }
    std::size_t name_width = 8;
    for (const auto& [name, r] : rows) name_width = std::max(name_width, name.size());

    char buf[128];
    std::string out;
    auto pad = [&](const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };

    out += pad("", name_width) + "  Error                  Precision\n";
    out += pad("", name_width) + "  " + pad("Mean", 8) + " " + pad("Median Mean", 13);
    for (int k : ks) {
        std::snprintf(buf, sizeof buf, "%d %s", k, k == 1 ? "pixel" : "pixels");
        out += " " + pad(buf, 10);
    }
    out += "\n";
    for (const auto& [name, r] : rows) {
        out += pad(name, name_width) + "  ";
        std::snprintf(buf, sizeof buf, "%-8.2f %-13.2f", r.mean_error, r.median_mean_error);
        out += buf;
        for (int k : ks) {
            auto it = r.precision_at.find(k);
            if (it == r.precision_at.end()) {
                out += " " + pad("-", 10);
            } else {
                char pct[32];
                std::snprintf(pct, sizeof pct, "%.1f%%", 100.0 * it->second);
                out += " " + pad(pct, 10);
            }
        }
        out += "\n";
    }
    return out;
}

}  // namespace icesurf
