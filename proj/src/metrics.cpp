// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#include "submerge/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace submerge {

namespace {

void require_metric_inputs(const VoxelGrid& pred, const VoxelGrid& ref,
                           const BinaryMask& mask) {
    require_same_dims(pred.dims(), ref.dims(), "pred vs ref");
    require_same_dims(pred.dims(), mask.dims(), "pred vs mask");
}

}  // namespace

double masked_mae(const VoxelGrid& pred, const VoxelGrid& ref, const BinaryMask& mask) {
    require_metric_inputs(pred, ref, mask);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!mask.bits()[i]) continue;
        sum += std::abs(static_cast<double>(pred.values()[i]) - ref.values()[i]);
        ++n;
    }
    if (n == 0) {
        throw Error("empty mask: no voxels to evaluate");
    }
    return sum / static_cast<double>(n);
}

PsnrResult masked_psnr(const VoxelGrid& pred, const VoxelGrid& ref, const BinaryMask& mask,
                       std::optional<double> peak) {
    require_metric_inputs(pred, ref, mask);
    double sum_sq = 0.0;
    double ref_min = std::numeric_limits<double>::infinity();
    double ref_max = -std::numeric_limits<double>::infinity();
    std::size_t n = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!mask.bits()[i]) continue;
        const double d = static_cast<double>(pred.values()[i]) - ref.values()[i];
        sum_sq += d * d;
        ref_min = std::min(ref_min, static_cast<double>(ref.values()[i]));
        ref_max = std::max(ref_max, static_cast<double>(ref.values()[i]));
        ++n;
    }
    if (n == 0) {
        throw Error("empty mask: no voxels to evaluate");
    }
    PsnrResult result;
    result.mse = sum_sq / static_cast<double>(n);
    result.peak_used = peak ? *peak : ref_max - ref_min;
    if (result.mse > 0.0) {
        result.psnr_db = 10.0 * std::log10(result.peak_used * result.peak_used / result.mse);
    }
    return result;
}

std::vector<std::optional<double>> seam_profile(const VoxelGrid& volume,
                                                const TilePlan& plan, int axis,
                                                const BinaryMask& mask) {
    require_same_dims(volume.dims(), plan.volume_dims, "volume vs plan");
    require_same_dims(volume.dims(), mask.dims(), "volume vs mask");
    if (axis < 0 || axis > 2) {
        throw Error("seam axis out of range: " + std::to_string(axis));
    }

    std::vector<std::optional<double>> profile;
    for (const int origin : plan.axes[axis].origins) {
        if (origin == 0) continue;  // no plane before the first tile
        if (origin >= volume.dims()[axis]) {
            throw Error("seam boundary " + std::to_string(origin) +
                        " outside volume on axis " + std::to_string(axis));
        }
        double sum = 0.0;
        std::size_t pairs = 0;
        Index3 idx;
        const Index3& d = volume.dims();
        const int b = axis == 0 ? 1 : 0;  // the two in-plane axes
        const int c = axis == 2 ? 1 : 2;
        idx[axis] = origin;
        for (int j = 0; j < d[c]; ++j) {
            idx[c] = j;
            for (int i = 0; i < d[b]; ++i) {
                idx[b] = i;
                Index3 prev = idx;
                prev[axis] = origin - 1;
                if (!mask.at(idx[0], idx[1], idx[2]) || !mask.at(prev[0], prev[1], prev[2])) {
                    continue;
                }
                sum += std::abs(static_cast<double>(volume.at(idx[0], idx[1], idx[2])) -
                                volume.at(prev[0], prev[1], prev[2]));
                ++pairs;
            }
        }
        profile.push_back(pairs > 0 ? std::optional<double>(sum / pairs) : std::nullopt);
    }
    return profile;
}

std::optional<double> seam_gradient_mean(const VoxelGrid& volume, const TilePlan& plan,
                                         const BinaryMask& mask) {
    // Recomputing per-plane means would lose the pair weighting, so this
    // repeats the plane walk with global accumulators.
    require_same_dims(volume.dims(), plan.volume_dims, "volume vs plan");
    require_same_dims(volume.dims(), mask.dims(), "volume vs mask");
    double sum = 0.0;
    std::size_t pairs = 0;
    for (int axis = 0; axis < 3; ++axis) {
        for (const int origin : plan.axes[axis].origins) {
            if (origin == 0) continue;
            Index3 idx;
            const Index3& d = volume.dims();
            const int b = axis == 0 ? 1 : 0;
            const int c = axis == 2 ? 1 : 2;
            idx[axis] = origin;
            for (int j = 0; j < d[c]; ++j) {
                idx[c] = j;
                for (int i = 0; i < d[b]; ++i) {
                    idx[b] = i;
                    Index3 prev = idx;
                    prev[axis] = origin - 1;
                    if (!mask.at(idx[0], idx[1], idx[2]) ||
                        !mask.at(prev[0], prev[1], prev[2])) {
                        continue;
                    }
                    sum += std::abs(static_cast<double>(volume.at(idx[0], idx[1], idx[2])) -
                                    volume.at(prev[0], prev[1], prev[2]));
                    ++pairs;
                }
            }
        }
    }
    if (pairs == 0) return std::nullopt;
    return sum / static_cast<double>(pairs);
}

MetricReport evaluate(const VoxelGrid& pred, const VoxelGrid& ref, const BinaryMask& mask,
                      const TilePlan& plan, std::optional<double> peak) {
    MetricReport report;
    report.mae = masked_mae(pred, ref, mask);
    const PsnrResult p = masked_psnr(pred, ref, mask, peak);
    report.psnr_db = p.psnr_db;
    report.peak_used = p.peak_used;
    report.voxels_evaluated = mask.count();

    VoxelGrid residual(pred.dims(), pred.spacing());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        residual.values()[i] = pred.values()[i] - ref.values()[i];
    }
    report.seam_gradient = seam_gradient_mean(residual, plan, mask);
    return report;
}

std::string metric_report_json(const MetricReport& report) {
    nlohmann::ordered_json j;
    j["mae"] = report.mae;
    if (report.psnr_db) {
        j["psnr_db"] = *report.psnr_db;
    } else {
        j["psnr_db"] = nullptr;  // identical volumes
    }
    j["peak_used"] = report.peak_used;
    j["voxels_evaluated"] = report.voxels_evaluated;
    if (report.seam_gradient) {
        j["seam_gradient"] = *report.seam_gradient;
    } else {
        j["seam_gradient"] = nullptr;
    }
    return j.dump(2);
}

std::string metric_report_csv(const MetricReport& report) {
    std::ostringstream out;
    out << "mae,psnr_db,peak_used,voxels_evaluated,seam_gradient\n";
    out << report.mae << ',';
    if (report.psnr_db) {
        out << *report.psnr_db;
    } else {
        out << "identical";
    }
    out << ',' << report.peak_used << ',' << report.voxels_evaluated << ',';
    if (report.seam_gradient) {
        out << *report.seam_gradient;
    }
    out << '\n';
    return out.str();
}

}  // namespace submerge
