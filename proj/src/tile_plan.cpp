// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#include "submerge/tile_plan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace submerge {

AxisPlan plan_axis(int extent, int tile_len, double overlap_fraction) {
    if (extent < 1) {
        throw Error("volume extent must be >= 1, got " + std::to_string(extent));
    }
    if (tile_len < 1) {
        throw Error("tile length must be >= 1, got " + std::to_string(tile_len));
    }
    if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
        throw Error("overlap fraction out of range: " + std::to_string(overlap_fraction) +
                    " (want 0 <= p < 1)");
    }

    AxisPlan plan;
    plan.tile_len = tile_len;
    // Round half up; floor at 1 so p close to 1 still advances.
    plan.stride = std::max(
        1, static_cast<int>(std::floor(tile_len * (1.0 - overlap_fraction) + 0.5)));
    plan.overlap = tile_len - plan.stride;

    if (extent < tile_len) {
        plan.origins = {0};
        plan.pad = tile_len - extent;
        return plan;
    }

    for (int origin = 0; origin + tile_len < extent; origin += plan.stride) {
        plan.origins.push_back(origin);
    }
    const int last = extent - tile_len;
    if (plan.origins.empty() || plan.origins.back() != last) {
        plan.origins.push_back(last);
    }
    return plan;
}

TilePlan plan_volume(const Index3& dims, const Index3& tile_size, double overlap_fraction) {
    TilePlan plan;
    plan.volume_dims = dims;
    plan.tile_size = tile_size;
    plan.overlap_fraction = overlap_fraction;
    for (int axis = 0; axis < 3; ++axis) {
        plan.axes[axis] = plan_axis(dims[axis], tile_size[axis], overlap_fraction);
    }
    plan.retained.assign(voxel_count(plan.lattice_dims()), 1);
    return plan;
}

std::size_t TilePlan::retained_count() const {
    return static_cast<std::size_t>(
        std::count(retained.begin(), retained.end(), std::uint8_t{1}));
}

namespace {

// Inclusive-exclusive box sum over a (nx+1)(ny+1)(nz+1) prefix volume.
class PrefixSum3 {
public:
    explicit PrefixSum3(const BinaryMask& mask) : dims_(mask.dims()) {
        const std::size_t px = dims_[0] + 1, py = dims_[1] + 1, pz = dims_[2] + 1;
        sums_.assign(px * py * pz, 0);
        for (int z = 0; z < dims_[2]; ++z) {
            for (int y = 0; y < dims_[1]; ++y) {
                for (int x = 0; x < dims_[0]; ++x) {
                    sums_[at(x + 1, y + 1, z + 1)] =
                        static_cast<std::uint64_t>(mask.bits()[mask.index(x, y, z)]) +
                        sums_[at(x, y + 1, z + 1)] + sums_[at(x + 1, y, z + 1)] +
                        sums_[at(x + 1, y + 1, z)] - sums_[at(x, y, z + 1)] -
                        sums_[at(x, y + 1, z)] - sums_[at(x + 1, y, z)] +
                        sums_[at(x, y, z)];
                }
            }
        }
    }

    // Sum over the half-open box [x0,x1) x [y0,y1) x [z0,z1).
    std::uint64_t box(int x0, int x1, int y0, int y1, int z0, int z1) const {
        return sums_[at(x1, y1, z1)] - sums_[at(x0, y1, z1)] - sums_[at(x1, y0, z1)] -
               sums_[at(x1, y1, z0)] + sums_[at(x0, y0, z1)] + sums_[at(x0, y1, z0)] +
               sums_[at(x1, y0, z0)] - sums_[at(x0, y0, z0)];
    }

private:
    std::size_t at(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims_[0] + 1) *
                   (static_cast<std::size_t>(y) +
                    static_cast<std::size_t>(dims_[1] + 1) * static_cast<std::size_t>(z));
    }

    Index3 dims_;
    std::vector<std::uint64_t> sums_;
};

}  // namespace

TilePlan filter_by_mask(const TilePlan& plan, const BinaryMask& mask) {
    require_same_dims(plan.volume_dims, mask.dims(), "mask vs plan volume");

    const PrefixSum3 prefix(mask);
    TilePlan filtered = plan;
    const Index3 n = plan.lattice_dims();
    for (int iz = 0; iz < n[2]; ++iz) {
        for (int iy = 0; iy < n[1]; ++iy) {
            for (int ix = 0; ix < n[0]; ++ix) {
                const Index3 o = plan.tile_origin(ix, iy, iz);
                // In-volume footprint; the padded part of an undersized axis
                // lies outside the volume and cannot contain mask voxels.
                const int x1 = std::min(o[0] + plan.tile_size[0], plan.volume_dims[0]);
                const int y1 = std::min(o[1] + plan.tile_size[1], plan.volume_dims[1]);
                const int z1 = std::min(o[2] + plan.tile_size[2], plan.volume_dims[2]);
                const bool keep = prefix.box(o[0], x1, o[1], y1, o[2], z1) > 0;
                filtered.retained[plan.lattice_index(ix, iy, iz)] = keep ? 1 : 0;
            }
        }
    }
    return filtered;
}

CountReport count_report(const TilePlan& plan, double gamma) {
    CountReport report;
    report.overlap_fraction = plan.overlap_fraction;
    report.gamma = gamma;
    report.total = plan.total_tiles();
    report.retained = plan.retained_count();
    report.skipped = report.total - report.retained;
    for (int axis = 0; axis < 3; ++axis) {
        report.origins[axis] = plan.axes[axis].origins;
        report.stride[axis] = plan.axes[axis].stride;
        report.overlap_len[axis] = plan.axes[axis].overlap;
    }
    return report;
}

std::string count_report_json(const CountReport& report) {
    nlohmann::ordered_json j;
    j["p"] = report.overlap_fraction;
    j["gamma"] = report.gamma;
    j["total"] = report.total;
    j["retained"] = report.retained;
    j["skipped"] = report.skipped;
    j["origins"] = {report.origins[0], report.origins[1], report.origins[2]};
    j["stride"] = {report.stride[0], report.stride[1], report.stride[2]};
    j["overlap_len"] = {report.overlap_len[0], report.overlap_len[1], report.overlap_len[2]};
    return j.dump(2);
}

std::string count_report_csv(const CountReport& report) {
    std::ostringstream out;
    out << "p,gamma,total,retained,skipped\n";
    out << report.overlap_fraction << ',' << report.gamma << ',' << report.total << ','
        << report.retained << ',' << report.skipped << '\n';
    return out.str();
}

}  // namespace submerge
