// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#include "submerge/blend.hpp"

#include <algorithm>
#include <cmath>

namespace submerge {

double blend_weight(int j, int overlap_len, double gamma) {
    if (overlap_len < 1) {
        throw Error("overlap length must be >= 1, got " + std::to_string(overlap_len));
    }
    if (j < 0 || j >= overlap_len) {
        throw Error("blend index " + std::to_string(j) + " out of range [0, " +
                    std::to_string(overlap_len) + ")");
    }
    if (!(std::isfinite(gamma) && gamma > 0.0)) {
        throw Error("gamma must be finite and > 0");
    }
    if (j == 0) {
        return 0.0;
    }
    const double t = static_cast<double>(j) / static_cast<double>(overlap_len);
    return gamma == 1.0 ? t : std::pow(t, gamma);
}

void MergeConfig::validate() const {
    if (!(std::isfinite(gamma) && gamma > 0.0)) {
        throw Error("gamma must be finite and > 0");
    }
    std::array<int, 3> sorted = axis_order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::array<int, 3>{0, 1, 2}) {
        throw Error("axis order must be a permutation of 0,1,2");
    }
    if (!std::isfinite(fill_value)) {
        throw Error("fill value must be finite");
    }
}

VoxelGrid extract_tile(const VoxelGrid& volume, const Index3& origin,
                       const Index3& tile_size, float pad_value) {
    for (int axis = 0; axis < 3; ++axis) {
        if (origin[axis] < 0 || origin[axis] >= volume.dims()[axis]) {
            throw Error("tile origin outside volume on axis " + std::to_string(axis));
        }
    }
    VoxelGrid tile(tile_size, volume.spacing(), pad_value);
    const Index3 copy{
        std::min(tile_size[0], volume.dims()[0] - origin[0]),
        std::min(tile_size[1], volume.dims()[1] - origin[1]),
        std::min(tile_size[2], volume.dims()[2] - origin[2])};
    for (int z = 0; z < copy[2]; ++z) {
        for (int y = 0; y < copy[1]; ++y) {
            const float* src = &volume.values()[volume.index(origin[0], origin[1] + y,
                                                             origin[2] + z)];
            float* dst = &tile.values()[tile.index(0, y, z)];
            std::copy(src, src + copy[0], dst);
        }
    }
    return tile;
}

namespace {

// One merge unit: a tile, long cuboid, or flat slab, positioned in padded
// volume coordinates. flags mark voxels carrying predicted data; everything
// else still holds the fill value and must not take part in blending.
struct Block {
    Index3 dims{0, 0, 0};
    Index3 origin{0, 0, 0};
    std::vector<float> values;
    std::vector<std::uint8_t> flags;
    bool any_data = false;

    Block(const Index3& d, const Index3& o, float fill)
        : dims(d), origin(o), values(voxel_count(d), fill), flags(voxel_count(d), 0) {}

    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(y) +
                    static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(z));
    }
};

// Sequential placement of `unit` onto `canvas` along `axis`. covered_end is
// the canvas-local end of everything placed so far on that axis; the pairwise
// overlap is its distance into the unit, clamped to the unit length (the
// clamped last tile of an axis yields a larger overlap than the nominal N).
// Blending is gated per voxel on both sides carrying data, so gaps left by
// mask-skipped tiles stay at fill and are overwritten, not averaged.
void place(Block& canvas, const Block& unit, int axis, double gamma, int& covered_end) {
    if (!unit.any_data) {
        return;  // nothing to place; coverage bookkeeping unchanged
    }
    for (int a = 0; a < 3; ++a) {
        if (a == axis) continue;
        if (unit.dims[a] != canvas.dims[a] || unit.origin[a] != canvas.origin[a]) {
            throw Error("merge cross-section mismatch on axis " + std::to_string(a));
        }
    }
    const int start = unit.origin[axis] - canvas.origin[axis];
    const int unit_len = unit.dims[axis];
    if (start < 0 || start + unit_len > canvas.dims[axis]) {
        throw Error("merge unit outside canvas on axis " + std::to_string(axis));
    }

    const int overlap = std::clamp(covered_end - start, 0, unit_len);
    std::vector<double> weight(static_cast<std::size_t>(unit_len));
    for (int j = 0; j < unit_len; ++j) {
        weight[j] = j < overlap ? blend_weight(j, overlap, gamma) : 1.0;
    }

    Index3 shift{0, 0, 0};
    shift[axis] = start;
    for (int z = 0; z < unit.dims[2]; ++z) {
        for (int y = 0; y < unit.dims[1]; ++y) {
            const std::size_t u_row = unit.index(0, y, z);
            const std::size_t c_row = canvas.index(shift[0], y + shift[1], z + shift[2]);
            for (int x = 0; x < unit.dims[0]; ++x) {
                const std::size_t ui = u_row + x;
                if (!unit.flags[ui]) continue;
                const int j = axis == 0 ? x : axis == 1 ? y : z;
                const std::size_t ci = c_row + x;
                const float uv = unit.values[ui];
                canvas.values[ci] =
                    canvas.flags[ci]
                        ? static_cast<float>(blend_pair(canvas.values[ci], uv, weight[j]))
                        : uv;
                canvas.flags[ci] = 1;
            }
        }
    }
    canvas.any_data = true;
    covered_end = std::max(covered_end, start + unit_len);
}

}  // namespace

VoxelGrid assemble(const TilePlan& plan, const MergeConfig& config,
                   const Spacing3& spacing, const TileSource& source) {
    config.validate();
    const int a0 = config.axis_order[0];
    const int a1 = config.axis_order[1];
    const int a2 = config.axis_order[2];
    const Index3 n = plan.lattice_dims();

    // Padded extent: the volume extent, or the tile length where the volume
    // is shorter than one tile. Equal to last origin + tile length.
    Index3 padded;
    for (int a = 0; a < 3; ++a) {
        padded[a] = plan.axes[a].origins.back() + plan.tile_size[a];
    }

    Block volume(padded, Index3{0, 0, 0}, config.fill_value);
    int covered2 = 0;
    for (int i2 = 0; i2 < n[a2]; ++i2) {
        Index3 slab_dims = padded;
        slab_dims[a2] = plan.tile_size[a2];
        Index3 slab_origin{0, 0, 0};
        slab_origin[a2] = plan.axes[a2].origins[i2];
        Block slab(slab_dims, slab_origin, config.fill_value);

        int covered1 = 0;
        for (int i1 = 0; i1 < n[a1]; ++i1) {
            Index3 row_dims = slab_dims;
            row_dims[a1] = plan.tile_size[a1];
            Index3 row_origin = slab_origin;
            row_origin[a1] = plan.axes[a1].origins[i1];
            Block row(row_dims, row_origin, config.fill_value);

            int covered0 = 0;
            for (int i0 = 0; i0 < n[a0]; ++i0) {
                Index3 cell;
                cell[a0] = i0;
                cell[a1] = i1;
                cell[a2] = i2;
                if (!plan.is_retained(cell[0], cell[1], cell[2])) continue;

                VoxelGrid predicted = source(cell[0], cell[1], cell[2]);
                if (predicted.dims() != plan.tile_size) {
                    throw Error("predicted tile dims " + dims_to_string(predicted.dims()) +
                                " do not match tile size " + dims_to_string(plan.tile_size));
                }
                Block tile(plan.tile_size, plan.tile_origin(cell[0], cell[1], cell[2]),
                           config.fill_value);
                tile.values = std::move(predicted.values());
                std::fill(tile.flags.begin(), tile.flags.end(), std::uint8_t{1});
                tile.any_data = true;
                place(row, tile, a0, config.gamma, covered0);
            }
            place(slab, row, a1, config.gamma, covered1);
        }
        place(volume, slab, a2, config.gamma, covered2);
    }

    // Crop planner padding back to the real extent.
    VoxelGrid out(plan.volume_dims, spacing, config.fill_value);
    for (int z = 0; z < plan.volume_dims[2]; ++z) {
        for (int y = 0; y < plan.volume_dims[1]; ++y) {
            const float* src = &volume.values[volume.index(0, y, z)];
            float* dst = &out.values()[out.index(0, y, z)];
            std::copy(src, src + plan.volume_dims[0], dst);
        }
    }
    return out;
}

}  // namespace submerge
