// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>

#include "submerge/grid.hpp"
#include "submerge/tile_plan.hpp"

namespace submerge {

/// Cross-fade weight for overlap offset j in an overlap of length N:
/// w = (j/N)^gamma. j counts from the side nearest the accumulated canvas,
/// so w(0) = 0 keeps the canvas endpoint exact, and the first voxel past the
/// overlap (weight 1 by convention) keeps the incoming side exact.
/// gamma = 1 is computed as j/N directly so linearity is exact, not just
/// within pow() rounding.
double blend_weight(int j, int overlap_len, double gamma);

inline double blend_pair(double canvas_value, double incoming_value, double w) {
    return (1.0 - w) * canvas_value + w * incoming_value;
}

struct MergeConfig {
    double gamma = 1.0;
    std::array<int, 3> axis_order{0, 1, 2};  // tiles -> cuboids -> slabs -> volume
    float fill_value = 0.0f;                 // voxels covered by no retained tile

    void validate() const;
};

/// Copies the tile-shaped window at `origin` out of `volume`. Parts of the
/// window outside the volume (undersized axes only, per the planner) are set
/// to pad_value.
VoxelGrid extract_tile(const VoxelGrid& volume, const Index3& origin,
                       const Index3& tile_size, float pad_value = 0.0f);

/// Supplies the predicted tile for a retained lattice cell. assemble calls
/// this exactly once per retained tile, in merge order: ascending along
/// axis_order[0], then axis_order[1], then axis_order[2]. Implementations may
/// prefetch ahead of that order but must return tiles for the requested cell.
using TileSource = std::function<VoxelGrid(int ix, int iy, int iz)>;

/// Hierarchical sequential merge. Rows of tiles are cross-faded into long
/// cuboids along axis_order[0], cuboids into slabs along axis_order[1], and
/// slabs into the volume along axis_order[2]. Within each stage the units
/// are placed in ascending origin order; each placement blends the incoming
/// unit against the accumulated canvas over their pairwise overlap with
/// blend_weight, copies the rest, and fills any gap left by skipped tiles
/// with fill_value. Output dims are plan.volume_dims (planner padding is
/// cropped). Pure given (plan, config, tiles): repeated runs are
/// bit-identical.
VoxelGrid assemble(const TilePlan& plan, const MergeConfig& config,
                   const Spacing3& spacing, const TileSource& source);

}  // namespace submerge
