// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "submerge/grid.hpp"

namespace submerge {

/// Tile origins along one axis. Origins start at 0 and advance by `stride`;
/// the last origin is clamped to extent - tile_len when the regular sequence
/// would overshoot. When the extent is shorter than the tile the single
/// origin 0 is used and `pad` records the right-side shortfall (padding is
/// supplied at extraction and cropped away after assembly).
struct AxisPlan {
    std::vector<int> origins;
    int tile_len = 0;
    int stride = 0;   // s = max(1, round_half_up(tile_len * (1 - p)))
    int overlap = 0;  // nominal pair overlap N = tile_len - s
    int pad = 0;      // tile_len - extent when extent < tile_len, else 0
};

AxisPlan plan_axis(int extent, int tile_len, double overlap_fraction);

/// Cartesian product of three axis plans plus a retained/skipped flag per
/// lattice cell. A fresh plan retains every tile; filter_by_mask clears the
/// flags of tiles whose in-volume footprint misses the mask entirely.
struct TilePlan {
    Index3 volume_dims{0, 0, 0};
    Index3 tile_size{0, 0, 0};
    double overlap_fraction = 0.0;
    std::array<AxisPlan, 3> axes;
    std::vector<std::uint8_t> retained;  // lattice cells, x-fastest

    Index3 lattice_dims() const {
        return Index3{static_cast<int>(axes[0].origins.size()),
                      static_cast<int>(axes[1].origins.size()),
                      static_cast<int>(axes[2].origins.size())};
    }

    std::size_t lattice_index(int ix, int iy, int iz) const {
        const Index3 n = lattice_dims();
        return static_cast<std::size_t>(ix) +
               static_cast<std::size_t>(n[0]) *
                   (static_cast<std::size_t>(iy) +
                    static_cast<std::size_t>(n[1]) * static_cast<std::size_t>(iz));
    }

    Index3 tile_origin(int ix, int iy, int iz) const {
        return Index3{axes[0].origins[ix], axes[1].origins[iy], axes[2].origins[iz]};
    }

    bool is_retained(int ix, int iy, int iz) const {
        return retained[lattice_index(ix, iy, iz)] != 0;
    }

    std::size_t total_tiles() const { return retained.size(); }
    std::size_t retained_count() const;
    std::size_t skipped_count() const { return total_tiles() - retained_count(); }
};

TilePlan plan_volume(const Index3& dims, const Index3& tile_size, double overlap_fraction);

/// Copy of `plan` whose retained set is the tiles with at least one nonzero
/// mask voxel inside their in-volume footprint. Uses a 3-D prefix sum, so
/// cost is O(volume + tiles), not O(tiles x tile volume).
TilePlan filter_by_mask(const TilePlan& plan, const BinaryMask& mask);

struct CountReport {
    double overlap_fraction = 0.0;
    double gamma = 1.0;  // pass-through so sweep CSVs can carry it
    std::size_t total = 0;
    std::size_t retained = 0;
    std::size_t skipped = 0;
    std::array<std::vector<int>, 3> origins;
    Index3 stride{0, 0, 0};
    Index3 overlap_len{0, 0, 0};
};

CountReport count_report(const TilePlan& plan, double gamma = 1.0);

std::string count_report_json(const CountReport& report);

/// Header line plus one data row: p,gamma,total,retained,skipped.
std::string count_report_csv(const CountReport& report);

}  // namespace submerge
