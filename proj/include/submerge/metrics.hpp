// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "submerge/grid.hpp"
#include "submerge/tile_plan.hpp"

namespace submerge {

/// Mean |pred - ref| over mask voxels, accumulated in double.
double masked_mae(const VoxelGrid& pred, const VoxelGrid& ref, const BinaryMask& mask);

struct PsnrResult {
    std::optional<double> psnr_db;  // empty when the volumes are identical (MSE 0)
    double peak_used = 0.0;
    double mse = 0.0;
};

/// 10*log10(peak^2 / MSE) over mask voxels. peak empty means "auto": the
/// masked dynamic range max(ref) - min(ref). peak_used reports whichever
/// value entered the formula so results stay comparable across datasets.
PsnrResult masked_psnr(const VoxelGrid& pred, const VoxelGrid& ref, const BinaryMask& mask,
                       std::optional<double> peak = std::nullopt);

/// Per-boundary seam diagnostic along one axis: for each interior tile
/// origin o, the mean |v(o) - v(o-1)| over the boundary plane, restricted to
/// pairs with both voxels inside the mask. Returns one entry per interior
/// origin; an entry is empty when no pair of the plane lies in the mask.
std::vector<std::optional<double>> seam_profile(const VoxelGrid& volume,
                                                const TilePlan& plan, int axis,
                                                const BinaryMask& mask);

/// Pair-count-weighted mean of seam_profile over all three axes. Empty when
/// the plan has no interior boundary with mask coverage.
std::optional<double> seam_gradient_mean(const VoxelGrid& volume, const TilePlan& plan,
                                         const BinaryMask& mask);

struct MetricReport {
    double mae = 0.0;
    std::optional<double> psnr_db;
    double peak_used = 0.0;
    std::size_t voxels_evaluated = 0;
    std::optional<double> seam_gradient;
};

/// MAE/PSNR of pred vs ref plus the seam diagnostic evaluated on the
/// residual pred - ref, so tile-boundary steps are not drowned out by the
/// reference's own anatomy gradients crossing the same planes.
MetricReport evaluate(const VoxelGrid& pred, const VoxelGrid& ref, const BinaryMask& mask,
                      const TilePlan& plan, std::optional<double> peak = std::nullopt);

std::string metric_report_json(const MetricReport& report);

/// Header line plus one row; PSNR cell holds "identical" when MSE was 0.
std::string metric_report_csv(const MetricReport& report);

}  // namespace submerge
