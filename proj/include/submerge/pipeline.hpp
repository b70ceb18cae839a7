// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "submerge/blend.hpp"
#include "submerge/grid.hpp"
#include "submerge/predictor.hpp"
#include "submerge/tile_plan.hpp"

namespace submerge {

/// End-to-end predict-and-merge configuration.
///
/// normalize selects the intensity convention of `input`:
///   ct   - input is HU; it is normalized with its own per-volume minimum,
///          and the output is denormalized with the same record (so an
///          identity predictor round-trips exactly).
///   mri  - input is raw MRI; it is scaled by 1/1000, the predictor output
///          is treated as normalized CT, and ct_offset supplies the offset
///          for denormalization.
///   none - no scaling on either side; fill_hu is used verbatim.
struct PipelineConfig {
    enum class Normalize { ct, mri, none };

    Index3 tile_size{32, 96, 96};
    double overlap = 0.0;
    double gamma = 1.0;
    std::array<int, 3> axis_order{0, 1, 2};
    Normalize normalize = Normalize::ct;
    double ct_offset = -1000.0;  // denormalization offset for mri mode
    double fill_hu = -1000.0;    // unpredicted voxels after denormalization
    int workers = 0;             // parallel tile predictions; 0 = CPU count
};

struct PipelineResult {
    VoxelGrid output;  // HU for ct/mri modes, raw for none
    VoxelGrid merged;  // the same volume before denormalization
    NormalizationRecord record;
    TilePlan plan;
};

/// Normalize, mask, tile, predict, merge hierarchically, denormalize.
/// Prediction runs on up to `workers` threads, prefetching tiles ahead of
/// the strictly sequential merge, so the result is independent of the worker
/// count (external predictors force workers = 1; their protocol is one
/// ordered stream).
PipelineResult run_pipeline(const VoxelGrid& input, const BinaryMask& mask,
                            const PredictorSpec& predictor, const PipelineConfig& config);

}  // namespace submerge
