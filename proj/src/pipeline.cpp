// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#include "submerge/pipeline.hpp"

#include <deque>
#include <future>
#include <thread>
#include <utility>

namespace submerge {

PipelineResult run_pipeline(const VoxelGrid& input, const BinaryMask& mask,
                            const PredictorSpec& predictor_spec,
                            const PipelineConfig& config) {
    require_same_dims(input.dims(), mask.dims(), "input vs mask");

    VoxelGrid work;
    NormalizationRecord record;
    switch (config.normalize) {
        case PipelineConfig::Normalize::ct: {
            auto [normalized, rec] = normalize_ct(input);
            work = std::move(normalized);
            record = rec;
            break;
        }
        case PipelineConfig::Normalize::mri:
            work = normalize_mri(input);
            record.ct_offset = config.ct_offset;
            break;
        case PipelineConfig::Normalize::none:
            work = input;
            break;
    }
    work = apply_mask(work, mask);

    TilePlan plan = filter_by_mask(
        plan_volume(input.dims(), config.tile_size, config.overlap), mask);

    MergeConfig merge;
    merge.gamma = config.gamma;
    merge.axis_order = config.axis_order;
    merge.fill_value =
        config.normalize == PipelineConfig::Normalize::none
            ? static_cast<float>(config.fill_hu)
            : static_cast<float>((config.fill_hu - record.ct_offset) /
                                 NormalizationRecord::kCtScale);
    merge.validate();

    std::unique_ptr<Predictor> predictor = make_predictor(predictor_spec);
    int workers = config.workers > 0
                      ? config.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (!predictor->parallel_safe()) workers = 1;

    // Retained cells in the exact order assemble will request them:
    // ascending along axis_order[0] innermost, then [1], then [2].
    std::vector<Index3> order;
    order.reserve(plan.retained_count());
    const Index3 n = plan.lattice_dims();
    const int a0 = config.axis_order[0];
    const int a1 = config.axis_order[1];
    const int a2 = config.axis_order[2];
    for (int i2 = 0; i2 < n[a2]; ++i2) {
        for (int i1 = 0; i1 < n[a1]; ++i1) {
            for (int i0 = 0; i0 < n[a0]; ++i0) {
                Index3 cell;
                cell[a0] = i0;
                cell[a1] = i1;
                cell[a2] = i2;
                if (plan.is_retained(cell[0], cell[1], cell[2])) {
                    order.push_back(cell);
                }
            }
        }
    }

    auto predict_cell = [&](const Index3& cell) {
        const Index3 origin = plan.tile_origin(cell[0], cell[1], cell[2]);
        VoxelGrid tile = extract_tile(work, origin, plan.tile_size, 0.0f);
        return predictor->predict(tile, origin);
    };

    // Prediction runs ahead of the merge on a bounded window of futures;
    // the merge consumes strictly in order, so worker count and scheduling
    // cannot change the output.
    std::deque<std::future<VoxelGrid>> window;
    std::size_t next_launch = 0;
    auto launch_one = [&]() {
        if (next_launch >= order.size()) return;
        const Index3 cell = order[next_launch++];
        window.push_back(
            std::async(std::launch::async, [&predict_cell, cell] { return predict_cell(cell); }));
    };

    std::size_t consumed = 0;
    TileSource source = [&](int ix, int iy, int iz) -> VoxelGrid {
        if (consumed >= order.size() || order[consumed] != Index3{ix, iy, iz}) {
            throw Error("internal: tile requested out of merge order");
        }
        ++consumed;
        if (workers <= 1) {
            return predict_cell(Index3{ix, iy, iz});
        }
        while (window.size() < static_cast<std::size_t>(workers) &&
               next_launch < order.size()) {
            launch_one();
        }
        VoxelGrid result = window.front().get();
        window.pop_front();
        launch_one();
        return result;
    };

    PipelineResult result;
    result.merged = assemble(plan, merge, input.spacing(), source);
    predictor->finish();

    result.output = config.normalize == PipelineConfig::Normalize::none
                        ? result.merged
                        : denormalize_ct(result.merged, record);
    result.record = record;
    result.plan = std::move(plan);
    return result;
}

}  // namespace submerge
