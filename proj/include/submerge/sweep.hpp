// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "submerge/metrics.hpp"
#include "submerge/pipeline.hpp"

namespace submerge {

struct SweepRow {
    double overlap = 0.0;
    double gamma = 1.0;
    std::size_t retained_tiles = 0;
    double mae = 0.0;
    std::optional<double> psnr_db;
    std::optional<double> seam_gradient;
    double wall_time_s = 0.0;
};

/// Parses "start:stop:step" (inclusive ends) or a single number.
/// "0.1:1.9:0.1" yields the 19 values 0.1, 0.2, ..., 1.9.
std::vector<double> parse_sweep_range(const std::string& text);

/// One pipeline run per gamma at fixed overlap; rows sorted by gamma.
/// ref is in the same intensity space as the pipeline output.
std::vector<SweepRow> sweep_gamma(const VoxelGrid& input, const VoxelGrid& ref,
                                  const BinaryMask& mask, const PredictorSpec& predictor,
                                  PipelineConfig config, std::vector<double> gammas);

/// One pipeline run per overlap fraction at fixed gamma; rows sorted by p.
std::vector<SweepRow> sweep_overlap(const VoxelGrid& input, const VoxelGrid& ref,
                                    const BinaryMask& mask, const PredictorSpec& predictor,
                                    PipelineConfig config, std::vector<double> overlaps);

// CSV schemas are versioned by their leading comment line; the header row
// and cell order are load-bearing for downstream parsing. PSNR prints
// "identical" for the zero-MSE sentinel; an absent seam gradient prints as
// an empty cell.
void write_sweep_gamma_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_sweep_overlap_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Self-contained single-series line chart; no external assets.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<double>& xs,
                           const std::vector<double>& ys);

}  // namespace submerge
