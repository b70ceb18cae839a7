// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#include "submerge/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace submerge {

std::vector<double> parse_sweep_range(const std::string& text) {
    const auto bad = [&](const char* why) {
        return Error("invalid sweep range '" + text + "': " + why);
    };
    std::vector<std::string> parts;
    std::size_t begin = 0;
    for (std::size_t pos = text.find(':'); pos != std::string::npos;
         pos = text.find(':', begin)) {
        parts.push_back(text.substr(begin, pos - begin));
        begin = pos + 1;
    }
    parts.push_back(text.substr(begin));

    std::vector<double> numbers;
    for (const std::string& part : parts) {
        try {
            std::size_t used = 0;
            const double v = std::stod(part, &used);
            if (used != part.size() || !std::isfinite(v)) throw std::invalid_argument(part);
            numbers.push_back(v);
        } catch (const std::exception&) {
            throw bad("not a number");
        }
    }
    if (numbers.size() == 1) {
        return numbers;
    }
    if (numbers.size() != 3) {
        throw bad("want a single value or start:stop:step");
    }
    const double start = numbers[0], stop = numbers[1], step = numbers[2];
    if (step <= 0.0) throw bad("step must be > 0");
    if (stop < start) throw bad("stop must be >= start");

    std::vector<double> values;
    for (int i = 0;; ++i) {
        const double v = start + i * step;
        if (v > stop + step * 1e-9) break;  // inclusive upper end despite FP drift
        values.push_back(v);
    }
    return values;
}

namespace {

SweepRow run_point(const VoxelGrid& input, const VoxelGrid& ref, const BinaryMask& mask,
                   const PredictorSpec& predictor, const PipelineConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    PipelineResult result = run_pipeline(input, mask, predictor, config);
    const auto stop = std::chrono::steady_clock::now();

    const MetricReport report = evaluate(result.output, ref, mask, result.plan);
    SweepRow row;
    row.overlap = config.overlap;
    row.gamma = config.gamma;
    row.retained_tiles = result.plan.retained_count();
    row.mae = report.mae;
    row.psnr_db = report.psnr_db;
    row.seam_gradient = report.seam_gradient;
    row.wall_time_s = std::chrono::duration<double>(stop - start).count();
    return row;
}

void write_cell(std::ostream& out, const std::optional<double>& value, const char* sentinel) {
    if (value) {
        out << *value;
    } else {
        out << sentinel;
    }
}

}  // namespace

std::vector<SweepRow> sweep_gamma(const VoxelGrid& input, const VoxelGrid& ref,
                                  const BinaryMask& mask, const PredictorSpec& predictor,
                                  PipelineConfig config, std::vector<double> gammas) {
    if (gammas.empty()) throw Error("gamma sweep needs at least one value");
    std::sort(gammas.begin(), gammas.end());
    std::vector<SweepRow> rows;
    rows.reserve(gammas.size());
    for (const double gamma : gammas) {
        config.gamma = gamma;
        rows.push_back(run_point(input, ref, mask, predictor, config));
    }
    return rows;
}

std::vector<SweepRow> sweep_overlap(const VoxelGrid& input, const VoxelGrid& ref,
                                    const BinaryMask& mask, const PredictorSpec& predictor,
                                    PipelineConfig config, std::vector<double> overlaps) {
    if (overlaps.empty()) throw Error("overlap sweep needs at least one value");
    std::sort(overlaps.begin(), overlaps.end());
    std::vector<SweepRow> rows;
    rows.reserve(overlaps.size());
    for (const double p : overlaps) {
        config.overlap = p;
        rows.push_back(run_point(input, ref, mask, predictor, config));
    }
    return rows;
}

void write_sweep_gamma_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "# submerge sweep-gamma csv v1\n";
    out << "gamma,mae_hu,psnr_db,seam_gradient,wall_time_s\n";
    for (const SweepRow& row : rows) {
        out << row.gamma << ',' << row.mae << ',';
        write_cell(out, row.psnr_db, "identical");
        out << ',';
        write_cell(out, row.seam_gradient, "");
        out << ',' << row.wall_time_s << '\n';
    }
}

void write_sweep_overlap_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "# submerge sweep-overlap csv v1\n";
    out << "p,retained_tiles,mae_hu,psnr_db,seam_gradient,wall_time_s\n";
    for (const SweepRow& row : rows) {
        out << row.overlap << ',' << row.retained_tiles << ',' << row.mae << ',';
        write_cell(out, row.psnr_db, "identical");
        out << ',';
        write_cell(out, row.seam_gradient, "");
        out << ',' << row.wall_time_s << '\n';
    }
}

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<double>& xs,
                           const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        throw Error("chart series length mismatch");
    }
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isfinite(xs[i]) && std::isfinite(ys[i])) {
            points.emplace_back(xs[i], ys[i]);
        }
    }
    if (points.empty()) {
        throw Error("chart has no finite points");
    }

    const double width = 640, height = 420;
    const double left = 72, right = 24, top = 44, bottom = 56;
    double x_min = points[0].first, x_max = points[0].first;
    double y_min = points[0].second, y_max = points[0].second;
    for (const auto& [x, y] : points) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    }
    if (x_max == x_min) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    const double y_pad = (y_max - y_min) == 0.0 ? std::max(1.0, std::abs(y_min)) * 0.1
                                                : (y_max - y_min) * 0.08;
    y_min -= y_pad;
    y_max += y_pad;

    const auto px = [&](double x) {
        return left + (x - x_min) / (x_max - x_min) * (width - left - right);
    };
    const auto py = [&](double y) {
        return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom);
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "  <rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    svg << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // Axes and ticks.
    svg << "  <line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\""
        << width - right << "\" y2=\"" << height - bottom
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << height - bottom << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double tx = x_min + (x_max - x_min) * i / ticks;
        const double ty = y_min + (y_max - y_min) * i / ticks;
        svg << "  <line x1=\"" << px(tx) << "\" y1=\"" << height - bottom << "\" x2=\""
            << px(tx) << "\" y2=\"" << height - bottom + 5
            << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg << "  <text x=\"" << px(tx) << "\" y=\"" << height - bottom + 19
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(tx) << "</text>\n";
        svg << "  <line x1=\"" << left - 5 << "\" y1=\"" << py(ty) << "\" x2=\"" << left
            << "\" y2=\"" << py(ty) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg << "  <text x=\"" << left - 8 << "\" y=\"" << py(ty) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(ty) << "</text>\n";
    }
    svg << "  <text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << x_label << "</text>\n";
    svg << "  <text x=\"18\" y=\"" << (top + height - bottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << (top + height - bottom) / 2 << ")\">" << y_label
        << "</text>\n";

    svg << "  <polyline fill=\"none\" stroke=\"#1f6fb4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i) svg << ' ';
        svg << px(points[i].first) << ',' << py(points[i].second);
    }
    svg << "\"/>\n";
    for (const auto& [x, y] : points) {
        svg << "  <circle cx=\"" << px(x) << "\" cy=\"" << py(y)
            << "\" r=\"2.5\" fill=\"#1f6fb4\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace submerge
