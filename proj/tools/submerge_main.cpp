// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "submerge/blend.hpp"
#include "submerge/metrics.hpp"
#include "submerge/nifti_io.hpp"
#include "submerge/phantom.hpp"
#include "submerge/pipeline.hpp"
#include "submerge/sweep.hpp"
#include "submerge/vgrid_io.hpp"

namespace {

using namespace submerge;

Index3 parse_triple(const std::string& text, const char* what) {
    Index3 out{0, 0, 0};
    std::size_t begin = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t end = i < 2 ? text.find(',', begin) : text.size();
        if (end == std::string::npos) {
            throw Error(std::string(what) + " wants three comma-separated integers, got '" +
                        text + "'");
        }
        try {
            std::size_t used = 0;
            out[i] = std::stoi(text.substr(begin, end - begin), &used);
            if (used != end - begin) throw std::invalid_argument(text);
        } catch (const std::exception&) {
            throw Error(std::string(what) + ": bad integer in '" + text + "'");
        }
        begin = end + 1;
    }
    return out;
}

std::array<double, 3> parse_triple_d(const std::string& text, const char* what) {
    std::array<double, 3> out{0, 0, 0};
    std::size_t begin = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t end = i < 2 ? text.find(',', begin) : text.size();
        if (end == std::string::npos) {
            throw Error(std::string(what) + " wants three comma-separated numbers, got '" +
                        text + "'");
        }
        try {
            std::size_t used = 0;
            out[i] = std::stod(text.substr(begin, end - begin), &used);
            if (used != end - begin) throw std::invalid_argument(text);
        } catch (const std::exception&) {
            throw Error(std::string(what) + ": bad number in '" + text + "'");
        }
        begin = end + 1;
    }
    return out;
}

bool is_nifti_path(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".nii") == 0;
}

VoxelGrid load_volume(const std::string& path) {
    return is_nifti_path(path) ? read_nifti_volume(path) : read_vgrid(path);
}

BinaryMask load_mask(const std::string& path) {
    return is_nifti_path(path) ? read_nifti_mask(path) : read_vgrid_mask(path);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text).flush()) {
        throw Error("cannot write " + path);
    }
}

PipelineConfig::Normalize parse_normalize(const std::string& text) {
    if (text == "ct") return PipelineConfig::Normalize::ct;
    if (text == "mri") return PipelineConfig::Normalize::mri;
    if (text == "none") return PipelineConfig::Normalize::none;
    throw Error("unknown --normalize mode '" + text + "' (want ct, mri, or none)");
}

// Shared flags of merge and the two sweeps.
struct PipelineArgs {
    std::string input;
    std::string mask;
    std::string ref;
    std::string predictor = "identity";
    std::string tile = "32,96,96";
    std::string normalize = "ct";
    std::string axis_order = "0,1,2";
    double overlap = 0.0;
    double gamma = 1.0;
    double fill_hu = -1000.0;
    double ct_offset = -1000.0;
    int workers = 0;

    void add_common(CLI::App& cmd) {
        cmd.add_option("--input", input, "input volume (.vgrid prefix or .nii)")
            ->required();
        cmd.add_option("--mask", mask, "binary mask (.vgrid prefix or .nii); default full");
        cmd.add_option("--predictor", predictor,
                       "identity | constant:<c> | affine:<a,b,c,d> | "
                       "edge-bias:<beta,q[,inner]> | external:<command>");
        cmd.add_option("--tile", tile, "tile size, voxels (default 32,96,96)");
        cmd.add_option("--normalize", normalize, "input intensity convention: ct|mri|none");
        cmd.add_option("--ct-offset", ct_offset,
                       "denormalization offset in HU for --normalize mri");
        cmd.add_option("--fill", fill_hu, "fill for unpredicted voxels, HU (default -1000)");
        cmd.add_option("--axis-order", axis_order, "merge hierarchy order (default 0,1,2)");
        cmd.add_option("--workers", workers, "parallel tile predictions; 0 = CPU count");
    }

    PipelineConfig config() const {
        PipelineConfig cfg;
        cfg.tile_size = parse_triple(tile, "--tile");
        cfg.overlap = overlap;
        cfg.gamma = gamma;
        const Index3 order = parse_triple(axis_order, "--axis-order");
        cfg.axis_order = {order[0], order[1], order[2]};
        cfg.normalize = parse_normalize(normalize);
        cfg.ct_offset = ct_offset;
        cfg.fill_hu = fill_hu;
        cfg.workers = workers;
        return cfg;
    }

    // Reference for metrics; the input itself when --ref is omitted, which is
    // the ablation mode (a synthetic predictor perturbing its own input).
    VoxelGrid load_ref(const VoxelGrid& input_grid) const {
        return ref.empty() ? input_grid : load_volume(ref);
    }

    BinaryMask load_mask_or_full(const Index3& dims) const {
        return mask.empty() ? BinaryMask::full(dims) : load_mask(mask);
    }
};

int run(int argc, char** argv) {
    CLI::App app{"hierarchical overlap-blended tile merging for volumetric prediction"};
    app.require_subcommand(1);

    // ---- phantom ----
    auto* cmd_phantom = app.add_subcommand("phantom", "generate a synthetic test volume");
    std::string ph_dims = "128,192,192";
    std::string ph_spacing = "1,1,1";
    std::string ph_semi;
    std::string ph_prefix;
    std::uint64_t ph_seed = 0;
    double ph_shell = 0.85;
    cmd_phantom->add_option("--dims", ph_dims, "volume dims (default 128,192,192)");
    cmd_phantom->add_option("--seed", ph_seed, "modulation seed (default 0)");
    cmd_phantom->add_option("--spacing", ph_spacing, "voxel spacing mm (default 1,1,1)");
    cmd_phantom->add_option("--semi-axes", ph_semi,
                            "ellipsoid semi-axes, voxels (default 0.42*dims)");
    cmd_phantom->add_option("--shell", ph_shell, "bone shell inner fraction (default 0.85)");
    cmd_phantom->add_option("--out-prefix", ph_prefix, "writes <prefix>-{mri,ct,mask}")
        ->required();
    cmd_phantom->callback([&] {
        PhantomSpec spec;
        spec.dims = parse_triple(ph_dims, "--dims");
        const auto spacing = parse_triple_d(ph_spacing, "--spacing");
        spec.spacing = {spacing[0], spacing[1], spacing[2]};
        spec.seed = ph_seed;
        spec.shell_fraction = ph_shell;
        if (!ph_semi.empty()) {
            spec.semi_axes = parse_triple_d(ph_semi, "--semi-axes");
        }
        const Phantom phantom = make_phantom(spec);
        write_vgrid(phantom.mri, ph_prefix + "-mri");
        write_vgrid(phantom.ct, ph_prefix + "-ct");
        write_vgrid_mask(phantom.mask, ph_prefix + "-mask", spec.spacing);
        std::cout << "phantom " << dims_to_string(spec.dims) << ", mask voxels "
                  << phantom.mask.count() << ", wrote " << ph_prefix
                  << "-{mri,ct,mask}" << kVgridHeaderSuffix << "/.raw\n";
    });

    // ---- plan ----
    auto* cmd_plan = app.add_subcommand("plan", "report tile lattice and counts");
    std::string pl_dims;
    std::string pl_input;
    std::string pl_tile = "32,96,96";
    std::string pl_mask;
    std::string pl_format = "json";
    std::string pl_out;
    double pl_overlap = 0.0;
    double pl_gamma = 1.0;
    cmd_plan->add_option("--dims", pl_dims, "volume dims; alternative to --input");
    cmd_plan->add_option("--input", pl_input, "volume whose dims to plan for");
    cmd_plan->add_option("--tile", pl_tile, "tile size (default 32,96,96)");
    cmd_plan->add_option("--overlap", pl_overlap, "overlap fraction p in [0,1)");
    cmd_plan->add_option("--gamma", pl_gamma, "gamma recorded in the report");
    cmd_plan->add_option("--mask", pl_mask, "mask for retained/skipped counts");
    cmd_plan->add_option("--format", pl_format, "json|csv (default json)");
    cmd_plan->add_option("--out", pl_out, "output path (default stdout)");
    cmd_plan->callback([&] {
        Index3 dims;
        if (!pl_dims.empty()) {
            dims = parse_triple(pl_dims, "--dims");
        } else if (!pl_input.empty()) {
            dims = load_volume(pl_input).dims();
        } else {
            throw Error("plan wants --dims or --input");
        }
        TilePlan plan = plan_volume(dims, parse_triple(pl_tile, "--tile"), pl_overlap);
        if (!pl_mask.empty()) {
            plan = filter_by_mask(plan, load_mask(pl_mask));
        }
        const CountReport report = count_report(plan, pl_gamma);
        if (pl_format == "json") {
            write_text(pl_out, count_report_json(report) + "\n");
        } else if (pl_format == "csv") {
            write_text(pl_out, count_report_csv(report));
        } else {
            throw Error("unknown --format '" + pl_format + "' (want json or csv)");
        }
    });

    // ---- merge ----
    auto* cmd_merge = app.add_subcommand("merge", "predict tiles and merge them");
    PipelineArgs mg;
    std::string mg_out;
    std::string mg_report;
    mg.add_common(*cmd_merge);
    cmd_merge->add_option("--overlap", mg.overlap, "overlap fraction p in [0,1)");
    cmd_merge->add_option("--gamma", mg.gamma, "blend exponent (default 1)");
    cmd_merge->add_option("--ref", mg.ref, "reference volume; prints metrics when given");
    cmd_merge->add_option("--out", mg_out, "output volume prefix");
    cmd_merge->add_option("--report", mg_report, "metric report path (default stdout)");
    cmd_merge->callback([&] {
        const VoxelGrid input = load_volume(mg.input);
        const BinaryMask mask = mg.load_mask_or_full(input.dims());
        const PipelineResult result =
            run_pipeline(input, mask, parse_predictor_spec(mg.predictor), mg.config());
        if (!mg_out.empty()) {
            write_vgrid(result.output, mg_out);
        }
        if (!mg.ref.empty()) {
            const VoxelGrid ref = load_volume(mg.ref);
            const MetricReport report = evaluate(result.output, ref, mask, result.plan);
            write_text(mg_report, metric_report_json(report) + "\n");
        } else if (mg_out.empty()) {
            std::cerr << "warning: neither --out nor --ref given; output discarded\n";
        }
    });

    // ---- sweep-gamma ----
    auto* cmd_sg = app.add_subcommand("sweep-gamma", "metric sweep over gamma at fixed p");
    PipelineArgs sg;
    std::string sg_gammas = "0.1:1.9:0.1";
    std::string sg_csv;
    std::string sg_svg;
    sg.overlap = 0.5;
    sg.add_common(*cmd_sg);
    cmd_sg->add_option("--overlap", sg.overlap, "fixed overlap fraction (default 0.5)");
    cmd_sg->add_option("--gammas", sg_gammas, "gamma range start:stop:step, inclusive");
    cmd_sg->add_option("--csv", sg_csv, "CSV output path (default stdout)");
    cmd_sg->add_option("--svg", sg_svg, "optional MAE-vs-gamma chart path");
    cmd_sg->callback([&] {
        const VoxelGrid input = load_volume(sg.input);
        const BinaryMask mask = sg.load_mask_or_full(input.dims());
        const VoxelGrid ref = sg.load_ref(input);
        const auto rows =
            sweep_gamma(input, ref, mask, parse_predictor_spec(sg.predictor), sg.config(),
                        parse_sweep_range(sg_gammas));
        std::ostringstream csv;
        write_sweep_gamma_csv(csv, rows);
        write_text(sg_csv, csv.str());
        if (!sg_svg.empty()) {
            std::vector<double> xs, ys;
            for (const SweepRow& row : rows) {
                xs.push_back(row.gamma);
                ys.push_back(row.mae);
            }
            write_text(sg_svg, line_chart_svg("MAE vs gamma", "gamma", "MAE (HU)", xs, ys));
        }
    });

    // ---- sweep-overlap ----
    auto* cmd_so = app.add_subcommand("sweep-overlap",
                                      "metric sweep over overlap fraction at fixed gamma");
    PipelineArgs so;
    std::string so_overlaps = "0:0.9:0.1";
    std::string so_csv;
    std::string so_svg;
    so.add_common(*cmd_so);
    cmd_so->add_option("--gamma", so.gamma, "fixed gamma (default 1)");
    cmd_so->add_option("--overlaps", so_overlaps, "p range start:stop:step, inclusive");
    cmd_so->add_option("--csv", so_csv, "CSV output path (default stdout)");
    cmd_so->add_option("--svg", so_svg, "optional MAE-vs-p chart path");
    cmd_so->callback([&] {
        const VoxelGrid input = load_volume(so.input);
        const BinaryMask mask = so.load_mask_or_full(input.dims());
        const VoxelGrid ref = so.load_ref(input);
        const auto rows =
            sweep_overlap(input, ref, mask, parse_predictor_spec(so.predictor), so.config(),
                          parse_sweep_range(so_overlaps));
        std::ostringstream csv;
        write_sweep_overlap_csv(csv, rows);
        write_text(so_csv, csv.str());
        if (!so_svg.empty()) {
            std::vector<double> xs, ys;
            for (const SweepRow& row : rows) {
                xs.push_back(row.overlap);
                ys.push_back(row.mae);
            }
            write_text(so_svg,
                       line_chart_svg("MAE vs overlap", "overlap fraction p", "MAE (HU)",
                                      xs, ys));
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help and version exit 0; every usage problem is exit 2.
        return app.exit(e) == 0 ? 0 : 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const submerge::ProtocolError& e) {
        std::cerr << "protocol error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
