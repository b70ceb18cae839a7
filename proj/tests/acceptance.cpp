// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// values pinned next to their tolerances. Exercises the installed library
// and the real command-line binaries end to end. Usage:
//   acceptance <path-to-submerge> <path-to-echo_predictor>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "submerge/blend.hpp"
#include "submerge/metrics.hpp"
#include "submerge/nifti_io.hpp"
#include "submerge/phantom.hpp"
#include "submerge/pipeline.hpp"
#include "submerge/sweep.hpp"
#include "submerge/tile_plan.hpp"
#include "submerge/vgrid_io.hpp"
#include "test_util.hpp"

using namespace submerge;
using Clock = std::chrono::steady_clock;

namespace {

int criteria_failed = 0;

void report(int number, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << number << ": " << detail
              << std::endl;
    if (!pass) ++criteria_failed;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct RunResult {
    int code = -1;
    std::string output;
};

RunResult run(const std::string& command) {
    RunResult result;
    std::FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    if (!pipe) return result;
    char buffer[4096];
    std::size_t n;
    while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) {
        result.output.append(buffer, n);
    }
    const int status = pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string q(const std::string& s) { return "'" + s + "'"; }

double max_abs_diff(const VoxelGrid& a, const VoxelGrid& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        worst = std::max(worst, std::abs(double(a.values()[i]) - double(b.values()[i])));
    }
    return worst;
}

// ---- criterion 1: identity end-to-end -------------------------------------

void criterion_identity(const Phantom& phantom) {
    const auto start = Clock::now();
    double worst_hu = 0.0;
    std::string worst_at;
    for (double p : {0.0, 0.3, 0.5, 0.7}) {
        for (double gamma : {0.5, 0.9, 1.0, 1.5}) {
            PipelineConfig config;
            config.overlap = p;
            config.gamma = gamma;
            PipelineResult result =
                run_pipeline(phantom.ct, phantom.mask, PredictorSpec{}, config);
            const double err = max_abs_diff(result.output, phantom.ct);
            if (err > worst_hu) {
                worst_hu = err;
                std::ostringstream at;
                at << "p=" << p << " gamma=" << gamma;
                worst_at = at.str();
            }
        }
    }
    const double elapsed = seconds_since(start);
    const double worst_norm = worst_hu / NormalizationRecord::kCtScale;
    std::ostringstream detail;
    detail << "identity end-to-end over 16 (p, gamma) settings: max |out - in| = "
           << worst_norm << " normalized (" << worst_hu << " HU, worst at " << worst_at
           << "; limit 1e-5 normalized), " << elapsed << " s (limit 30)";
    report(1, worst_norm <= 1e-5 && elapsed < 30.0, detail.str());
}

// ---- criterion 2: brute-force oracle equivalence ---------------------------

// Independent sequential-blend oracle in double precision. Mirrors the
// published scheme directly: units are placed in ascending origin order; a
// unit overlapping the covered span by N voxels cross-fades with
// w(j) = (j/N)^gamma (w(0) = 0, w = 1 past the overlap).
struct OracleField {
    Index3 dims;
    std::vector<double> values;
    explicit OracleField(const Index3& d) : dims(d), values(voxel_count(d), 0.0) {}
    double& at(int x, int y, int z) {
        return values[static_cast<std::size_t>(x) +
                      static_cast<std::size_t>(dims[0]) *
                          (static_cast<std::size_t>(y) +
                           static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(z))];
    }
};

void oracle_place(OracleField& canvas, const OracleField& unit, const Index3& origin,
                  int axis, double gamma, int& covered_end) {
    const int start = origin[axis];
    const int len = unit.dims[axis];
    const int overlap = std::max(0, std::min(covered_end - start, len));
    for (int z = 0; z < unit.dims[2]; ++z) {
        for (int y = 0; y < unit.dims[1]; ++y) {
            for (int x = 0; x < unit.dims[0]; ++x) {
                const int j = axis == 0 ? x : axis == 1 ? y : z;
                double w = 1.0;
                if (j < overlap) {
                    w = j == 0 ? 0.0 : std::pow(double(j) / overlap, gamma);
                }
                double& c = canvas.at(origin[0] + x, origin[1] + y, origin[2] + z);
                const double u =
                    unit.values[static_cast<std::size_t>(x) +
                                static_cast<std::size_t>(unit.dims[0]) *
                                    (static_cast<std::size_t>(y) +
                                     static_cast<std::size_t>(unit.dims[1]) *
                                         static_cast<std::size_t>(z))];
                c = (1.0 - w) * c + w * u;
            }
        }
    }
    covered_end = std::max(covered_end, start + len);
}

void criterion_oracle() {
    const auto start = Clock::now();
    const Index3 tile{8, 8, 8};
    const Index3 dims{12, 12, 12};  // 2 origins per axis at stride 4
    TilePlan plan = plan_volume(dims, tile, 0.5);
    bool lattice_ok = plan.lattice_dims() == Index3{2, 2, 2};

    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<float> dist(0.0f, 1.0f);
    std::vector<std::vector<float>> tiles(8);
    for (auto& t : tiles) {
        t.resize(voxel_count(tile));
        for (float& v : t) v = dist(rng);
    }
    const auto tile_of = [&](int ix, int iy, int iz) -> const std::vector<float>& {
        return tiles[static_cast<std::size_t>(ix + 2 * (iy + 2 * iz))];
    };

    double worst = 0.0;
    for (double gamma : {0.9, 1.0}) {
        MergeConfig config;
        config.gamma = gamma;
        VoxelGrid merged =
            assemble(plan, config, {1.0, 1.0, 1.0}, [&](int ix, int iy, int iz) {
                return VoxelGrid::from_values(tile, {1.0, 1.0, 1.0},
                                              std::vector<float>(tile_of(ix, iy, iz)));
            });

        // Oracle: rows along x, then rows into slabs along y, slabs along z.
        OracleField volume(dims);
        int covered_z = 0;
        for (int iz = 0; iz < 2; ++iz) {
            OracleField slab({12, 12, 8});
            int covered_y = 0;
            for (int iy = 0; iy < 2; ++iy) {
                OracleField row({12, 8, 8});
                int covered_x = 0;
                for (int ix = 0; ix < 2; ++ix) {
                    OracleField unit(tile);
                    const auto& src = tile_of(ix, iy, iz);
                    for (std::size_t i = 0; i < src.size(); ++i) unit.values[i] = src[i];
                    oracle_place(row, unit, {plan.axes[0].origins[ix], 0, 0}, 0, gamma,
                                 covered_x);
                }
                oracle_place(slab, row, {0, plan.axes[1].origins[iy], 0}, 1, gamma,
                             covered_y);
            }
            oracle_place(volume, slab, {0, 0, plan.axes[2].origins[iz]}, 2, gamma,
                         covered_z);
        }

        for (std::size_t i = 0; i < volume.values.size(); ++i) {
            worst = std::max(worst,
                             std::abs(volume.values[i] - double(merged.values()[i])));
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << "sequential-blend oracle on a 2x2x2 lattice, p=0.5, gamma in {0.9, 1}: "
           << "max deviation " << worst << " (limit 1e-6), " << elapsed << " s (limit 1)";
    report(2, lattice_ok && worst <= 1e-6 && elapsed < 1.0, detail.str());
}

// ---- criterion 3: artifact suppression direction ----------------------------

void criterion_suppression(const Phantom& phantom) {
    const auto start = Clock::now();
    const PredictorSpec predictor = parse_predictor_spec("edge-bias:0.05,2");

    const auto measure = [&](double p) {
        PipelineConfig config;
        config.overlap = p;
        config.gamma = 1.0;
        PipelineResult result = run_pipeline(phantom.ct, phantom.mask, predictor, config);
        MetricReport metrics =
            evaluate(result.output, phantom.ct, phantom.mask, result.plan);
        return std::make_pair(metrics.mae, metrics.seam_gradient.value_or(0.0));
    };

    const auto [mae0, seam0] = measure(0.0);
    const auto [mae05, seam05] = measure(0.5);
    const double elapsed = seconds_since(start);

    const bool mae_ok = mae05 < mae0;
    const bool seam_ok = seam05 < 0.8 * seam0;
    std::ostringstream detail;
    detail << "edge-biased predictor, overlap 0 -> 0.5: MAE " << mae0 << " -> " << mae05
           << " HU (must drop), residual seam gradient " << seam0 << " -> " << seam05
           << " (must drop by >= 20%), " << elapsed << " s (limit 60)";
    report(3, mae_ok && seam_ok && elapsed < 60.0, detail.str());
}

// ---- criterion 4: tile-count arithmetic -------------------------------------

// Independent origin enumerator: round-half-up stride, walk until the tile
// reaches the end, clamp the last origin.
int enumerate_origins(int extent, int tile, double p) {
    const int stride = std::max(1, int(std::floor(tile * (1.0 - p) + 0.5)));
    int count = 0;
    int origin = 0;
    while (origin + tile < extent) {
        ++count;
        origin += stride;
    }
    return count + 1;  // the clamped (or only) final origin
}

void criterion_counts() {
    const Index3 dims{128, 192, 192};
    const Index3 tile{32, 96, 96};

    const auto total = [&](double p) {
        return plan_volume(dims, tile, p).total_tiles();
    };
    const std::size_t independent_07 =
        std::size_t(enumerate_origins(128, 32, 0.7)) * enumerate_origins(192, 96, 0.7) *
        enumerate_origins(192, 96, 0.7);
    bool counts_ok = total(0.0) == 16 && total(0.5) == 63 &&
                     total(0.7) == independent_07 && independent_07 == 275;

    bool monotone_ok = true;
    std::mt19937_64 rng(404);
    std::bernoulli_distribution coin(0.001);
    for (int trial = 0; trial < 10 && monotone_ok; ++trial) {
        BinaryMask mask(dims);
        for (auto& bit : mask.bits()) bit = coin(rng) ? 1 : 0;
        std::size_t previous = 0;
        for (double p : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
            const std::size_t retained =
                filter_by_mask(plan_volume(dims, tile, p), mask).retained_count();
            if (retained < previous) monotone_ok = false;
            previous = retained;
        }
    }

    std::ostringstream detail;
    detail << "tile totals 16/63/" << total(0.7) << " at p=0/0.5/0.7 (independent "
           << "enumerator gives " << independent_07
           << "); retained monotone in p for 10 random masks: "
           << (monotone_ok ? "yes" : "no");
    report(4, counts_ok && monotone_ok, detail.str());
}

// ---- criterion 5: weight-function law ---------------------------------------

void criterion_weight_law() {
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<int> n_dist(1, 200);
    std::uniform_real_distribution<double> gamma_dist(0.1, 5.0);

    double worst = 0.0;
    bool zero_ok = true;
    bool monotone_ok = true;
    bool linear_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = n_dist(rng);
        const double gamma = gamma_dist(rng);
        const int j = int(rng() % std::uint64_t(n));

        const double w = blend_weight(j, n, gamma);
        const long double ref =
            j == 0 ? 0.0L : powl((long double)j / (long double)n, (long double)gamma);
        worst = std::max(worst, std::abs(w - double(ref)));

        if (blend_weight(0, n, gamma) != 0.0) zero_ok = false;
        if (j > 0 && blend_weight(j, n, gamma) <= blend_weight(j - 1, n, gamma)) {
            monotone_ok = false;
        }
        if (blend_weight(j, n, 1.0) != double(j) / double(n)) linear_ok = false;
    }

    std::ostringstream detail;
    detail << "1000 random (j, N, gamma): max |w - high-precision ref| = " << worst
           << " (limit 1e-12); w(0)=0 " << (zero_ok ? "ok" : "violated")
           << ", monotone " << (monotone_ok ? "ok" : "violated") << ", gamma=1 exact "
           << (linear_ok ? "ok" : "violated");
    report(5, worst <= 1e-12 && zero_ok && monotone_ok && linear_ok, detail.str());
}

// ---- criterion 6: sweep harness shape ---------------------------------------

bool svg_well_formed(const std::string& svg) {
    if (svg.rfind("<?xml", 0) != 0) return false;
    if (svg.find("<svg ") == std::string::npos) return false;
    if (svg.find("xmlns=\"http://www.w3.org/2000/svg\"") == std::string::npos) return false;
    const auto count = [&](const std::string& needle) {
        std::size_t c = 0;
        for (std::size_t pos = svg.find(needle); pos != std::string::npos;
             pos = svg.find(needle, pos + 1))
            ++c;
        return c;
    };
    if (count("<svg") != count("</svg>") || count("</svg>") != 1) return false;
    if (count("<text") != count("</text>")) return false;
    if (count("<polyline") != 1) return false;
    // Every element is closed; nothing dangles after the root closes.
    const std::size_t end = svg.find("</svg>");
    if (svg.find('<', end + 6) != std::string::npos) return false;
    return count("<") == count(">");
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

void criterion_sweeps(const std::string& submerge, const std::string& ct_prefix,
                      const std::string& mask_prefix, const testutil::TempDir& dir) {
    const auto start = Clock::now();
    const std::string gamma_csv = dir.file("accept-gamma.csv");
    const std::string gamma_svg = dir.file("accept-gamma.svg");
    const std::string overlap_csv = dir.file("accept-overlap.csv");
    const std::string overlap_svg = dir.file("accept-overlap.svg");

    const std::string predictor = " --predictor 'edge-bias:0.05,2'";
    RunResult rg = run(q(submerge) + " sweep-gamma --input " + q(ct_prefix) + " --mask " +
                       q(mask_prefix) + predictor +
                       " --overlap 0.5 --gammas 0.1:1.9:0.1 --csv " + q(gamma_csv) +
                       " --svg " + q(gamma_svg));
    RunResult ro = run(q(submerge) + " sweep-overlap --input " + q(ct_prefix) + " --mask " +
                       q(mask_prefix) + predictor +
                       " --gamma 1 --overlaps 0:0.9:0.1 --csv " + q(overlap_csv) +
                       " --svg " + q(overlap_svg));
    const double elapsed = seconds_since(start);

    bool ok = rg.code == 0 && ro.code == 0;
    std::string why = ok ? "" : " (a sweep command failed)";

    const auto glines = lines_of(slurp(gamma_csv));
    if (glines.size() != 21 || glines[0] != "# submerge sweep-gamma csv v1" ||
        glines[1] != "gamma,mae_hu,psnr_db,seam_gradient,wall_time_s") {
        ok = false;
        why += " (gamma csv schema)";
    }

    const auto olines = lines_of(slurp(overlap_csv));
    if (olines.size() != 12 || olines[0] != "# submerge sweep-overlap csv v1" ||
        olines[1] != "p,retained_tiles,mae_hu,psnr_db,seam_gradient,wall_time_s") {
        ok = false;
        why += " (overlap csv schema)";
    } else {
        long previous = -1;
        for (std::size_t i = 2; i < olines.size(); ++i) {
            std::istringstream row(olines[i]);
            std::string p_cell, retained_cell;
            std::getline(row, p_cell, ',');
            std::getline(row, retained_cell, ',');
            const long retained = std::stol(retained_cell);
            if (retained < previous) {
                ok = false;
                why += " (retained tiles decreased)";
                break;
            }
            previous = retained;
        }
    }

    if (!svg_well_formed(slurp(gamma_svg)) || !svg_well_formed(slurp(overlap_svg))) {
        ok = false;
        why += " (svg not well-formed)";
    }
    if (elapsed >= 300.0) {
        ok = false;
        why += " (too slow)";
    }

    std::ostringstream detail;
    detail << "19-gamma and 10-overlap sweeps through the CLI: csv rows "
           << (glines.size() >= 2 ? glines.size() - 2 : 0) << "/"
           << (olines.size() >= 2 ? olines.size() - 2 : 0) << ", " << elapsed
           << " s (limit 300)" << why;
    report(6, ok, detail.str());
}

// ---- criterion 7: format round trips ----------------------------------------

void write_nifti_fixture(const std::string& path, bool scaled) {
    std::vector<unsigned char> bytes(352, 0);
    const std::int32_t sizeof_hdr = 348;
    std::memcpy(bytes.data() + 0, &sizeof_hdr, 4);
    const std::int16_t dim[4] = {3, 2, 2, 2};
    std::memcpy(bytes.data() + 40, dim, sizeof dim);
    const std::int16_t datatype = scaled ? 4 : 16;
    const std::int16_t bitpix = scaled ? 16 : 32;
    std::memcpy(bytes.data() + 70, &datatype, 2);
    std::memcpy(bytes.data() + 72, &bitpix, 2);
    const float pixdim[4] = {1.0f, 1.0f, 2.0f, 3.0f};
    std::memcpy(bytes.data() + 76, pixdim, sizeof pixdim);
    const float vox_offset = 352.0f;
    std::memcpy(bytes.data() + 108, &vox_offset, 4);
    if (scaled) {
        const float slope = 2.0f, inter = -1000.0f;
        std::memcpy(bytes.data() + 112, &slope, 4);
        std::memcpy(bytes.data() + 116, &inter, 4);
    }
    std::memcpy(bytes.data() + 344, "n+1\0", 4);
    for (int i = 0; i < 8; ++i) {
        if (scaled) {
            const std::int16_t v = static_cast<std::int16_t>(100 * i);
            unsigned char raw[2];
            std::memcpy(raw, &v, 2);
            bytes.insert(bytes.end(), raw, raw + 2);
        } else {
            const float v = 10.0f * float(i) - 3.0f;
            unsigned char raw[4];
            std::memcpy(raw, &v, 4);
            bytes.insert(bytes.end(), raw, raw + 4);
        }
    }
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

void criterion_formats(const testutil::TempDir& dir) {
    bool round_trips_ok = true;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<float> value_dist(-1000.0f, 3000.0f);
    for (int trial = 0; trial < 100 && round_trips_ok; ++trial) {
        const Index3 dims = testutil::random_dims(rng, 1, 12);
        VoxelGrid grid(dims, {0.5, 1.0, 1.5});
        for (float& v : grid.values()) v = value_dist(rng);
        const std::string prefix = dir.file("rt-" + std::to_string(trial));
        write_vgrid(grid, prefix);
        const VoxelGrid back = read_vgrid(prefix);
        round_trips_ok = back.dims() == dims && back.spacing() == grid.spacing() &&
                         std::memcmp(back.values().data(), grid.values().data(),
                                     grid.values().size() * sizeof(float)) == 0;
    }

    // Hand-built NIfTI fixtures parse to known values.
    bool nifti_ok = true;
    {
        const std::string plain = dir.file("fixture.nii");
        write_nifti_fixture(plain, false);
        const VoxelGrid grid = read_nifti_volume(plain);
        nifti_ok = grid.dims() == Index3{2, 2, 2} && grid.at(0, 0, 0) == -3.0f &&
                   grid.at(1, 1, 1) == 67.0f && grid.spacing()[2] == 3.0;

        const std::string scaled = dir.file("fixture-scaled.nii");
        write_nifti_fixture(scaled, true);
        const VoxelGrid s = read_nifti_volume(scaled);
        nifti_ok = nifti_ok && s.at(0, 0, 0) == -1000.0f && s.at(1, 1, 1) == 400.0f;
    }

    // Malformed inputs: errors, never crashes.
    int malformed_errors = 0;
    const int malformed_total = 7;
    const auto expect_error = [&](const std::string& name,
                                  const std::function<void(std::vector<unsigned char>&)>&
                                      corrupt) {
        const std::string good = dir.file("base-" + name + ".nii");
        write_nifti_fixture(good, false);
        std::string blob = slurp(good);
        std::vector<unsigned char> bytes(blob.begin(), blob.end());
        corrupt(bytes);
        const std::string path = dir.file(name + ".nii");
        std::ofstream out(path, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        out.close();
        try {
            read_nifti_volume(path);
        } catch (const Error&) {
            ++malformed_errors;
        } catch (...) {
        }
    };
    expect_error("short", [](auto& b) { b.resize(100); });
    expect_error("magic", [](auto& b) { std::memcpy(b.data() + 344, "ni1\0", 4); });
    expect_error("swapped", [](auto& b) {
        const std::int32_t v = 0x5C010000;
        std::memcpy(b.data() + 0, &v, 4);
    });
    expect_error("dtype", [](auto& b) {
        const std::int16_t v = 64;
        std::memcpy(b.data() + 70, &v, 2);
    });
    expect_error("rank", [](auto& b) {
        const std::int16_t v = 5;
        std::memcpy(b.data() + 40, &v, 2);
    });
    expect_error("trunc", [](auto& b) { b.resize(360); });
    expect_error("offset", [](auto& b) {
        const float v = 10.0f;
        std::memcpy(b.data() + 108, &v, 4);
    });

    // A malformed vgrid payload errors out too.
    bool vgrid_error_ok = false;
    {
        VoxelGrid grid({2, 2, 2}, {1.0, 1.0, 1.0}, 1.0f);
        const std::string prefix = dir.file("truncated");
        write_vgrid(grid, prefix);
        std::ofstream trunc(prefix + ".vgrid.raw",
                            std::ios::binary | std::ios::trunc);
        trunc.write("\0\0\0\0", 4);
        trunc.close();
        try {
            read_vgrid(prefix);
        } catch (const Error&) {
            vgrid_error_ok = true;
        } catch (...) {
        }
    }

    std::ostringstream detail;
    detail << "100 random vgrid round trips bit-exact: " << (round_trips_ok ? "yes" : "no")
           << "; NIfTI fixture values: " << (nifti_ok ? "ok" : "wrong") << "; malformed "
           << "fixtures raising errors: " << malformed_errors << "/" << malformed_total
           << " nifti, " << (vgrid_error_ok ? "1/1" : "0/1") << " vgrid";
    report(7, round_trips_ok && nifti_ok && malformed_errors == malformed_total &&
                  vgrid_error_ok,
           detail.str());
}

// ---- criterion 8: external-predictor protocol -------------------------------

void criterion_external(const std::string& submerge, const std::string& echo,
                        const Phantom& phantom, const std::string& ct_prefix,
                        const std::string& mask_prefix, const testutil::TempDir& dir) {
    double worst_hu = 0.0;
    bool runs_ok = true;
    const struct {
        double p;
        double gamma;
    } configs[] = {{0.5, 1.0}, {0.3, 1.5}};
    for (const auto& config : configs) {
        std::ostringstream name;
        name << "echo-p" << config.p << "-g" << config.gamma;
        const std::string out_prefix = dir.file(name.str());
        std::ostringstream cmd;
        cmd << q(submerge) << " merge --input " << q(ct_prefix) << " --mask "
            << q(mask_prefix) << " --overlap " << config.p << " --gamma " << config.gamma
            << " --predictor 'external:" << echo << "'" << " --out " << q(out_prefix);
        RunResult r = run(cmd.str());
        if (r.code != 0) {
            runs_ok = false;
            continue;
        }
        const VoxelGrid out = read_vgrid(out_prefix);
        worst_hu = std::max(worst_hu, max_abs_diff(out, phantom.ct));
    }

    const std::string out_unused = dir.file("echo-corrupt");
    RunResult corrupt = run(q(submerge) + " merge --input " + q(ct_prefix) + " --mask " +
                            q(mask_prefix) + " --overlap 0.5" + " --predictor 'external:" +
                            echo + " --corrupt-index'" + " --out " + q(out_unused));

    const double worst_norm = worst_hu / NormalizationRecord::kCtScale;
    const bool identity_ok = runs_ok && worst_norm <= 1e-5;
    const bool exit_ok = corrupt.code == 3;
    std::ostringstream detail;
    detail << "echo subprocess through the merge command: max |out - in| = " << worst_norm
           << " normalized (limit 1e-5); wrong-index response exits "
           << corrupt.code << " (want 3)";
    report(8, identity_ok && exit_ok, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: acceptance <submerge> <echo_predictor>\n";
        return 2;
    }
    const std::string submerge = argv[1];
    const std::string echo = argv[2];

    testutil::TempDir dir;
    std::cout << "generating the 128x192x192 phantom..." << std::endl;
    Phantom phantom = make_phantom(PhantomSpec{});
    const std::string ct_prefix = dir.file("phantom-ct");
    const std::string mask_prefix = dir.file("phantom-mask");
    write_vgrid(phantom.ct, ct_prefix);
    write_vgrid_mask(phantom.mask, mask_prefix, phantom.ct.spacing());

    // A criterion that throws is a failure of that criterion, not an abort.
    const auto guarded = [](int number, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            report(number, false, std::string("unexpected exception: ") + e.what());
        }
    };
    guarded(1, [&] { criterion_identity(phantom); });
    guarded(2, [&] { criterion_oracle(); });
    guarded(3, [&] { criterion_suppression(phantom); });
    guarded(4, [&] { criterion_counts(); });
    guarded(5, [&] { criterion_weight_law(); });
    guarded(6, [&] { criterion_sweeps(submerge, ct_prefix, mask_prefix, dir); });
    guarded(7, [&] { criterion_formats(dir); });
    guarded(8, [&] {
        criterion_external(submerge, echo, phantom, ct_prefix, mask_prefix, dir);
    });

    if (criteria_failed == 0) {
        std::cout << "acceptance: all 8 criteria passed" << std::endl;
        return 0;
    }
    std::cout << "acceptance: " << criteria_failed << " criteria failed" << std::endl;
    return 1;
}
