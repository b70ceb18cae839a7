// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#include "submerge/vgrid_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "json.hpp"

static_assert(std::endian::native == std::endian::little,
              "vgrid payload I/O assumes a little-endian host");
static_assert(sizeof(float) == 4, "float32 payload requires 4-byte float");

namespace submerge {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::uint64_t file_size(std::ifstream& in) {
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(0, std::ios::beg);
    return static_cast<std::uint64_t>(end);
}

}  // namespace

VgridPaths vgrid_paths(const std::string& path_or_prefix) {
    std::string prefix = path_or_prefix;
    if (ends_with(prefix, kVgridHeaderSuffix)) {
        prefix.resize(prefix.size() - std::strlen(kVgridHeaderSuffix));
    } else if (ends_with(prefix, kVgridPayloadSuffix)) {
        prefix.resize(prefix.size() - std::strlen(kVgridPayloadSuffix));
    }
    return {prefix + kVgridHeaderSuffix, prefix + kVgridPayloadSuffix};
}

VoxelGrid read_vgrid(const std::string& header_path, const std::string& payload_path) {
    std::ifstream header_file(header_path);
    if (!header_file) {
        throw Error("cannot open vgrid header: " + header_path);
    }
    nlohmann::json header;
    try {
        header_file >> header;
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed vgrid header " + header_path + ": " + e.what());
    }

    const auto require_string = [&](const char* key, const char* expected) {
        if (!header.contains(key) || !header[key].is_string() ||
            header[key].get<std::string>() != expected) {
            throw Error(std::string("vgrid header ") + header_path + ": key '" + key +
                        "' must be \"" + expected + "\"");
        }
    };
    require_string("magic", kVgridMagic);
    require_string("dtype", kVgridDtype);
    require_string("order", kVgridOrder);

    if (!header.contains("dims") || !header["dims"].is_array() ||
        header["dims"].size() != 3) {
        throw Error("vgrid header " + header_path + ": 'dims' must be a 3-element array");
    }
    Index3 dims;
    for (int axis = 0; axis < 3; ++axis) {
        const auto& v = header["dims"][axis];
        if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
            throw Error("vgrid header " + header_path + ": dims must be positive integers");
        }
        dims[axis] = v.get<int>();
    }
    Spacing3 spacing{1.0, 1.0, 1.0};
    if (!header.contains("spacing_mm") || !header["spacing_mm"].is_array() ||
        header["spacing_mm"].size() != 3) {
        throw Error("vgrid header " + header_path +
                    ": 'spacing_mm' must be a 3-element array");
    }
    for (int axis = 0; axis < 3; ++axis) {
        spacing[axis] = header["spacing_mm"][axis].get<double>();
        if (!(spacing[axis] > 0.0) || !std::isfinite(spacing[axis])) {
            throw Error("vgrid header " + header_path + ": spacing_mm must be positive");
        }
    }

    std::ifstream payload(payload_path, std::ios::binary);
    if (!payload) {
        throw Error("cannot open vgrid payload: " + payload_path);
    }
    const std::uint64_t expected_bytes = voxel_count(dims) * 4ULL;
    const std::uint64_t actual_bytes = file_size(payload);
    if (actual_bytes != expected_bytes) {
        throw Error("vgrid payload size mismatch for " + payload_path + ": expected " +
                    std::to_string(expected_bytes) + " bytes for dims " +
                    dims_to_string(dims) + ", got " + std::to_string(actual_bytes));
    }

    std::vector<float> values(voxel_count(dims));
    payload.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(expected_bytes));
    if (!payload) {
        throw Error("short read from vgrid payload: " + payload_path);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error("vgrid payload " + payload_path +
                        " holds a non-finite value at linear index " + std::to_string(i));
        }
    }
    return VoxelGrid::from_values(dims, spacing, std::move(values));
}

void write_vgrid(const VoxelGrid& grid, const std::string& header_path,
                 const std::string& payload_path) {
    if (grid.empty()) {
        throw Error("refusing to write empty grid to " + header_path);
    }
    nlohmann::ordered_json header;
    header["magic"] = kVgridMagic;
    header["dims"] = {grid.dims()[0], grid.dims()[1], grid.dims()[2]};
    header["spacing_mm"] = {grid.spacing()[0], grid.spacing()[1], grid.spacing()[2]};
    header["dtype"] = kVgridDtype;
    header["order"] = kVgridOrder;

    std::ofstream header_file(header_path);
    if (!header_file) {
        throw Error("cannot write vgrid header: " + header_path);
    }
    header_file << header.dump(2) << "\n";
    if (!header_file.flush()) {
        throw Error("write failure on vgrid header: " + header_path);
    }

    std::ofstream payload(payload_path, std::ios::binary);
    if (!payload) {
        throw Error("cannot write vgrid payload: " + payload_path);
    }
    payload.write(reinterpret_cast<const char*>(grid.values().data()),
                  static_cast<std::streamsize>(grid.size() * 4));
    if (!payload.flush()) {
        throw Error("write failure on vgrid payload: " + payload_path);
    }
}

VoxelGrid read_vgrid(const std::string& path_or_prefix) {
    const VgridPaths paths = vgrid_paths(path_or_prefix);
    return read_vgrid(paths.header, paths.payload);
}

void write_vgrid(const VoxelGrid& grid, const std::string& path_or_prefix) {
    const VgridPaths paths = vgrid_paths(path_or_prefix);
    write_vgrid(grid, paths.header, paths.payload);
}

BinaryMask read_vgrid_mask(const std::string& path_or_prefix) {
    const VoxelGrid grid = read_vgrid(path_or_prefix);
    BinaryMask mask(grid.dims());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        mask.bits()[i] = grid.values()[i] > 0.5f ? 1 : 0;
    }
    return mask;
}

void write_vgrid_mask(const BinaryMask& mask, const std::string& path_or_prefix,
                      const Spacing3& spacing) {
    std::vector<float> values(mask.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = mask.bits()[i] ? 1.0f : 0.0f;
    }
    write_vgrid(VoxelGrid::from_values(mask.dims(), spacing, std::move(values)),
                path_or_prefix);
}

}  // namespace submerge
