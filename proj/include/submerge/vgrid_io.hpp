// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "submerge/grid.hpp"

namespace submerge {

// Native on-disk format: a UTF-8 JSON header ("<name>.vgrid.json") with keys
//   magic="VGRID1", dims=[nx,ny,nz], spacing_mm=[sx,sy,sz],
//   dtype="f32le", order="x-fastest"
// next to a raw payload ("<name>.vgrid.raw") of exactly nx*ny*nz little-endian
// float32 values, x-fastest.

inline constexpr const char* kVgridMagic = "VGRID1";
inline constexpr const char* kVgridDtype = "f32le";
inline constexpr const char* kVgridOrder = "x-fastest";
inline constexpr const char* kVgridHeaderSuffix = ".vgrid.json";
inline constexpr const char* kVgridPayloadSuffix = ".vgrid.raw";

struct VgridPaths {
    std::string header;
    std::string payload;
};

/// Derives header/payload paths from a prefix, a ".vgrid.json" path, or a
/// ".vgrid.raw" path.
VgridPaths vgrid_paths(const std::string& path_or_prefix);

VoxelGrid read_vgrid(const std::string& header_path, const std::string& payload_path);
void write_vgrid(const VoxelGrid& grid, const std::string& header_path,
                 const std::string& payload_path);

VoxelGrid read_vgrid(const std::string& path_or_prefix);
void write_vgrid(const VoxelGrid& grid, const std::string& path_or_prefix);

/// Reads a vgrid file and binarizes it (> 0.5) into a mask.
BinaryMask read_vgrid_mask(const std::string& path_or_prefix);

/// Writes a mask as a 0/1-valued vgrid pair.
void write_vgrid_mask(const BinaryMask& mask, const std::string& path_or_prefix,
                      const Spacing3& spacing = {1.0, 1.0, 1.0});

}  // namespace submerge
