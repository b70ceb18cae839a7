// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "submerge/grid.hpp"

namespace submerge {

// Minimal read-only NIfTI-1 support: single uncompressed .nii files,
// little-endian, datatypes uint8 / int16 / float32, rank 3 (or rank 4 with a
// trailing singleton dimension). scl_slope/scl_inter are applied when
// scl_slope != 0.
//
// Orientation metadata (qform/sform) is deliberately ignored: axes are taken
// in storage order. Volumes compared with this reader must already live on
// the same voxel lattice, which is the case for pre-registered pairs.

struct NiftiHeader {
    std::int32_t sizeof_hdr = 0;
    std::int16_t dim[8] = {0};
    std::int16_t datatype = 0;
    std::int16_t bitpix = 0;
    float pixdim[8] = {0};
    float vox_offset = 0;
    float scl_slope = 0;
    float scl_inter = 0;
    char magic[4] = {0};
};

/// Parses and validates the fixed 348-byte header of an uncompressed .nii file.
NiftiHeader read_nifti_header(const std::string& path);

/// Reads the image payload as a float grid, applying scl_slope/scl_inter.
VoxelGrid read_nifti_volume(const std::string& path);

/// Reads the file as a binary mask: payload values are binarized by > 0.5
/// after slope/intercept application.
BinaryMask read_nifti_mask(const std::string& path);

}  // namespace submerge
