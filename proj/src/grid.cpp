// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#include "submerge/grid.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace submerge {

std::string dims_to_string(const Index3& d) {
    std::ostringstream os;
    os << d[0] << "x" << d[1] << "x" << d[2];
    return os.str();
}

void require_same_dims(const Index3& a, const Index3& b, const char* what) {
    if (a != b) {
        throw Error(std::string(what) + ": dimension mismatch, " + dims_to_string(a) +
                    " vs " + dims_to_string(b));
    }
}

namespace {

void check_dims(const Index3& dims) {
    for (int axis = 0; axis < 3; ++axis) {
        if (dims[axis] <= 0) {
            throw Error("invalid grid dims " + dims_to_string(dims) +
                        ": all axes must be positive");
        }
    }
}

void check_spacing(const Spacing3& spacing) {
    for (int axis = 0; axis < 3; ++axis) {
        if (!(spacing[axis] > 0.0) || !std::isfinite(spacing[axis])) {
            throw Error("invalid voxel spacing: all axes must be positive and finite");
        }
    }
}

}  // namespace

VoxelGrid::VoxelGrid(const Index3& dims, const Spacing3& spacing, float init)
    : dims_(dims), spacing_(spacing) {
    check_dims(dims);
    check_spacing(spacing);
    values_.assign(voxel_count(dims), init);
}

VoxelGrid VoxelGrid::from_values(const Index3& dims, const Spacing3& spacing,
                                 std::vector<float> values) {
    check_dims(dims);
    check_spacing(spacing);
    const std::size_t expected = voxel_count(dims);
    if (values.size() != expected) {
        throw Error("value buffer length " + std::to_string(values.size()) +
                    " does not match dims " + dims_to_string(dims) + " (" +
                    std::to_string(expected) + " voxels)");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error("non-finite voxel value at linear index " + std::to_string(i));
        }
    }
    VoxelGrid grid;
    grid.dims_ = dims;
    grid.spacing_ = spacing;
    grid.values_ = std::move(values);
    return grid;
}

BinaryMask::BinaryMask(const Index3& dims, bool initially_set) : dims_(dims) {
    check_dims(dims);
    bits_.assign(voxel_count(dims), initially_set ? 1 : 0);
}

std::size_t BinaryMask::count() const {
    std::size_t n = 0;
    for (std::uint8_t b : bits_) n += (b != 0);
    return n;
}

VoxelGrid normalize_mri(const VoxelGrid& grid) {
    VoxelGrid out = grid;
    for (float& v : out.values()) {
        v = static_cast<float>(static_cast<double>(v) / NormalizationRecord::kMriScale);
    }
    return out;
}

std::pair<VoxelGrid, NormalizationRecord> normalize_ct(const VoxelGrid& grid) {
    if (grid.empty()) {
        throw Error("empty volume");
    }
    float min_value = std::numeric_limits<float>::infinity();
    for (float v : grid.values()) {
        if (v < min_value) min_value = v;
    }
    NormalizationRecord record;
    record.ct_offset = static_cast<double>(min_value);

    VoxelGrid out = grid;
    for (float& v : out.values()) {
        v = static_cast<float>((static_cast<double>(v) - record.ct_offset) /
                               NormalizationRecord::kCtScale);
    }
    return {std::move(out), record};
}

VoxelGrid denormalize_ct(const VoxelGrid& grid, const NormalizationRecord& record) {
    if (!std::isfinite(record.ct_offset)) {
        throw Error("non-finite ct_offset in normalization record");
    }
    VoxelGrid out = grid;
    for (float& v : out.values()) {
        v = static_cast<float>(static_cast<double>(v) * NormalizationRecord::kCtScale +
                               record.ct_offset);
    }
    return out;
}

VoxelGrid apply_mask(const VoxelGrid& grid, const BinaryMask& mask) {
    require_same_dims(grid.dims(), mask.dims(), "apply_mask");
    VoxelGrid out = grid;
    const auto& bits = mask.bits();
    auto& values = out.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (bits[i] == 0) values[i] = 0.0f;
    }
    return out;
}

}  // namespace submerge
