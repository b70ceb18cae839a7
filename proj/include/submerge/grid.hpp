// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace submerge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// External-predictor protocol violations. The CLI maps this to exit code 3;
// every other Error maps to exit code 2.
class ProtocolError : public Error {
public:
    using Error::Error;
};

using Index3 = std::array<int, 3>;
using Spacing3 = std::array<double, 3>;

std::string dims_to_string(const Index3& d);

inline std::size_t voxel_count(const Index3& d) {
    return static_cast<std::size_t>(d[0]) * static_cast<std::size_t>(d[1]) *
           static_cast<std::size_t>(d[2]);
}

/// Dense 3-D scalar field. Voxels are float32, linearized x-fastest
/// (index = x + nx*(y + ny*z)), with per-axis spacing in millimeters.
class VoxelGrid {
public:
    VoxelGrid() = default;  // empty grid; only valid as an error-path carrier

    VoxelGrid(const Index3& dims, const Spacing3& spacing, float init = 0.0f);

    /// Takes ownership of a prebuilt value buffer. Validates the buffer
    /// length against dims and rejects non-finite voxels (reporting the
    /// first offending linear index).
    static VoxelGrid from_values(const Index3& dims, const Spacing3& spacing,
                                 std::vector<float> values);

    const Index3& dims() const { return dims_; }
    const Spacing3& spacing() const { return spacing_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims_[0]) *
                   (static_cast<std::size_t>(y) +
                    static_cast<std::size_t>(dims_[1]) * static_cast<std::size_t>(z));
    }

    float at(int x, int y, int z) const { return values_[index(x, y, z)]; }
    float& at(int x, int y, int z) { return values_[index(x, y, z)]; }

    const std::vector<float>& values() const { return values_; }
    std::vector<float>& values() { return values_; }

private:
    Index3 dims_{0, 0, 0};
    Spacing3 spacing_{1.0, 1.0, 1.0};
    std::vector<float> values_;
};

/// {0,1} grid congruent with a VoxelGrid, same linearization.
class BinaryMask {
public:
    BinaryMask() = default;
    explicit BinaryMask(const Index3& dims, bool initially_set = false);

    static BinaryMask full(const Index3& dims) { return BinaryMask(dims, true); }

    const Index3& dims() const { return dims_; }
    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims_[0]) *
                   (static_cast<std::size_t>(y) +
                    static_cast<std::size_t>(dims_[1]) * static_cast<std::size_t>(z));
    }

    bool at(int x, int y, int z) const { return bits_[index(x, y, z)] != 0; }
    void set(int x, int y, int z, bool v) { bits_[index(x, y, z)] = v ? 1 : 0; }

    const std::vector<std::uint8_t>& bits() const { return bits_; }
    std::vector<std::uint8_t>& bits() { return bits_; }

    std::size_t count() const;

private:
    Index3 dims_{0, 0, 0};
    std::vector<std::uint8_t> bits_;
};

/// Fixed intensity scales plus the per-volume CT offset needed to undo
/// normalization for HU-space evaluation.
struct NormalizationRecord {
    static constexpr double kMriScale = 1000.0;
    static constexpr double kCtScale = 2000.0;

    double ct_offset = 0.0;  // HU; the per-volume minimum subtracted before scaling
};

/// MRI normalization: every voxel divided by 1000.
VoxelGrid normalize_mri(const VoxelGrid& grid);

/// CT normalization: subtract the per-volume minimum, divide by 2000.
/// The output minimum is exactly 0; the record holds the subtracted offset.
std::pair<VoxelGrid, NormalizationRecord> normalize_ct(const VoxelGrid& grid);

/// Exact inverse of normalize_ct: v*2000 + ct_offset.
/// Round-trip error is bounded by the float32 quantization of the
/// normalized value (~1e-4 HU for CT spans up to 2000 HU).
VoxelGrid denormalize_ct(const VoxelGrid& grid, const NormalizationRecord& record);

/// Voxelwise multiply with a binary mask: grid value where the mask is set,
/// zero elsewhere.
VoxelGrid apply_mask(const VoxelGrid& grid, const BinaryMask& mask);

void require_same_dims(const Index3& a, const Index3& b, const char* what);

}  // namespace submerge
