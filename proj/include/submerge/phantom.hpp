// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "submerge/grid.hpp"

namespace submerge {

/// Three-tissue ellipsoid phantom: air background, a bony shell between the
/// outer ellipsoid and its shell_fraction-scaled copy, soft tissue inside.
/// Soft tissue carries a seeded low-frequency modulation so blending and
/// metrics see real intensity structure. Semi-axes of 0 default to
/// 0.42 * dims.
struct PhantomSpec {
    Index3 dims{128, 192, 192};
    Spacing3 spacing{1.0, 1.0, 1.0};
    std::uint64_t seed = 0;
    std::array<double, 3> semi_axes{0.0, 0.0, 0.0};
    double shell_fraction = 0.85;

    static constexpr double kAirHu = -1000.0;
    static constexpr double kBoneHu = 1000.0;
    static constexpr double kSoftHu = 40.0;
    static constexpr double kAirMri = 0.0;
    static constexpr double kBoneMri = 0.1;
    static constexpr double kSoftMri = 0.6;
    static constexpr double kModulationHu = 30.0;    // total amplitude bound
    static constexpr double kModulationMri = 0.05;
};

struct Phantom {
    VoxelGrid mri;   // normalized-looking intensities in [0, 1]
    VoxelGrid ct;    // HU
    BinaryMask mask; // outer ellipsoid indicator
};

/// Deterministic: the same spec yields bit-identical volumes.
Phantom make_phantom(const PhantomSpec& spec);

}  // namespace submerge
