// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#include "submerge/phantom.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace submerge {

namespace {

// One separable sinusoid: amplitude * prod_axis sin(2*pi*freq*t + phase),
// t in [0,1). Three of these sum to the soft-tissue modulation. Per-axis
// factors are precomputed; the tables make voxel evaluation three multiplies
// per term and keep the result independent of traversal order.
struct SinusoidTerm {
    double amplitude = 0.0;
    std::array<std::vector<double>, 3> factors;
};

std::vector<SinusoidTerm> draw_modulation(const Index3& dims, std::uint64_t seed,
                                          double total_amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> freq_dist(1, 3);
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
    // Equal thirds keep the sum within total_amplitude regardless of draws.
    const double per_term = total_amplitude / 3.0;
    std::uniform_real_distribution<double> amp_dist(0.5 * per_term, per_term);

    std::vector<SinusoidTerm> terms(3);
    for (SinusoidTerm& term : terms) {
        term.amplitude = amp_dist(rng);
        for (int axis = 0; axis < 3; ++axis) {
            const int freq = freq_dist(rng);
            const double phase = phase_dist(rng);
            term.factors[axis].resize(dims[axis]);
            for (int i = 0; i < dims[axis]; ++i) {
                const double t = static_cast<double>(i) / dims[axis];
                term.factors[axis][i] =
                    std::sin(2.0 * std::numbers::pi * freq * t + phase);
            }
        }
    }
    return terms;
}

double modulation_at(const std::vector<SinusoidTerm>& terms, int x, int y, int z) {
    double sum = 0.0;
    for (const SinusoidTerm& term : terms) {
        sum += term.amplitude * term.factors[0][x] * term.factors[1][y] *
               term.factors[2][z];
    }
    return sum;
}

}  // namespace

Phantom make_phantom(const PhantomSpec& spec) {
    for (int axis = 0; axis < 3; ++axis) {
        if (spec.dims[axis] < 1) {
            throw Error("phantom dims must be positive, got " + dims_to_string(spec.dims));
        }
    }
    if (!(spec.shell_fraction > 0.0 && spec.shell_fraction < 1.0)) {
        throw Error("shell fraction must lie in (0, 1)");
    }

    std::array<double, 3> semi;
    std::array<double, 3> center;
    for (int axis = 0; axis < 3; ++axis) {
        center[axis] = (spec.dims[axis] - 1) / 2.0;
        semi[axis] = spec.semi_axes[axis] > 0.0 ? spec.semi_axes[axis]
                                                : 0.42 * spec.dims[axis];
        if (semi[axis] > center[axis] && spec.dims[axis] > 1) {
            throw Error("ellipsoid semi-axis " + std::to_string(semi[axis]) +
                        " exceeds volume half-extent on axis " + std::to_string(axis));
        }
        if (spec.dims[axis] == 1) {
            semi[axis] = 0.5;  // degenerate axis: keep the slab inside
        }
    }

    const auto ct_mod = draw_modulation(spec.dims, spec.seed, PhantomSpec::kModulationHu);
    // The MRI modulation reuses the CT shapes at MRI scale so the two
    // volumes stay spatially correlated like a real paired acquisition.
    const double mri_scale = PhantomSpec::kModulationMri / PhantomSpec::kModulationHu;

    Phantom phantom{
        VoxelGrid(spec.dims, spec.spacing, static_cast<float>(PhantomSpec::kAirMri)),
        VoxelGrid(spec.dims, spec.spacing, static_cast<float>(PhantomSpec::kAirHu)),
        BinaryMask(spec.dims)};

    const double inner = spec.shell_fraction;
    for (int z = 0; z < spec.dims[2]; ++z) {
        for (int y = 0; y < spec.dims[1]; ++y) {
            for (int x = 0; x < spec.dims[0]; ++x) {
                const double rx = (x - center[0]) / semi[0];
                const double ry = (y - center[1]) / semi[1];
                const double rz = (z - center[2]) / semi[2];
                const double r2 = rx * rx + ry * ry + rz * rz;
                if (r2 > 1.0) continue;  // air, already filled

                phantom.mask.set(x, y, z, true);
                double ct;
                double mri;
                if (r2 > inner * inner) {
                    ct = PhantomSpec::kBoneHu;
                    mri = PhantomSpec::kBoneMri;
                } else {
                    const double mod = modulation_at(ct_mod, x, y, z);
                    ct = PhantomSpec::kSoftHu + mod;
                    mri = PhantomSpec::kSoftMri + mod * mri_scale;
                }
                phantom.ct.at(x, y, z) = static_cast<float>(ct);
                phantom.mri.at(x, y, z) = static_cast<float>(mri);
            }
        }
    }
    return phantom;
}

}  // namespace submerge
