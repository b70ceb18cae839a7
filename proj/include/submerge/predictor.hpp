// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include "submerge/grid.hpp"

namespace submerge {

/// Parsed form of a --predictor argument:
///   identity
///   constant:<c>
///   affine:<a>,<b>,<c>,<d>          value = a*gx + b*gy + c*gz + d over
///                                   global voxel coordinates
///   edge-bias:<beta>,<q>[,<inner>]  inner prediction plus a center-to-face
///                                   bias ramp (inner defaults to identity)
///   external:<command>              spawn <command> via /bin/sh and speak
///                                   the framed tile protocol on its stdio
struct PredictorSpec {
    enum class Kind { identity, constant, affine, edge_bias, external };

    Kind kind = Kind::identity;
    double constant = 0.0;
    std::array<double, 4> affine{0.0, 0.0, 0.0, 0.0};
    double bias_amplitude = 0.0;  // beta >= 0
    double bias_exponent = 1.0;   // q >= 1
    std::shared_ptr<PredictorSpec> inner;  // edge_bias only
    std::string command;                   // external only
};

PredictorSpec parse_predictor_spec(const std::string& text);

/// Stateful per-tile prediction session. predict() is called once per
/// retained tile, in merge order; `origin` is the tile's position in global
/// voxel coordinates (the affine field depends on it, built-ins otherwise
/// ignore it).
class Predictor {
public:
    virtual ~Predictor() = default;

    virtual VoxelGrid predict(const VoxelGrid& tile, const Index3& origin) = 0;

    /// Whether predict() may be invoked from several threads at once.
    /// The external protocol is a single ordered stream, so it is not.
    virtual bool parallel_safe() const { return true; }

    /// Called after the last tile. Protocol shutdown errors surface here.
    virtual void finish() {}
};

std::unique_ptr<Predictor> make_predictor(const PredictorSpec& spec);

/// Center-to-face bias profile used by the edge-bias predictor: for
/// fractional position u = idx/len on each axis, the added bias is
/// beta * max_axis((2*|u - 0.5|)^q). Zero at the exact center of an
/// even-length axis, exactly beta on the idx = 0 face.
double edge_bias_profile(const Index3& idx, const Index3& dims, double beta, double q);

}  // namespace submerge
