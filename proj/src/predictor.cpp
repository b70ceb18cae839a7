// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#include "submerge/predictor.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace submerge {

namespace {

std::vector<std::string> split(const std::string& text, char sep, std::size_t max_parts) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (parts.size() + 1 < max_parts) {
        const std::size_t pos = text.find(sep, begin);
        if (pos == std::string::npos) break;
        parts.push_back(text.substr(begin, pos - begin));
        begin = pos + 1;
    }
    parts.push_back(text.substr(begin));
    return parts;
}

double parse_number(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception&) {
        throw Error(std::string("invalid ") + what + " in predictor spec: '" + text + "'");
    }
}

}  // namespace

PredictorSpec parse_predictor_spec(const std::string& text) {
    const std::size_t colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);

    PredictorSpec spec;
    if (kind == "identity") {
        if (!args.empty()) throw Error("identity predictor takes no arguments");
        spec.kind = PredictorSpec::Kind::identity;
    } else if (kind == "constant") {
        spec.kind = PredictorSpec::Kind::constant;
        spec.constant = parse_number(args, "constant");
    } else if (kind == "affine") {
        spec.kind = PredictorSpec::Kind::affine;
        const auto parts = split(args, ',', 4);
        if (parts.size() != 4) {
            throw Error("affine predictor wants 4 coefficients a,b,c,d, got '" + args + "'");
        }
        for (int i = 0; i < 4; ++i) {
            spec.affine[i] = parse_number(parts[i], "affine coefficient");
        }
    } else if (kind == "edge-bias") {
        spec.kind = PredictorSpec::Kind::edge_bias;
        const auto parts = split(args, ',', 3);
        if (parts.size() < 2) {
            throw Error("edge-bias predictor wants beta,q[,inner], got '" + args + "'");
        }
        spec.bias_amplitude = parse_number(parts[0], "edge-bias amplitude");
        spec.bias_exponent = parse_number(parts[1], "edge-bias exponent");
        if (spec.bias_amplitude < 0.0) {
            throw Error("edge-bias amplitude must be >= 0");
        }
        if (spec.bias_exponent < 1.0) {
            throw Error("edge-bias exponent must be >= 1");
        }
        PredictorSpec inner;
        if (parts.size() == 3) {
            inner = parse_predictor_spec(parts[2]);
            if (inner.kind == PredictorSpec::Kind::external) {
                throw Error("edge-bias cannot wrap an external predictor");
            }
        }
        spec.inner = std::make_shared<PredictorSpec>(std::move(inner));
    } else if (kind == "external") {
        if (args.empty()) throw Error("external predictor wants a command line");
        spec.kind = PredictorSpec::Kind::external;
        spec.command = args;
    } else {
        throw Error("unknown predictor kind '" + kind +
                    "' (want identity, constant, affine, edge-bias, or external)");
    }
    return spec;
}

double edge_bias_profile(const Index3& idx, const Index3& dims, double beta, double q) {
    double worst = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        const double u = static_cast<double>(idx[axis]) / static_cast<double>(dims[axis]);
        const double t = 2.0 * std::abs(u - 0.5);
        worst = std::max(worst, t);
    }
    // max is taken over the base ramp; q >= 1 makes x^q monotone, so
    // max(x)^q == max(x^q) and one pow per voxel suffices.
    return beta * std::pow(worst, q);
}

namespace {

class IdentityPredictor final : public Predictor {
public:
    VoxelGrid predict(const VoxelGrid& tile, const Index3&) override { return tile; }
};

class ConstantPredictor final : public Predictor {
public:
    explicit ConstantPredictor(double value) : value_(static_cast<float>(value)) {}

    VoxelGrid predict(const VoxelGrid& tile, const Index3&) override {
        return VoxelGrid(tile.dims(), tile.spacing(), value_);
    }

private:
    float value_;
};

class AffinePredictor final : public Predictor {
public:
    explicit AffinePredictor(const std::array<double, 4>& coeff) : coeff_(coeff) {}

    VoxelGrid predict(const VoxelGrid& tile, const Index3& origin) override {
        VoxelGrid out(tile.dims(), tile.spacing());
        for (int z = 0; z < tile.dims()[2]; ++z) {
            for (int y = 0; y < tile.dims()[1]; ++y) {
                for (int x = 0; x < tile.dims()[0]; ++x) {
                    const double v = coeff_[0] * (origin[0] + x) +
                                     coeff_[1] * (origin[1] + y) +
                                     coeff_[2] * (origin[2] + z) + coeff_[3];
                    out.at(x, y, z) = static_cast<float>(v);
                }
            }
        }
        return out;
    }

private:
    std::array<double, 4> coeff_;
};

class EdgeBiasPredictor final : public Predictor {
public:
    EdgeBiasPredictor(std::unique_ptr<Predictor> inner, double beta, double q)
        : inner_(std::move(inner)), beta_(beta), q_(q) {}

    VoxelGrid predict(const VoxelGrid& tile, const Index3& origin) override {
        VoxelGrid out = inner_->predict(tile, origin);
        for (int z = 0; z < out.dims()[2]; ++z) {
            for (int y = 0; y < out.dims()[1]; ++y) {
                for (int x = 0; x < out.dims()[0]; ++x) {
                    const double bias =
                        edge_bias_profile(Index3{x, y, z}, out.dims(), beta_, q_);
                    out.at(x, y, z) = static_cast<float>(out.at(x, y, z) + bias);
                }
            }
        }
        return out;
    }

private:
    std::unique_ptr<Predictor> inner_;
    double beta_;
    double q_;
};

}  // namespace

std::unique_ptr<Predictor> make_external_predictor(const std::string& command);

std::unique_ptr<Predictor> make_predictor(const PredictorSpec& spec) {
    switch (spec.kind) {
        case PredictorSpec::Kind::identity:
            return std::make_unique<IdentityPredictor>();
        case PredictorSpec::Kind::constant:
            return std::make_unique<ConstantPredictor>(spec.constant);
        case PredictorSpec::Kind::affine:
            return std::make_unique<AffinePredictor>(spec.affine);
        case PredictorSpec::Kind::edge_bias: {
            PredictorSpec inner_spec =
                spec.inner ? *spec.inner : PredictorSpec{};
            return std::make_unique<EdgeBiasPredictor>(
                make_predictor(inner_spec), spec.bias_amplitude, spec.bias_exponent);
        }
        case PredictorSpec::Kind::external:
            return make_external_predictor(spec.command);
    }
    throw Error("unreachable predictor kind");
}

}  // namespace submerge
