// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0

#include "submerge/nifti_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "NIfTI-1 parsing assumes a little-endian host");

namespace submerge {

namespace {

constexpr std::size_t kHeaderBytes = 348;

// Field offsets in the published NIfTI-1 layout.
constexpr std::size_t kOffSizeofHdr = 0;
constexpr std::size_t kOffDim = 40;
constexpr std::size_t kOffDatatype = 70;
constexpr std::size_t kOffBitpix = 72;
constexpr std::size_t kOffPixdim = 76;
constexpr std::size_t kOffVoxOffset = 108;
constexpr std::size_t kOffSclSlope = 112;
constexpr std::size_t kOffSclInter = 116;
constexpr std::size_t kOffMagic = 344;

constexpr std::int16_t kDtUint8 = 2;
constexpr std::int16_t kDtInt16 = 4;
constexpr std::int16_t kDtFloat32 = 16;

template <typename T>
T read_le(const unsigned char* buffer, std::size_t offset) {
    T value;
    std::memcpy(&value, buffer + offset, sizeof(T));
    return value;
}

std::size_t payload_item_bytes(std::int16_t datatype) {
    switch (datatype) {
        case kDtUint8:
            return 1;
        case kDtInt16:
            return 2;
        case kDtFloat32:
            return 4;
        default:
            return 0;
    }
}

NiftiHeader parse_header(std::ifstream& in, const std::string& path) {
    unsigned char buffer[kHeaderBytes];
    in.read(reinterpret_cast<char*>(buffer), kHeaderBytes);
    if (!in) {
        throw Error("NIfTI file too short for a 348-byte header: " + path);
    }

    NiftiHeader header;
    header.sizeof_hdr = read_le<std::int32_t>(buffer, kOffSizeofHdr);
    for (int i = 0; i < 8; ++i) {
        header.dim[i] = read_le<std::int16_t>(buffer, kOffDim + 2 * i);
        header.pixdim[i] = read_le<float>(buffer, kOffPixdim + 4 * i);
    }
    header.datatype = read_le<std::int16_t>(buffer, kOffDatatype);
    header.bitpix = read_le<std::int16_t>(buffer, kOffBitpix);
    header.vox_offset = read_le<float>(buffer, kOffVoxOffset);
    header.scl_slope = read_le<float>(buffer, kOffSclSlope);
    header.scl_inter = read_le<float>(buffer, kOffSclInter);
    std::memcpy(header.magic, buffer + kOffMagic, 4);

    if (header.sizeof_hdr != 348) {
        // Also what a byte-swapped or NIfTI-2 header looks like from here.
        throw Error("not a little-endian NIfTI-1 file (sizeof_hdr=" +
                    std::to_string(header.sizeof_hdr) + "): " + path);
    }
    if (std::memcmp(header.magic, "n+1\0", 4) != 0) {
        throw Error("bad NIfTI magic (expected \"n+1\") in " + path);
    }
    const int rank = header.dim[0];
    if (!(rank == 3 || (rank == 4 && header.dim[4] == 1))) {
        throw Error("unsupported NIfTI rank " + std::to_string(rank) +
                    " (want 3, or 4 with a trailing singleton): " + path);
    }
    if (payload_item_bytes(header.datatype) == 0) {
        throw Error("unsupported NIfTI datatype code " + std::to_string(header.datatype) +
                    " (supported: 2=uint8, 4=int16, 16=float32): " + path);
    }
    for (int axis = 1; axis <= 3; ++axis) {
        if (header.dim[axis] <= 0) {
            throw Error("non-positive NIfTI dim[" + std::to_string(axis) + "]: " + path);
        }
    }
    if (!(header.vox_offset >= static_cast<float>(kHeaderBytes))) {
        throw Error("NIfTI vox_offset " + std::to_string(header.vox_offset) +
                    " points inside the header: " + path);
    }
    return header;
}

struct RawVolume {
    Index3 dims;
    Spacing3 spacing;
    std::vector<float> values;
};

RawVolume read_payload(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open NIfTI file: " + path);
    }
    const NiftiHeader header = parse_header(in, path);

    RawVolume raw;
    for (int axis = 0; axis < 3; ++axis) {
        raw.dims[axis] = header.dim[axis + 1];
        const float spacing = header.pixdim[axis + 1];
        raw.spacing[axis] = (std::isfinite(spacing) && spacing > 0.0f) ? spacing : 1.0;
    }

    const std::size_t item_bytes = payload_item_bytes(header.datatype);
    const std::uint64_t offset = static_cast<std::uint64_t>(header.vox_offset);
    const std::uint64_t count = voxel_count(raw.dims);
    const std::uint64_t need = offset + count * item_bytes;

    in.seekg(0, std::ios::end);
    const std::uint64_t total = static_cast<std::uint64_t>(in.tellg());
    if (total < need) {
        throw Error("truncated NIfTI payload in " + path + ": need " +
                    std::to_string(need) + " bytes, file has " + std::to_string(total));
    }
    in.seekg(static_cast<std::streamoff>(offset), std::ios::beg);

    std::vector<unsigned char> payload(count * item_bytes);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
    if (!in) {
        throw Error("short read from NIfTI payload: " + path);
    }

    // scl_slope == 0 means "no scaling" by convention.
    const bool scale = header.scl_slope != 0.0f;
    const double slope = scale ? header.scl_slope : 1.0;
    const double inter = scale ? header.scl_inter : 0.0;

    raw.values.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        double v = 0.0;
        switch (header.datatype) {
            case kDtUint8:
                v = payload[i];
                break;
            case kDtInt16:
                v = read_le<std::int16_t>(payload.data(), i * 2);
                break;
            case kDtFloat32:
                v = read_le<float>(payload.data(), i * 4);
                break;
        }
        raw.values[i] = static_cast<float>(slope * v + inter);
    }
    return raw;
}

}  // namespace

NiftiHeader read_nifti_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open NIfTI file: " + path);
    }
    return parse_header(in, path);
}

VoxelGrid read_nifti_volume(const std::string& path) {
    RawVolume raw = read_payload(path);
    return VoxelGrid::from_values(raw.dims, raw.spacing, std::move(raw.values));
}

BinaryMask read_nifti_mask(const std::string& path) {
    RawVolume raw = read_payload(path);
    BinaryMask mask(raw.dims);
    for (std::size_t i = 0; i < raw.values.size(); ++i) {
        mask.bits()[i] = raw.values[i] > 0.5f ? 1 : 0;
    }
    return mask;
}

}  // namespace submerge
