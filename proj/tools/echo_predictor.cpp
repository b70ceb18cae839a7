// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Minimal external predictor for tests: answers every "TILE" request frame
// with a "PRED" frame echoing the payload, so driving it through the merge
// pipeline behaves as the identity predictor. Fault-injection flags let
// tests exercise the protocol error paths:
//   --corrupt-index   answer with tile_index + 1
//   --bad-magic       answer with magic "JUNK"
//   --truncate        drop the second half of the payload
//   --count-file P    after stdin closes, write the number of frames served

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

namespace {

bool read_exact(unsigned char* data, std::size_t n) {
    return std::fread(data, 1, n, stdin) == n;
}

bool write_all(const unsigned char* data, std::size_t n) {
    return std::fwrite(data, 1, n, stdout) == n;
}

std::uint32_t get_u32(const unsigned char* bytes) {
    std::uint32_t v = 0;
    std::memcpy(&v, bytes, 4);
    return v;
}

void put_u32(unsigned char* bytes, std::uint32_t v) { std::memcpy(bytes, &v, 4); }

}  // namespace

int main(int argc, char** argv) {
    bool corrupt_index = false;
    bool bad_magic = false;
    bool truncate = false;
    std::string count_file;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--corrupt-index") {
            corrupt_index = true;
        } else if (arg == "--bad-magic") {
            bad_magic = true;
        } else if (arg == "--truncate") {
            truncate = true;
        } else if (arg == "--count-file" && i + 1 < argc) {
            count_file = argv[++i];
        } else {
            std::fprintf(stderr, "echo_predictor: unknown argument '%s'\n", arg.c_str());
            return 2;
        }
    }

    std::uint64_t frames = 0;
    for (;;) {
        unsigned char request[4 + 5 * 4];
        if (!read_exact(request, 4)) break;  // clean EOF between frames
        if (std::memcmp(request, "TILE", 4) != 0) {
            std::fprintf(stderr, "echo_predictor: bad request magic\n");
            return 1;
        }
        if (!read_exact(request + 4, sizeof request - 4)) {
            std::fprintf(stderr, "echo_predictor: truncated request header\n");
            return 1;
        }
        const std::uint32_t version = get_u32(request + 4);
        if (version != 1) {
            std::fprintf(stderr, "echo_predictor: unsupported version %u\n", version);
            return 1;
        }
        const std::uint32_t index = get_u32(request + 8);
        std::uint64_t count = 1;
        for (int axis = 0; axis < 3; ++axis) {
            count *= get_u32(request + 12 + 4 * axis);
        }
        std::vector<unsigned char> payload(count * 4);
        if (!read_exact(payload.data(), payload.size())) {
            std::fprintf(stderr, "echo_predictor: truncated payload\n");
            return 1;
        }

        unsigned char response[4 + 4 * 4];
        std::memcpy(response, bad_magic ? "JUNK" : "PRED", 4);
        put_u32(response + 4, corrupt_index ? index + 1 : index);
        std::memcpy(response + 8, request + 12, 12);  // dims echoed verbatim
        const std::size_t out_bytes = truncate ? payload.size() / 2 : payload.size();
        if (!write_all(response, sizeof response) ||
            !write_all(payload.data(), out_bytes) || std::fflush(stdout) != 0) {
            std::fprintf(stderr, "echo_predictor: write failed\n");
            return 1;
        }
        ++frames;
        if (truncate) {
            return 1;  // half a payload then give up, like a crashing model
        }
    }

    if (!count_file.empty()) {
        std::FILE* f = std::fopen(count_file.c_str(), "w");
        if (!f) return 1;
        std::fprintf(f, "%llu\n", static_cast<unsigned long long>(frames));
        std::fclose(f);
    }
    return 0;
}
