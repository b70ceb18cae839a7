// Copyright (c) 2026 the submerge contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Framed tile protocol over a child process's stdio. All integers are
// little-endian u32. Request: "TILE", version (=1), tile index, dims x3,
// then dims-product float32 values. Response: "PRED", tile index, dims x3,
// payload. One response per request, in order, over a single stream.

#include <sys/types.h>
#include <sys/wait.h>

#include <csignal>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

#include "submerge/predictor.hpp"

namespace submerge {

namespace {

constexpr std::uint32_t kProtocolVersion = 1;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    unsigned char b[4];
    std::memcpy(b, &v, 4);  // little-endian host, asserted in vgrid_io
    out.insert(out.end(), b, b + 4);
}

std::string printable(const unsigned char* bytes, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char c = bytes[i];
        if (c >= 0x20 && c < 0x7f) {
            out.push_back(static_cast<char>(c));
        } else {
            char hex[8];
            std::snprintf(hex, sizeof hex, "\\x%02x", c);
            out += hex;
        }
    }
    return out;
}

class ExternalPredictor final : public Predictor {
public:
    explicit ExternalPredictor(const std::string& command) : command_(command) {
        // A child that exits early must surface as a protocol error on the
        // next write, not kill this process.
        std::signal(SIGPIPE, SIG_IGN);

        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) {
            throw Error("cannot create pipes for external predictor");
        }
        pid_ = fork();
        if (pid_ < 0) {
            throw Error("cannot fork external predictor");
        }
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        stdin_fd_ = to_child[1];
        stdout_fd_ = from_child[0];
    }

    ~ExternalPredictor() override {
        close_stdin();
        if (stdout_fd_ >= 0) close(stdout_fd_);
        if (pid_ > 0 && !reaped_) {
            int status = 0;
            if (waitpid(pid_, &status, WNOHANG) == 0) {
                kill(pid_, SIGKILL);
                waitpid(pid_, &status, 0);
            }
        }
    }

    bool parallel_safe() const override { return false; }

    VoxelGrid predict(const VoxelGrid& tile, const Index3&) override {
        const std::uint32_t index = next_index_++;
        send_request(index, tile);
        return read_response(index, tile);
    }

    void finish() override {
        close_stdin();
        int status = 0;
        if (pid_ > 0 && !reaped_ && waitpid(pid_, &status, 0) == pid_) {
            reaped_ = true;
            if (WIFEXITED(status) && WEXITSTATUS(status) != 0) {
                throw ProtocolError("external predictor exited with status " +
                                    std::to_string(WEXITSTATUS(status)));
            }
            if (WIFSIGNALED(status)) {
                throw ProtocolError("external predictor killed by signal " +
                                    std::to_string(WTERMSIG(status)));
            }
        }
    }

private:
    void close_stdin() {
        if (stdin_fd_ >= 0) {
            close(stdin_fd_);
            stdin_fd_ = -1;
        }
    }

    void write_all(const unsigned char* data, std::size_t n, std::uint32_t index) {
        std::size_t done = 0;
        while (done < n) {
            const ssize_t w = write(stdin_fd_, data + done, n - done);
            if (w < 0) {
                if (errno == EINTR) continue;
                throw ProtocolError("external predictor stopped reading at tile " +
                                    std::to_string(index) + exit_note());
            }
            done += static_cast<std::size_t>(w);
        }
    }

    void read_exact(unsigned char* data, std::size_t n, std::uint32_t index) {
        std::size_t done = 0;
        while (done < n) {
            const ssize_t r = read(stdout_fd_, data + done, n - done);
            if (r < 0) {
                if (errno == EINTR) continue;
                throw ProtocolError("read error from external predictor at tile " +
                                    std::to_string(index) + exit_note());
            }
            if (r == 0) {
                throw ProtocolError("external predictor closed its output before tile " +
                                    std::to_string(index) + " was answered" + exit_note());
            }
            done += static_cast<std::size_t>(r);
        }
    }

    // Appended to stream errors when the child has already exited; the exit
    // status usually explains the broken pipe.
    std::string exit_note() {
        if (pid_ <= 0 || reaped_) return "";
        int status = 0;
        if (waitpid(pid_, &status, WNOHANG) != pid_) return "";
        reaped_ = true;
        if (WIFEXITED(status)) {
            return " (predictor exited with status " +
                   std::to_string(WEXITSTATUS(status)) + ")";
        }
        if (WIFSIGNALED(status)) {
            return " (predictor killed by signal " + std::to_string(WTERMSIG(status)) + ")";
        }
        return "";
    }

    void send_request(std::uint32_t index, const VoxelGrid& tile) {
        std::vector<unsigned char> header;
        header.reserve(4 + 5 * 4);
        header.insert(header.end(), {'T', 'I', 'L', 'E'});
        put_u32(header, kProtocolVersion);
        put_u32(header, index);
        for (int axis = 0; axis < 3; ++axis) {
            put_u32(header, static_cast<std::uint32_t>(tile.dims()[axis]));
        }
        write_all(header.data(), header.size(), index);
        write_all(reinterpret_cast<const unsigned char*>(tile.values().data()),
                  tile.values().size() * sizeof(float), index);
    }

    VoxelGrid read_response(std::uint32_t index, const VoxelGrid& tile) {
        unsigned char header[4 + 4 * 4];
        read_exact(header, sizeof header, index);
        if (std::memcmp(header, "PRED", 4) != 0) {
            throw ProtocolError("bad response magic from external predictor at tile " +
                                std::to_string(index) + ": got \"" +
                                printable(header, 4) + "\", want \"PRED\"");
        }
        std::uint32_t got_index = 0;
        std::memcpy(&got_index, header + 4, 4);
        if (got_index != index) {
            throw ProtocolError("external predictor answered tile " +
                                std::to_string(got_index) + ", expected tile " +
                                std::to_string(index));
        }
        Index3 dims;
        for (int axis = 0; axis < 3; ++axis) {
            std::uint32_t d = 0;
            std::memcpy(&d, header + 8 + 4 * axis, 4);
            dims[axis] = static_cast<int>(d);
        }
        if (dims != tile.dims()) {
            throw ProtocolError("external predictor returned dims " + dims_to_string(dims) +
                                " for tile " + std::to_string(index) + ", expected " +
                                dims_to_string(tile.dims()));
        }
        std::vector<float> values(tile.values().size());
        read_exact(reinterpret_cast<unsigned char*>(values.data()),
                   values.size() * sizeof(float), index);
        return VoxelGrid::from_values(tile.dims(), tile.spacing(), std::move(values));
    }

    std::string command_;
    pid_t pid_ = -1;
    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    bool reaped_ = false;
    std::uint32_t next_index_ = 0;
};

}  // namespace

std::unique_ptr<Predictor> make_external_predictor(const std::string& command) {
    return std::make_unique<ExternalPredictor>(command);
}

}  // namespace submerge
