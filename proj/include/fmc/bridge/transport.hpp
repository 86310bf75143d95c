#pragma once

#include <cerrno>
#include <cstring>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <netdb.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "fmc/error.hpp"

namespace fmc::bridge {

// One ordered duplex stream of newline-delimited messages. A session owns
// exactly one transport; requests may be pipelined but sessions must not
// share a stream.
class Transport {
public:
    virtual ~Transport() = default;

    // Writes one message (no trailing newline in `line`).
    virtual void write_line(const std::string& line) = 0;

    // Blocks for the next message; throws ConnectionError when the peer is
    // gone.
    virtual std::string read_line() = 0;
};

class StreamTransport final : public Transport {
public:
    StreamTransport(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

    void write_line(const std::string& line) override {
        out_ << line << '\n';
        out_.flush();
        if (!out_) throw ConnectionError("stream transport: write failed");
    }

    std::string read_line() override {
        std::string line;
        if (!std::getline(in_, line)) {
            throw ConnectionError("stream transport: end of stream");
        }
        return line;
    }

private:
    std::istream& in_;
    std::ostream& out_;
};

// File-descriptor transport used for pipes and TCP sockets.
class FdTransport : public Transport {
public:
    FdTransport(int read_fd, int write_fd, bool owns_fds = true)
        : read_fd_(read_fd), write_fd_(write_fd), owns_fds_(owns_fds) {}

    ~FdTransport() override { close_fds(); }

    FdTransport(const FdTransport&) = delete;
    FdTransport& operator=(const FdTransport&) = delete;

    void write_line(const std::string& line) override {
        std::string framed = line;
        framed.push_back('\n');
        std::size_t written = 0;
        while (written < framed.size()) {
            const ssize_t n = ::write(write_fd_, framed.data() + written, framed.size() - written);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw ConnectionError(std::string("fd transport: write failed: ") + std::strerror(errno));
            }
            written += static_cast<std::size_t>(n);
        }
    }

    std::string read_line() override {
        std::string line;
        for (;;) {
            if (buf_pos_ < buf_.size()) {
                const auto nl = buf_.find('\n', buf_pos_);
                if (nl != std::string::npos) {
                    line.append(buf_, buf_pos_, nl - buf_pos_);
                    buf_pos_ = nl + 1;
                    return line;
                }
                line.append(buf_, buf_pos_, buf_.size() - buf_pos_);
                buf_.clear();
                buf_pos_ = 0;
            }
            char chunk[4096];
            const ssize_t n = ::read(read_fd_, chunk, sizeof(chunk));
            if (n < 0) {
                if (errno == EINTR) continue;
                throw ConnectionError(std::string("fd transport: read failed: ") + std::strerror(errno));
            }
            if (n == 0) {
                throw ConnectionError("fd transport: end of stream");
            }
            buf_.assign(chunk, static_cast<std::size_t>(n));
            buf_pos_ = 0;
        }
    }

protected:
    void close_fds() {
        if (!owns_fds_) return;
        if (read_fd_ >= 0) ::close(read_fd_);
        if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
        read_fd_ = -1;
        write_fd_ = -1;
    }

private:
    int read_fd_;
    int write_fd_;
    bool owns_fds_;
    std::string buf_;
    std::size_t buf_pos_ = 0;
};

// Connects to a simulator served over TCP.
inline std::unique_ptr<Transport> connect_tcp(const std::string& host, const std::string& port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* result = nullptr;
    if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &result) != 0) {
        throw ConnectionError("connect_tcp: cannot resolve " + host + ":" + port);
    }
    int fd = -1;
    for (addrinfo* rp = result; rp != nullptr; rp = rp->ai_next) {
        fd = ::socket(rp->ai_family, rp->ai_socktype, rp->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, rp->ai_addr, rp->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(result);
    if (fd < 0) {
        throw ConnectionError("connect_tcp: cannot connect to " + host + ":" + port);
    }
    return std::make_unique<FdTransport>(fd, fd);
}

// Spawns a simulator child process and talks to it over its stdin/stdout.
class ProcessTransport final : public FdTransport {
public:
    explicit ProcessTransport(const std::vector<std::string>& argv) : ProcessTransport(spawn(argv)) {}

    ~ProcessTransport() override {
        close_fds();  // child sees EOF on stdin and exits
        if (pid_ > 0) {
            int status = 0;
            ::waitpid(pid_, &status, 0);
        }
    }

private:
    struct Spawned {
        int read_fd;
        int write_fd;
        pid_t pid;
    };

    explicit ProcessTransport(Spawned s) : FdTransport(s.read_fd, s.write_fd, true), pid_(s.pid) {}

    static Spawned spawn(const std::vector<std::string>& argv) {
        if (argv.empty()) throw ConnectionError("spawn: empty command");
        int to_child[2];
        int from_child[2];
        if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
            throw ConnectionError("spawn: pipe failed");
        }
        const pid_t pid = ::fork();
        if (pid < 0) throw ConnectionError("spawn: fork failed");
        if (pid == 0) {
            ::dup2(to_child[0], STDIN_FILENO);
            ::dup2(from_child[1], STDOUT_FILENO);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            std::vector<char*> args;
            args.reserve(argv.size() + 1);
            for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
            args.push_back(nullptr);
            ::execvp(args[0], args.data());
            ::_exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        return {from_child[0], to_child[1], pid};
    }

    pid_t pid_ = -1;
};

}  // namespace fmc::bridge
