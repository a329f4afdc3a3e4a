#include "betwise/subprocess.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "betwise/errors.hpp"

namespace betwise {

namespace {
using Clock = std::chrono::steady_clock;
}

LineProcess::LineProcess(const std::string& command) {
    int pipe_fds[2];
    if (pipe(pipe_fds) != 0) throw Error("pipe() failed: " + std::string(std::strerror(errno)));

    pid_ = fork();
    if (pid_ < 0) {
        ::close(pipe_fds[0]);
        ::close(pipe_fds[1]);
        throw Error("fork() failed: " + std::string(std::strerror(errno)));
    }
    if (pid_ == 0) {
        ::close(pipe_fds[0]);
        dup2(pipe_fds[1], STDOUT_FILENO);
        ::close(pipe_fds[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    ::close(pipe_fds[1]);
    fd_ = pipe_fds[0];
    fcntl(fd_, F_SETFL, O_NONBLOCK);
}

LineProcess::~LineProcess() { terminate(); }

std::optional<std::string> LineProcess::read_line(double timeout_seconds) {
    const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                             std::chrono::duration<double>(timeout_seconds));
    for (;;) {
        const auto newline = buffer_.find('\n');
        if (newline != std::string::npos) {
            std::string line = buffer_.substr(0, newline);
            buffer_.erase(0, newline + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        if (eof_) {
            if (buffer_.empty()) return std::nullopt;
            std::string line = std::move(buffer_);
            buffer_.clear();
            return line;
        }

        const auto remaining = deadline - Clock::now();
        if (remaining <= Clock::duration::zero()) return std::nullopt;
        const int wait_ms = static_cast<int>(
            std::chrono::duration_cast<std::chrono::milliseconds>(remaining).count() + 1);

        pollfd pfd{fd_, POLLIN, 0};
        const int ready = poll(&pfd, 1, wait_ms);
        if (ready < 0) {
            if (errno == EINTR) continue;
            eof_ = true;
            continue;
        }
        if (ready == 0) return std::nullopt;  // timeout

        char chunk[4096];
        const ssize_t got = read(fd_, chunk, sizeof(chunk));
        if (got > 0) {
            buffer_.append(chunk, static_cast<std::size_t>(got));
        } else if (got == 0) {
            eof_ = true;
        } else if (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
            eof_ = true;
        }
    }
}

std::optional<int> LineProcess::exit_status() {
    if (reaped_) return status_;
    if (pid_ <= 0) return std::nullopt;
    int status = 0;
    const pid_t done = waitpid(pid_, &status, WNOHANG);
    if (done == pid_) {
        reaped_ = true;
        status_ = WIFEXITED(status) ? WEXITSTATUS(status) : -WTERMSIG(status);
        return status_;
    }
    return std::nullopt;
}

void LineProcess::terminate() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
    if (pid_ > 0 && !reaped_) {
        kill(pid_, SIGKILL);
        int status = 0;
        waitpid(pid_, &status, 0);
        reaped_ = true;
        status_ = WIFEXITED(status) ? WEXITSTATUS(status) : -WTERMSIG(status);
    }
}

}  // namespace betwise
