#pragma once

#include <optional>
#include <string>

#include <sys/types.h>

namespace betwise {

/// Child process producing newline-delimited text on stdout. Used by the
/// external-expert protocol: one decimal sample per line.
class LineProcess {
public:
    /// Spawns `command` via /bin/sh -c. Throws Error if the spawn fails.
    explicit LineProcess(const std::string& command);
    ~LineProcess();

    LineProcess(const LineProcess&) = delete;
    LineProcess& operator=(const LineProcess&) = delete;

    /// Next complete line (without the newline), waiting up to
    /// timeout_seconds. Returns nullopt on timeout or end of stream. A final
    /// unterminated line is delivered before end of stream is reported.
    std::optional<std::string> read_line(double timeout_seconds);

    bool eof() const { return eof_ && buffer_.empty(); }

    /// Exit status if the child already terminated on its own, else nullopt.
    std::optional<int> exit_status();

    /// Kills the child if still running and reaps it.
    void terminate();

private:
    pid_t pid_ = -1;
    int fd_ = -1;
    std::string buffer_;
    bool eof_ = false;
    bool reaped_ = false;
    int status_ = 0;
};

}  // namespace betwise
