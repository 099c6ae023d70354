#include "aspectra/subprocess_model.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <utility>

#include "aspectra/csv.hpp"
#include "aspectra/error.hpp"

extern char** environ;

namespace aspectra {
namespace {

class Fd {
public:
    Fd() = default;
    explicit Fd(int fd) : fd_(fd) {}
    Fd(const Fd&) = delete;
    Fd& operator=(const Fd&) = delete;
    Fd(Fd&& o) noexcept : fd_(o.release()) {}
    Fd& operator=(Fd&& o) noexcept {
        reset(o.release());
        return *this;
    }
    ~Fd() { reset(); }

    int get() const noexcept { return fd_; }
    int release() noexcept { return std::exchange(fd_, -1); }
    void reset(int fd = -1) noexcept {
        if (fd_ >= 0) ::close(fd_);
        fd_ = fd;
    }

private:
    int fd_ = -1;
};

[[noreturn]] void fail(const std::string& what) { throw Error(Errc::SubprocessFailure, what); }

std::pair<Fd, Fd> make_pipe() {
    int fds[2];
    if (::pipe2(fds, O_CLOEXEC) != 0) fail(std::string("pipe: ") + std::strerror(errno));
    return {Fd(fds[0]), Fd(fds[1])};
}

// Keeps SIGPIPE blocked for the calling thread while writing to the child, so
// a child that exits early produces EPIPE instead of killing the process.
class SigpipeGuard {
public:
    SigpipeGuard() {
        sigemptyset(&pipe_set_);
        sigaddset(&pipe_set_, SIGPIPE);
        pthread_sigmask(SIG_BLOCK, &pipe_set_, &old_);
    }
    ~SigpipeGuard() {
        if (!sigismember(&old_, SIGPIPE)) {
            const timespec zero{0, 0};
            while (sigtimedwait(&pipe_set_, nullptr, &zero) > 0) {
            }
        }
        pthread_sigmask(SIG_SETMASK, &old_, nullptr);
    }

private:
    sigset_t pipe_set_;
    sigset_t old_;
};

struct ChildResult {
    std::string output;
    int status = 0;
    bool input_truncated = false;
};

ChildResult run_child(const std::string& command, const std::string& input) {
    auto [in_read, in_write] = make_pipe();
    auto [out_read, out_write] = make_pipe();

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in_read.get(), STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_write.get(), STDOUT_FILENO);

    const char* argv[] = {"/bin/sh", "-c", command.c_str(), nullptr};
    pid_t pid = -1;
    const int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr, const_cast<char* const*>(argv), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) fail("cannot start '" + command + "': " + std::strerror(rc));
    in_read.reset();
    out_write.reset();

    SigpipeGuard guard;
    ::fcntl(in_write.get(), F_SETFL, O_NONBLOCK);

    ChildResult result;
    std::size_t written = 0;
    if (input.empty()) in_write.reset();
    char buf[65536];
    while (out_read.get() >= 0) {
        pollfd fds[2];
        nfds_t count = 0;
        fds[count++] = {out_read.get(), POLLIN, 0};
        if (in_write.get() >= 0) fds[count++] = {in_write.get(), POLLOUT, 0};
        if (::poll(fds, count, -1) < 0) {
            if (errno == EINTR) continue;
            fail(std::string("poll: ") + std::strerror(errno));
        }
        if (count == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
            const ssize_t w = ::write(in_write.get(), input.data() + written, input.size() - written);
            if (w > 0) {
                written += static_cast<std::size_t>(w);
                if (written == input.size()) in_write.reset();
            } else if (w < 0 && errno != EAGAIN && errno != EINTR) {
                // Child stopped reading.
                result.input_truncated = true;
                in_write.reset();
            }
        }
        if (fds[0].revents & (POLLIN | POLLERR | POLLHUP)) {
            const ssize_t r = ::read(out_read.get(), buf, sizeof buf);
            if (r > 0) {
                result.output.append(buf, static_cast<std::size_t>(r));
            } else if (r == 0 || (errno != EAGAIN && errno != EINTR)) {
                out_read.reset();
            }
        }
    }
    in_write.reset();
    while (::waitpid(pid, &result.status, 0) < 0) {
        if (errno != EINTR) fail(std::string("waitpid: ") + std::strerror(errno));
    }
    return result;
}

}  // namespace

SubprocessModel::SubprocessModel(std::string command, Options options)
    : command_(std::move(command)), options_(std::move(options)) {
    if (command_.empty()) throw Error(Errc::InvalidArgument, "empty model command");
}

std::string encode_predict_request(const NumericTable& table) {
    std::string out = "PREDICT " + std::to_string(table.rows()) + " " + std::to_string(table.cols()) + "\n";
    for (std::size_t j = 0; j < table.cols(); ++j) {
        if (j) out.push_back(',');
        out += table.column_name(j);
    }
    out.push_back('\n');
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (std::size_t j = 0; j < table.cols(); ++j) {
            if (j) out.push_back(',');
            out += format_double17(table.at(i, j));
        }
        out.push_back('\n');
    }
    return out;
}

std::vector<double> decode_predict_response(const std::string& text, std::size_t expected) {
    std::vector<double> out;
    out.reserve(expected);
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
        if (out.size() == expected) {
            if (line.empty() && pos >= text.size()) break;
            fail("model wrote more than the expected " + std::to_string(expected) + " lines");
        }
        if (!line.empty() && line.front() == '+') line.remove_prefix(1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (line.empty() || ec != std::errc() || ptr != line.data() + line.size() || !std::isfinite(v)) {
            fail("line " + std::to_string(out.size() + 1) + " of model output is not a finite number: '" +
                 std::string(line) + "'");
        }
        out.push_back(v);
    }
    if (out.size() != expected) {
        fail("model wrote " + std::to_string(out.size()) + " predictions, expected " + std::to_string(expected));
    }
    return out;
}

std::vector<double> SubprocessModel::exchange(const NumericTable& table) const {
    const auto result = run_child(command_, encode_predict_request(table));
    if (WIFSIGNALED(result.status)) {
        fail("'" + command_ + "' killed by signal " + std::to_string(WTERMSIG(result.status)));
    }
    if (!WIFEXITED(result.status) || WEXITSTATUS(result.status) != 0) {
        fail("'" + command_ + "' exited with status " + std::to_string(WEXITSTATUS(result.status)));
    }
    if (result.input_truncated) fail("'" + command_ + "' did not read the whole request");
    return decode_predict_response(result.output, table.rows());
}

std::vector<double> SubprocessModel::predict_unchecked(const NumericTable& table) const {
    std::lock_guard lock(mutex_);
    auto first = exchange(table);
    if (options_.verify_determinism) {
        const auto second = exchange(table);
        if (second != first) {
            throw Error(Errc::NonDeterministicModel, "'" + command_ + "' gave different predictions for identical input");
        }
    }
    return first;
}

std::optional<std::string> model_command_from_env() {
    const char* v = std::getenv(kModelCommandEnv);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

}  // namespace aspectra
