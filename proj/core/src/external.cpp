#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "perfsage/datagen.hpp"
#include "perfsage/errors.hpp"

namespace perfsage::datagen {

namespace {

void ignore_sigpipe_once() {
    // The child may exit without reading its stdin (e.g. `echo 0.5`).
    static std::once_flag once;
    std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

std::string feature_line(std::span<const double> features) {
    std::string line;
    char buf[64];
    for (std::size_t i = 0; i < features.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", features[i]);
        if (i) line += ' ';
        line += buf;
    }
    line += '\n';
    return line;
}

[[noreturn]] void child_exec(const std::string& command, int in_fd, int out_fd) {
    if (dup2(in_fd, STDIN_FILENO) < 0 || dup2(out_fd, STDOUT_FILENO) < 0) _exit(127);
    close(in_fd);
    close(out_fd);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
}

}  // namespace

double run_external_variant(const std::string& command,
                            std::span<const double> features) {
    if (command.empty()) throw ExternalVariantError("empty launch command");
    ignore_sigpipe_once();

    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0) throw ExternalVariantError("pipe() failed");
    if (pipe(from_child) != 0) {
        close(to_child[0]);
        close(to_child[1]);
        throw ExternalVariantError("pipe() failed");
    }

    const pid_t pid = fork();
    if (pid < 0) {
        for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) close(fd);
        throw ExternalVariantError("fork() failed for '" + command + "'");
    }
    if (pid == 0) {
        close(to_child[1]);
        close(from_child[0]);
        child_exec(command, to_child[0], from_child[1]);
    }
    close(to_child[0]);
    close(from_child[1]);

    const std::string line = feature_line(features);
    // EPIPE is fine: the variant may not consume its input.
    ssize_t off = 0;
    while (off < static_cast<ssize_t>(line.size())) {
        const ssize_t w =
            write(to_child[1], line.data() + off, line.size() - static_cast<std::size_t>(off));
        if (w <= 0) break;
        off += w;
    }
    close(to_child[1]);

    std::string reply;
    char buf[256];
    for (;;) {
        const ssize_t r = read(from_child[0], buf, sizeof(buf));
        if (r <= 0) break;
        reply.append(buf, static_cast<std::size_t>(r));
    }
    close(from_child[0]);

    int status = 0;
    if (waitpid(pid, &status, 0) < 0)
        throw ExternalVariantError("waitpid() failed for '" + command + "'");
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        throw ExternalVariantError("variant command '" + command + "' exited with status " +
                                   std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));

    // First line of the reply must be a single decimal runtime in seconds.
    const std::size_t eol = reply.find('\n');
    std::string token = eol == std::string::npos ? reply : reply.substr(0, eol);
    while (!token.empty() && (token.back() == '\r' || token.back() == ' ')) token.pop_back();
    std::size_t begin = token.find_first_not_of(' ');
    if (begin == std::string::npos)
        throw ExternalVariantError("variant command '" + command + "' replied with no runtime");
    token = token.substr(begin);

    char* end = nullptr;
    const double runtime = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
        throw ExternalVariantError("variant command '" + command +
                                   "' replied with non-numeric runtime '" + token + "'");
    if (!(runtime > 0.0))
        throw ExternalVariantError("variant command '" + command +
                                   "' replied with non-positive runtime");
    return runtime;
}

}  // namespace perfsage::datagen
