#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

#include "linscale/digits.hpp"
#include "linscale/errors.hpp"

extern char** environ;

namespace linscale {

namespace {

struct TempFile {
    std::string path;
    ~TempFile() {
        if (!path.empty()) ::unlink(path.c_str());
    }
};

struct Fd {
    int fd = -1;
    ~Fd() { reset(); }
    void reset() {
        if (fd >= 0) ::close(fd);
        fd = -1;
    }
};

}  // namespace

OcrResult run_external_ocr(const Image& roi, const AdapterOptions& options) {
    if (options.command.empty()) throw Error(Stage::ocr, "AdapterSpawnFailure", "no OCR adapter command configured");

    const char* tmpdir = std::getenv("TMPDIR");
    std::string tmpl = std::string(tmpdir && *tmpdir ? tmpdir : "/tmp") + "/linscale-roi-XXXXXX";
    const std::string suffix = options.png ? ".png" : ".ppm";
    tmpl += suffix;
    int tfd = ::mkstemps(tmpl.data(), static_cast<int>(suffix.size()));
    if (tfd < 0) throw Error(Stage::ocr, "AdapterSpawnFailure", "cannot create temporary image: " + std::string(std::strerror(errno)));
    ::close(tfd);
    TempFile tmp{tmpl};
    write_file(tmp.path, options.png ? encode_png(roi) : encode_pnm(roi));

    int fds[2];
    if (::pipe2(fds, O_CLOEXEC) != 0)
        throw Error(Stage::ocr, "AdapterSpawnFailure", "pipe: " + std::string(std::strerror(errno)));
    Fd rd{fds[0]}, wr{fds[1]};

    std::vector<std::string> args = options.command;
    args.push_back(tmp.path);
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);

    posix_spawn_file_actions_t fa;
    posix_spawn_file_actions_init(&fa);
    posix_spawn_file_actions_adddup2(&fa, wr.fd, STDOUT_FILENO);
    pid_t pid = 0;
    const int rc = ::posix_spawnp(&pid, argv[0], &fa, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&fa);
    wr.reset();
    if (rc != 0) {
        throw Error(Stage::ocr, "AdapterSpawnFailure",
                    "cannot start '" + args[0] + "': " + std::string(std::strerror(rc)));
    }

    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + options.timeout;
    std::string out;
    char buf[512];
    for (;;) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
        if (left <= 0) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, nullptr, 0);
            throw Error(Stage::ocr, "AdapterTimeout", "OCR adapter exceeded its time limit");
        }
        pollfd p{rd.fd, POLLIN, 0};
        const int pr = ::poll(&p, 1, static_cast<int>(left));
        if (pr < 0 && errno == EINTR) continue;
        if (pr == 0) continue;
        const ssize_t n = ::read(rd.fd, buf, sizeof buf);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) break;
        out.append(buf, static_cast<std::size_t>(n));
    }

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }

    OcrResult res;
    res.raw_text = out.substr(0, out.find('\n'));
    if (!res.raw_text.empty() && res.raw_text.back() == '\r') res.raw_text.pop_back();
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        res.error = "adapter exited with status " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1);
        return res;
    }
    res.value = parse_ocr_text(res.raw_text);
    res.confidence = res.value ? 1.0 : 0.0;
    return res;
}

}  // namespace linscale
