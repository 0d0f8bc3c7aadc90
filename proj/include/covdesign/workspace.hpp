#pragma once

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

namespace covdesign::io {

/// On-disk run directory: designs/, profiles/, reports/, plus an append-only
/// manifest of every command (timestamps live here and nowhere else, so the
/// artifact files themselves stay byte-reproducible).
class Workspace {
public:
    explicit Workspace(std::filesystem::path root) : root_(std::move(root)) {
        std::filesystem::create_directories(root_);
    }

    const std::filesystem::path& root() const { return root_; }

    std::filesystem::path designs() const { return ensure("designs"); }
    std::filesystem::path profiles() const { return ensure("profiles"); }
    std::filesystem::path reports() const { return ensure("reports"); }

    /// Append one manifest entry under an advisory lock.
    void log(const std::string& command_line, unsigned long long seed,
             const std::vector<std::filesystem::path>& outputs) const {
        std::string entry = timestamp();
        entry += '\t';
        entry += command_line;
        entry += "\tseed=" + std::to_string(seed);
        entry += "\toutputs=";
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            if (i) entry += ';';
            entry += outputs[i].string();
        }
        entry += '\n';

        const auto path = root_ / "manifest.log";
        const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
        if (fd < 0) return;
        ::flock(fd, LOCK_EX);
        const auto written = ::write(fd, entry.data(), entry.size());
        (void)written;
        ::flock(fd, LOCK_UN);
        ::close(fd);
    }

private:
    std::filesystem::path ensure(const char* name) const {
        auto path = root_ / name;
        std::filesystem::create_directories(path);
        return path;
    }

    static std::string timestamp() {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buffer[32];
        std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buffer;
    }

    std::filesystem::path root_;
};

} // namespace covdesign::io
