#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "graspbench/rng.hpp"

namespace graspbench::testing {

// Self-cleaning temporary directory for filesystem-facing tests.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("graspbench_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const {
        return path_ / name;
    }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    return content;
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the CLI binary (path injected by the build) with stdout/stderr capture.
inline CliResult run_cli(const std::string& args) {
#ifdef GRASPBENCH_CLI_PATH
    const std::string binary = GRASPBENCH_CLI_PATH;
#else
    const std::string binary = "graspbench";
#endif
    const TempDir capture("cli_io");
    const std::filesystem::path out_file = capture / "out.txt";
    const std::filesystem::path err_file = capture / "err.txt";
    const std::string command =
        binary + " " + args + " >" + out_file.string() + " 2>" + err_file.string();
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_text(out_file);
    result.err = read_text(err_file);
    return result;
}

}  // namespace graspbench::testing
