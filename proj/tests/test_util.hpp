#pragma once

#include <atomic>
#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace msmine::test {

inline std::filesystem::path temp_dir() {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("msmine_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs a shell command, capturing stdout+stderr; returns the exit code.
inline int run_cmd(const std::string& cmd, std::string* output = nullptr) {
    const auto out_path = temp_dir() / "cmd_output.txt";
    const int rc = std::system((cmd + " >" + out_path.string() + " 2>&1").c_str());
    if (output) *output = read_file(out_path);
    return WEXITSTATUS(rc);
}

} // namespace msmine::test
