#pragma once

#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include <doctest.h>

namespace testing {

// Message of the exception thrown by fn, or "" when nothing is thrown.
template <class E, class F>
std::string thrown_message(F&& fn) {
    try {
        fn();
    } catch (const E& e) {
        return e.what();
    }
    return "";
}

inline bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("scc-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::filesystem::path fixture_dir() { return SCC_FIXTURE_DIR; }
inline std::filesystem::path data_dir() { return SCC_DATA_DIR; }

}  // namespace testing
