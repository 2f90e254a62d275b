#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace voltpath::test_util {

inline std::filesystem::path fixture_dir() { return VOLTPATH_FIXTURE_DIR; }

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    out << text;
}

/// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::path(VOLTPATH_SCRATCH_DIR) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace voltpath::test_util
