#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "resonet/error.hpp"

namespace resonet::io {

[[nodiscard]] inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) fail(errc::io_error, "error while reading '" + path.string() + "'");
    return ss.str();
}

/// Writes to a sibling temporary file and renames it over `path`, so a
/// failed write never leaves a partial file behind.
inline void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(errc::io_error, "cannot open '" + path.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            fail(errc::io_error, "error while writing '" + path.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        fail(errc::io_error, "cannot move output into place at '" + path.string() + "': " +
                                 ec.message());
    }
}

} // namespace resonet::io
