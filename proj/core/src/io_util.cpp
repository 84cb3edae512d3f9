#include "mirrornet/io_util.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

#include "mirrornet/errors.hpp"

namespace mirrornet {

void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& producer) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoFailure("cannot open for writing: " + tmp.string());
        }
        producer(out);
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoFailure("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoFailure("rename failed: " + tmp.string() + " -> " + path.string() +
                        " (" + ec.message() + ")");
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace mirrornet
