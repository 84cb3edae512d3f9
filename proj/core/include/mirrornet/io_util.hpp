#ifndef MIRRORNET_IO_UTIL_HPP
#define MIRRORNET_IO_UTIL_HPP

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

namespace mirrornet {

// Writes a file by streaming into `<path>.tmp` and renaming it over the
// target, so a failed run never leaves a partially written output.
// Throws IoFailure if the stream or the rename fails.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& producer);

// Formats a double with 17 significant digits, enough to round-trip
// any binary64 value through text.
std::string format_double(double v);

} // namespace mirrornet

#endif // MIRRORNET_IO_UTIL_HPP
