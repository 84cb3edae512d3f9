#ifndef MIRRORNET_IMAGE_HPP
#define MIRRORNET_IMAGE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace mirrornet {

// Side length and flattened size of the images the pipeline consumes.
inline constexpr int kImageSide = 26;
inline constexpr int kInputDim = kImageSide * kImageSide; // 676

// An 8-bit grayscale image, pixels row-major from the top-left corner.
struct RawImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// Reads a binary PGM ("P5") image. Header `#` comments are accepted;
// maxval must be 255. Throws IoFailure on unreadable files and
// FormatError on anything that is not a well-formed P5 stream.
RawImage read_pgm(const std::filesystem::path& path);
RawImage read_pgm(std::istream& in, const std::string& name);

// Writes a binary PGM with maxval 255. The file appears atomically
// (written to a temporary name, then renamed).
void write_pgm(const RawImage& image, const std::filesystem::path& path);
void write_pgm(const RawImage& image, std::ostream& out);

} // namespace mirrornet

#endif // MIRRORNET_IMAGE_HPP
