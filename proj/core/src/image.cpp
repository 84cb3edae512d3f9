#include "mirrornet/image.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "mirrornet/errors.hpp"
#include "mirrornet/io_util.hpp"

namespace mirrornet {

namespace {

// Reads one header token, skipping whitespace and `#` comments.
std::string next_header_token(std::istream& in, const std::string& name) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF) {
        throw FormatError(name + ": truncated PGM header");
    }
    std::string token;
    while (c != EOF && !std::isspace(c) && c != '#') {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    // Leave the terminator in the stream; the raster separator after
    // maxval is consumed by the caller.
    if (c != EOF) in.unget();
    return token;
}

int parse_header_int(const std::string& token, const std::string& name,
                     const char* what) {
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(token, &pos);
    } catch (const std::exception&) {
        throw FormatError(name + ": bad " + what + " in PGM header: '" + token + "'");
    }
    if (pos != token.size() || value <= 0) {
        throw FormatError(name + ": bad " + what + " in PGM header: '" + token + "'");
    }
    return value;
}

} // namespace

RawImage read_pgm(std::istream& in, const std::string& name) {
    if (next_header_token(in, name) != "P5") {
        throw FormatError(name + ": not a binary PGM (missing P5 magic)");
    }
    RawImage img;
    img.width = parse_header_int(next_header_token(in, name), name, "width");
    img.height = parse_header_int(next_header_token(in, name), name, "height");
    const int maxval = parse_header_int(next_header_token(in, name), name, "maxval");
    if (maxval != 255) {
        throw FormatError(name + ": unsupported maxval " + std::to_string(maxval) +
                          " (must be 255)");
    }
    // The header tokenizer consumed exactly the token; the single
    // whitespace separating header and raster is consumed here.
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep)) {
        throw FormatError(name + ": missing whitespace before PGM raster");
    }
    const std::size_t n =
        static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    img.pixels.resize(n);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
        throw FormatError(name + ": truncated PGM raster (expected " +
                          std::to_string(n) + " bytes)");
    }
    return img;
}

RawImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoFailure("cannot open: " + path.string());
    }
    return read_pgm(in, path.string());
}

void write_pgm(const RawImage& image, std::ostream& out) {
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
}

void write_pgm(const RawImage& image, const std::filesystem::path& path) {
    if (image.pixels.size() !=
        static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height)) {
        throw DimensionMismatch("pixel buffer does not match " +
                                std::to_string(image.width) + "x" +
                                std::to_string(image.height));
    }
    atomic_write(path, [&](std::ostream& out) { write_pgm(image, out); });
}

} // namespace mirrornet
