#ifndef MIRRORNET_PREPROCESS_HPP
#define MIRRORNET_PREPROCESS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "mirrornet/image.hpp"

namespace mirrornet {

// Networks consume values in [-0.9, +0.9]; inputs and activations are
// clamped to the same band.
inline constexpr double kUnitBound = 0.9;

// Maps an 8-bit intensity into [-1, 1): (p - 128) / 128. Exact in
// binary64 for every p since 128 is a power of two.
// Throws InvalidIntensity outside [0, 255].
double rescale_intensity(int p);

// Clamps to [-0.9, +0.9]. Throws InvalidValue on non-finite input.
double truncate(double x);

// One preprocessed image: 676 values in [-0.9, +0.9], row-major.
struct Sample {
    std::vector<double> values;
    std::string source_id;
};

// value[i] = truncate(rescale_intensity(pixels[i])). The image must be
// 26x26 (DimensionMismatch otherwise).
Sample sample_from_image(const RawImage& image, std::string source_id);

// Reads a PGM file and preprocesses it.
Sample load_sample(const std::filesystem::path& path);

// One manifest line: `relative/path.pgm[,label]`. `path` is the resolved
// path (relative entries are taken relative to the manifest's directory);
// `label` is empty when the manifest carries none.
struct ManifestEntry {
    std::filesystem::path path;
    std::string label;
};

// Parses a manifest: UTF-8, one record per line, `#` lines and blank
// lines ignored. Does not touch the referenced files.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_path);

// Samples plus the labels carried alongside them. Labels never reach
// training or clustering; only the evaluation module consumes them.
struct Dataset {
    std::vector<Sample> samples;
    std::vector<std::string> labels; // parallel to samples; "" when absent

    std::vector<std::vector<double>> values() const;
};

// Loads every manifest entry, in manifest order. If any file fails to
// load, throws one IoFailure naming each offending path.
Dataset load_dataset(const std::filesystem::path& manifest_path);

} // namespace mirrornet

#endif // MIRRORNET_PREPROCESS_HPP
