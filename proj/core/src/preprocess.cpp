#include "mirrornet/preprocess.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mirrornet/errors.hpp"

namespace mirrornet {

double rescale_intensity(int p) {
    if (p < 0 || p > 255) {
        throw InvalidIntensity("pixel intensity " + std::to_string(p) +
                               " outside [0, 255]");
    }
    return (p - 128) / 128.0;
}

double truncate(double x) {
    if (!std::isfinite(x)) {
        throw InvalidValue("truncate: non-finite value");
    }
    if (x <= -kUnitBound) return -kUnitBound;
    if (x >= kUnitBound) return kUnitBound;
    return x;
}

Sample sample_from_image(const RawImage& image, std::string source_id) {
    if (image.width != kImageSide || image.height != kImageSide) {
        throw DimensionMismatch(source_id + ": image is " +
                                std::to_string(image.width) + "x" +
                                std::to_string(image.height) + ", expected " +
                                std::to_string(kImageSide) + "x" +
                                std::to_string(kImageSide));
    }
    Sample s;
    s.source_id = std::move(source_id);
    s.values.reserve(image.pixels.size());
    for (std::uint8_t p : image.pixels) {
        s.values.push_back(truncate(rescale_intensity(p)));
    }
    return s;
}

Sample load_sample(const std::filesystem::path& path) {
    return sample_from_image(read_pgm(path), path.string());
}

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) {
        throw IoFailure("cannot open manifest: " + manifest_path.string());
    }
    const std::filesystem::path base = manifest_path.parent_path();
    std::vector<ManifestEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        const std::string record = strip(line);
        if (record.empty() || record[0] == '#') continue;
        ManifestEntry e;
        const std::size_t comma = record.find(',');
        std::string file = record;
        if (comma != std::string::npos) {
            file = strip(record.substr(0, comma));
            e.label = strip(record.substr(comma + 1));
        }
        if (file.empty()) {
            throw FormatError(manifest_path.string() + ": manifest record with empty path");
        }
        std::filesystem::path p(file);
        e.path = p.is_absolute() ? p : base / p;
        entries.push_back(std::move(e));
    }
    return entries;
}

std::vector<std::vector<double>> Dataset::values() const {
    std::vector<std::vector<double>> out;
    out.reserve(samples.size());
    for (const Sample& s : samples) out.push_back(s.values);
    return out;
}

Dataset load_dataset(const std::filesystem::path& manifest_path) {
    const std::vector<ManifestEntry> entries = read_manifest(manifest_path);
    Dataset ds;
    ds.samples.reserve(entries.size());
    ds.labels.reserve(entries.size());
    std::ostringstream failures;
    std::size_t n_failed = 0;
    for (const ManifestEntry& e : entries) {
        try {
            ds.samples.push_back(load_sample(e.path));
            ds.labels.push_back(e.label);
        } catch (const Error& err) {
            ++n_failed;
            failures << (n_failed == 1 ? "" : "; ") << err.what();
        }
    }
    if (n_failed > 0) {
        throw IoFailure("failed to load " + std::to_string(n_failed) +
                        " manifest file(s): " + failures.str());
    }
    return ds;
}

} // namespace mirrornet
