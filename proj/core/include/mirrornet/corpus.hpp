#ifndef MIRRORNET_CORPUS_HPP
#define MIRRORNET_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "mirrornet/image.hpp"

namespace mirrornet {

struct CorpusSpec {
    std::size_t n_classes = 3;
    std::size_t per_class_train = 88;
    std::size_t per_class_test = 30;
    // Gaussian pixel noise, in gray levels (standard deviation).
    double noise_level = 12.0;
    std::uint64_t rng_seed = 0;
    std::filesystem::path output_dir;
    // Per-image geometric jitter: uniform integer translation in
    // [-translation_jitter_px, +translation_jitter_px] per axis and a
    // uniform scale factor in [1 - scale_jitter, 1 + scale_jitter].
    int translation_jitter_px = 2;
    double scale_jitter = 0.15;

    void validate() const;
};

// Number of built-in pattern families (one class per family).
std::size_t archetype_family_count();
std::string archetype_family_name(std::size_t family);

// Renders one 26x26 instance of a family: a binary pattern (background
// 40, foreground 215) translated by (dx, dy) pixels and scaled by
// `scale`. Exposed so tests can pin geometry without going through files.
RawImage render_archetype(std::size_t family, int dx, int dy, double scale);

struct CorpusOutput {
    std::filesystem::path train_manifest;
    std::filesystem::path test_manifest;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
};

// Writes `<family>_<index>.pgm` files plus labeled train/test manifests
// under spec.output_dir. Class i uses family i; per-class train images
// come first, then test images. Same seed, same bytes.
CorpusOutput generate_corpus(const CorpusSpec& spec);

} // namespace mirrornet

#endif // MIRRORNET_CORPUS_HPP
