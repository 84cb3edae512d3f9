#include "mirrornet/corpus.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "mirrornet/errors.hpp"
#include "mirrornet/io_util.hpp"
#include "mirrornet/rng.hpp"

namespace mirrornet {

namespace {

constexpr std::uint8_t kBackground = 40;
constexpr std::uint8_t kForeground = 215;

constexpr std::array<const char*, 5> kFamilyNames = {
    "disk", "stripes", "blocks", "checker", "cross",
};

long floored_div(double v, double divisor) {
    return static_cast<long>(std::floor(v / divisor));
}

// Pattern predicates over pixel centers (x + 0.5, y + 0.5).
bool pattern_pixel(std::size_t family, double px, double py, int dx, int dy, double scale) {
    const double cx = 13.0 + dx;
    const double cy = 13.0 + dy;
    switch (family) {
        case 0: { // filled disk
            const double r = 7.0 * scale;
            const double ddx = px - cx;
            const double ddy = py - cy;
            return ddx * ddx + ddy * ddy <= r * r;
        }
        case 1: { // horizontal stripes
            const double period = 6.0 * scale;
            return floored_div(py - dy, period / 2.0) % 2 == 0;
        }
        case 2: { // opposite corner blocks
            const double side = 8.0 * scale;
            const double tl = 2.0;
            const bool in_tl = px >= tl + dx && px < tl + dx + side && py >= tl + dy &&
                               py < tl + dy + side;
            const bool in_br = px <= 24.0 + dx && px > 24.0 + dx - side &&
                               py <= 24.0 + dy && py > 24.0 + dy - side;
            return in_tl || in_br;
        }
        case 3: { // checkerboard
            const double cell = 5.0 * scale;
            return (floored_div(px - dx, cell) + floored_div(py - dy, cell)) % 2 == 0;
        }
        case 4: { // diagonal cross
            const double half_width = 2.0 * scale;
            const double u = px - cx;
            const double v = py - cy;
            return std::abs(u - v) <= half_width || std::abs(u + v) <= half_width;
        }
        default:
            throw CorpusSpecError("unknown archetype family " + std::to_string(family));
    }
}

std::uint8_t clip_to_byte(double v) {
    if (v <= 0.0) return 0;
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v));
}

} // namespace

void CorpusSpec::validate() const {
    if (n_classes == 0) throw CorpusSpecError("n_classes must be >= 1");
    if (n_classes > archetype_family_count()) {
        throw CorpusSpecError("n_classes " + std::to_string(n_classes) + " exceeds the " +
                              std::to_string(archetype_family_count()) +
                              " built-in archetype families");
    }
    if (per_class_train == 0) throw CorpusSpecError("per_class_train must be >= 1");
    if (noise_level < 0.0 || noise_level > 64.0) {
        throw CorpusSpecError("noise_level must be in [0, 64]");
    }
    if (translation_jitter_px < 0) throw CorpusSpecError("translation jitter must be >= 0");
    if (scale_jitter < 0.0 || scale_jitter >= 1.0) {
        throw CorpusSpecError("scale_jitter must be in [0, 1)");
    }
    if (output_dir.empty()) throw CorpusSpecError("output_dir must be set");
}

std::size_t archetype_family_count() { return kFamilyNames.size(); }

std::string archetype_family_name(std::size_t family) {
    if (family >= kFamilyNames.size()) {
        throw CorpusSpecError("unknown archetype family " + std::to_string(family));
    }
    return kFamilyNames[family];
}

RawImage render_archetype(std::size_t family, int dx, int dy, double scale) {
    if (family >= kFamilyNames.size()) {
        throw CorpusSpecError("unknown archetype family " + std::to_string(family));
    }
    RawImage img;
    img.width = kImageSide;
    img.height = kImageSide;
    img.pixels.resize(static_cast<std::size_t>(kImageSide) * kImageSide);
    for (int y = 0; y < kImageSide; ++y) {
        for (int x = 0; x < kImageSide; ++x) {
            const bool fg = pattern_pixel(family, x + 0.5, y + 0.5, dx, dy, scale);
            img.at(x, y) = fg ? kForeground : kBackground;
        }
    }
    return img;
}

CorpusOutput generate_corpus(const CorpusSpec& spec) {
    spec.validate();
    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    if (ec) {
        throw IoFailure("cannot create output directory " + spec.output_dir.string() +
                        " (" + ec.message() + ")");
    }

    SplitMix64 rng(spec.rng_seed);
    std::ostringstream train_manifest;
    std::ostringstream test_manifest;
    CorpusOutput out;

    const std::size_t per_class = spec.per_class_train + spec.per_class_test;
    for (std::size_t cls = 0; cls < spec.n_classes; ++cls) {
        const std::string family = archetype_family_name(cls);
        for (std::size_t i = 0; i < per_class; ++i) {
            const int span = 2 * spec.translation_jitter_px + 1;
            const int dx = static_cast<int>(rng.next_below(span)) - spec.translation_jitter_px;
            const int dy = static_cast<int>(rng.next_below(span)) - spec.translation_jitter_px;
            const double scale = 1.0 + rng.next_uniform(-spec.scale_jitter, spec.scale_jitter);

            RawImage img = render_archetype(cls, dx, dy, scale);
            if (spec.noise_level > 0.0) {
                for (std::uint8_t& p : img.pixels) {
                    p = clip_to_byte(p + spec.noise_level * rng.next_gaussian());
                }
            }

            char name[64];
            std::snprintf(name, sizeof(name), "%s_%03zu.pgm", family.c_str(), i);
            write_pgm(img, spec.output_dir / name);
            if (i < spec.per_class_train) {
                train_manifest << name << ',' << family << '\n';
                ++out.n_train;
            } else {
                test_manifest << name << ',' << family << '\n';
                ++out.n_test;
            }
        }
    }

    out.train_manifest = spec.output_dir / "train_manifest.txt";
    out.test_manifest = spec.output_dir / "test_manifest.txt";
    atomic_write(out.train_manifest,
                 [&](std::ostream& os) { os << train_manifest.str(); });
    atomic_write(out.test_manifest, [&](std::ostream& os) { os << test_manifest.str(); });
    return out;
}

} // namespace mirrornet
