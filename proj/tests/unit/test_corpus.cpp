#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "mirrornet/corpus.hpp"
#include "mirrornet/errors.hpp"
#include "mirrornet/preprocess.hpp"
#include "temp_dir.hpp"

using namespace mirrornet;
using testutil::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

CorpusSpec small_spec(const std::filesystem::path& dir) {
    CorpusSpec spec;
    spec.n_classes = 3;
    spec.per_class_train = 8;
    spec.per_class_test = 3;
    spec.noise_level = 12.0;
    spec.rng_seed = 7;
    spec.output_dir = dir;
    return spec;
}

} // namespace

TEST_CASE("generate_corpus emits the requested counts in manifest order") {
    TempDir dir("corpus");
    const CorpusOutput out = generate_corpus(small_spec(dir.path()));
    CHECK(out.n_train == 24);
    CHECK(out.n_test == 9);

    const auto train_entries = read_manifest(out.train_manifest);
    const auto test_entries = read_manifest(out.test_manifest);
    REQUIRE(train_entries.size() == 24);
    REQUIRE(test_entries.size() == 9);

    // Class-major order with labels matching the file stem's family.
    CHECK(train_entries[0].label == "disk");
    CHECK(train_entries[8].label == "stripes");
    CHECK(train_entries[16].label == "blocks");
    for (const auto& e : train_entries) {
        CHECK(e.path.filename().string().rfind(e.label + "_", 0) == 0);
    }

    // Train and test files do not overlap.
    std::set<std::string> train_files, test_files;
    for (const auto& e : train_entries) train_files.insert(e.path.filename().string());
    for (const auto& e : test_entries) test_files.insert(e.path.filename().string());
    for (const auto& f : test_files) CHECK(train_files.count(f) == 0);
}

TEST_CASE("same seed, same bytes") {
    TempDir dir_a("corpus_a");
    TempDir dir_b("corpus_b");
    const CorpusOutput a = generate_corpus(small_spec(dir_a.path()));
    const CorpusOutput b = generate_corpus(small_spec(dir_b.path()));

    const auto entries_a = read_manifest(a.train_manifest);
    const auto entries_b = read_manifest(b.train_manifest);
    REQUIRE(entries_a.size() == entries_b.size());
    for (std::size_t i = 0; i < entries_a.size(); ++i) {
        CHECK(slurp(entries_a[i].path) == slurp(entries_b[i].path));
    }
    CHECK(slurp(a.train_manifest) == slurp(b.train_manifest));
    CHECK(slurp(a.test_manifest) == slurp(b.test_manifest));
}

TEST_CASE("zero noise and zero jitter degenerate to identical class images") {
    TempDir dir("corpus_flat");
    CorpusSpec spec = small_spec(dir.path());
    spec.noise_level = 0.0;
    spec.translation_jitter_px = 0;
    spec.scale_jitter = 0.0;
    const CorpusOutput out = generate_corpus(spec);
    const auto entries = read_manifest(out.train_manifest);
    std::string reference;
    std::string current_label;
    for (const auto& e : entries) {
        if (e.label != current_label) {
            current_label = e.label;
            reference = slurp(e.path);
        } else {
            CHECK(slurp(e.path) == reference);
        }
    }
}

TEST_CASE("every emitted file loads as a valid sample") {
    TempDir dir("corpus_load");
    const CorpusOutput out = generate_corpus(small_spec(dir.path()));
    for (const auto& manifest : {out.train_manifest, out.test_manifest}) {
        const Dataset ds = load_dataset(manifest);
        for (const Sample& s : ds.samples) {
            REQUIRE(s.values.size() == 676);
            for (double v : s.values) {
                CHECK(v >= -0.9);
                CHECK(v <= 0.9);
            }
        }
    }
}

TEST_CASE("classes separate in pixel space: inter-class distance dominates") {
    TempDir dir("corpus_sep");
    const CorpusOutput out = generate_corpus(small_spec(dir.path()));
    const Dataset ds = load_dataset(out.train_manifest);

    double intra_sum = 0.0, inter_sum = 0.0;
    std::size_t intra_n = 0, inter_n = 0;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        for (std::size_t j = i + 1; j < ds.samples.size(); ++j) {
            double sq = 0.0;
            for (std::size_t d = 0; d < ds.samples[i].values.size(); ++d) {
                const double diff = ds.samples[i].values[d] - ds.samples[j].values[d];
                sq += diff * diff;
            }
            const double dist = std::sqrt(sq);
            if (ds.labels[i] == ds.labels[j]) {
                intra_sum += dist;
                ++intra_n;
            } else {
                inter_sum += dist;
                ++inter_n;
            }
        }
    }
    REQUIRE(intra_n > 0);
    REQUIRE(inter_n > 0);
    CHECK(inter_sum / inter_n > intra_sum / intra_n);
}

TEST_CASE("render_archetype is pure and geometry responds to jitter") {
    const RawImage base = render_archetype(0, 0, 0, 1.0);
    CHECK(render_archetype(0, 0, 0, 1.0).pixels == base.pixels);
    CHECK(render_archetype(0, 2, 0, 1.0).pixels != base.pixels);  // translated
    CHECK(render_archetype(0, 0, 0, 1.15).pixels != base.pixels); // scaled
    CHECK(base.width == 26);
    CHECK(base.height == 26);

    // Distinct families render distinct patterns.
    for (std::size_t f = 1; f < archetype_family_count(); ++f) {
        CHECK(render_archetype(f, 0, 0, 1.0).pixels != base.pixels);
    }
}

TEST_CASE("corpus spec validation") {
    TempDir dir("corpus_bad");
    CorpusSpec spec = small_spec(dir.path());
    spec.n_classes = archetype_family_count() + 1;
    CHECK_THROWS_AS(generate_corpus(spec), CorpusSpecError);

    spec = small_spec(dir.path());
    spec.noise_level = 65.0;
    CHECK_THROWS_AS(generate_corpus(spec), CorpusSpecError);

    spec = small_spec(dir.path());
    spec.per_class_train = 0;
    CHECK_THROWS_AS(generate_corpus(spec), CorpusSpecError);

    spec = small_spec(dir.path());
    spec.output_dir.clear();
    CHECK_THROWS_AS(generate_corpus(spec), CorpusSpecError);
}
