#include <algorithm>
#include <vector>

#include "doctest.h"
#include "mirrornet/errors.hpp"
#include "mirrornet/evaluation.hpp"
#include "mirrornet/rng.hpp"
#include "mirrornet/train.hpp"

using namespace mirrornet;

namespace {

using Counts = std::vector<std::vector<std::size_t>>;

// Greedy baseline: repeatedly take the largest remaining cell with a
// free row and column. Never beats the exhaustive optimum.
std::size_t greedy_mapping_hits(const Counts& confusion) {
    const std::size_t k = confusion.size();
    const std::size_t c = confusion.front().size();
    std::vector<bool> row_used(k, false), col_used(c, false);
    std::size_t hits = 0;
    while (true) {
        std::size_t best = 0, bi = k, bj = c;
        for (std::size_t i = 0; i < k; ++i) {
            if (row_used[i]) continue;
            for (std::size_t j = 0; j < c; ++j) {
                if (col_used[j]) continue;
                if (confusion[i][j] >= best) {
                    best = confusion[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == k) break;
        row_used[bi] = true;
        col_used[bj] = true;
        hits += best;
    }
    return hits;
}

} // namespace

TEST_CASE("confusion_matrix tallies clusters against classes") {
    // Three samples, one cluster, one class: a single cell.
    const Confusion single =
        confusion_matrix({0, 0, 0}, {"face", "face", "face"}, 1);
    CHECK(single.class_names == std::vector<std::string>{"face"});
    CHECK(single.counts == Counts{{3}});
    CHECK(single.total() == 3);

    // Sample order does not matter.
    const std::vector<std::size_t> assignments{0, 1, 1, 0, 1};
    const std::vector<std::string> labels{"a", "b", "b", "b", "a"};
    const Confusion base = confusion_matrix(assignments, labels, 2);
    std::vector<std::size_t> perm{4, 2, 0, 1, 3};
    std::vector<std::size_t> pa;
    std::vector<std::string> pl;
    for (std::size_t i : perm) {
        pa.push_back(assignments[i]);
        pl.push_back(labels[i]);
    }
    const Confusion permuted = confusion_matrix(pa, pl, 2);
    CHECK(base.counts == permuted.counts);
    CHECK(base.class_names == permuted.class_names);

    CHECK_THROWS_AS(confusion_matrix({0, 1}, {"a"}, 2), ShapeError);
    CHECK_THROWS_AS(confusion_matrix({2}, {"a"}, 2), ShapeError);
}

TEST_CASE("experiment tallies reproduce the published success rates") {
    // Two-pattern experiment, training split: one group of 88 furniture
    // plus a stray face, one group of 87 faces. 175/176 correct.
    const Counts exp1_train{{1, 88}, {87, 0}}; // columns: face, furniture
    const MappingResult r1 = success_rate(exp1_train);
    CHECK(r1.n_total == 176);
    CHECK(r1.n_correct == 175);
    CHECK(std::abs(r1.rate - 175.0 / 176.0) < 1e-9);
    CHECK(r1.cluster_to_class == std::vector<int>{1, 0});

    // Same experiment, test split: 42 = 40 furniture + 2 faces, 38 faces.
    const Counts exp1_test{{2, 40}, {38, 0}};
    CHECK(std::abs(success_rate(exp1_test).rate - 78.0 / 80.0) < 1e-9);

    // Three-pattern experiment, training split, columns
    // (furniture, flower, face): 88+84+87 = 259 of 264.
    const Counts exp2_train{{88, 0, 0}, {0, 84, 1}, {0, 4, 87}};
    const MappingResult r2 = success_rate(exp2_train);
    CHECK(r2.n_total == 264);
    CHECK(r2.n_correct == 259);
    CHECK(std::abs(r2.rate - 259.0 / 264.0) < 1e-9);

    // Test split: 30 furniture / 28 flower / 30 face + 2 flower = 88 of 90.
    const Counts exp2_test{{30, 0, 0}, {0, 28, 0}, {0, 2, 30}};
    CHECK(std::abs(success_rate(exp2_test).rate - 88.0 / 90.0) < 1e-9);
}

TEST_CASE("success_rate is invariant under cluster relabeling") {
    const Counts base{{30, 0, 0}, {0, 28, 0}, {0, 2, 30}};
    const double rate = success_rate(base).rate;
    std::vector<std::size_t> order{0, 1, 2};
    do {
        Counts shuffled;
        for (std::size_t i : order) shuffled.push_back(base[i]);
        CHECK(success_rate(shuffled).rate == rate);
    } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("success_rate handles rectangular confusion matrices conservatively") {
    // One cluster, two classes: map to the dominant class, rest wrong.
    const MappingResult wide = success_rate(Counts{{5, 7}});
    CHECK(wide.n_correct == 7);
    CHECK(wide.n_total == 12);
    CHECK(wide.cluster_to_class == std::vector<int>{1});

    // Two clusters, one class: only one cluster can map.
    const MappingResult tall = success_rate(Counts{{5}, {7}});
    CHECK(tall.n_correct == 7);
    CHECK(tall.n_total == 12);
    CHECK(tall.cluster_to_class == std::vector<int>{-1, 0});
}

TEST_CASE("exhaustive mapping dominates the greedy baseline") {
    SplitMix64 rng(31337);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 1 + rng.next_below(5);
        const std::size_t c = 1 + rng.next_below(5);
        Counts confusion(k, std::vector<std::size_t>(c));
        for (auto& row : confusion) {
            for (auto& cell : row) cell = rng.next_below(40);
        }
        bool all_zero = true;
        for (const auto& row : confusion) {
            for (auto cell : row) all_zero &= (cell == 0);
        }
        if (all_zero) confusion[0][0] = 1;
        CHECK(success_rate(confusion).n_correct >= greedy_mapping_hits(confusion));
    }
}

TEST_CASE("success_rate refuses oversized inputs") {
    const Counts big(9, std::vector<std::size_t>(2, 1));
    CHECK_THROWS_AS(success_rate(big), ComplexityRefusal);
    const Counts wide(2, std::vector<std::size_t>(9, 1));
    CHECK_THROWS_AS(success_rate(wide), ComplexityRefusal);
}

TEST_CASE("perfect separation scores exactly 1") {
    const Counts diag{{10, 0}, {0, 20}};
    const MappingResult r = success_rate(diag);
    CHECK(r.rate == 1.0);
    CHECK(r.n_correct == 30);
}

TEST_CASE("evaluate() wires confusion and mapping together") {
    const std::vector<std::size_t> assignments{0, 0, 1, 1, 1};
    const std::vector<std::string> labels{"x", "x", "y", "y", "x"};
    const EvalReport report = evaluate(assignments, labels, 2);
    CHECK(report.confusion.counts == Counts{{2, 0}, {1, 2}});
    CHECK(report.mapping.n_correct == 4);
    CHECK(report.mapping.rate == 0.8);
}

TEST_CASE("reconstruction_report: zero network mirrors mid-gray exactly") {
    Network net = init_network(NetworkShape({6, 4, 2, 6}), 0.01, 0);
    for (Matrix& w : net.weights) std::fill(w.data.begin(), w.data.end(), 0.0);
    for (auto& b : net.biases) std::fill(b.begin(), b.end(), 0.0);
    const std::vector<std::vector<double>> inputs{std::vector<double>(6, 0.0),
                                                  std::vector<double>(6, 0.0)};
    const ReconstructionReport report = reconstruction_report(net, inputs, 0.05);
    CHECK(report.per_sample_rms == std::vector<double>{0.0, 0.0});
    CHECK(report.mean_rms == 0.0);
    CHECK(report.max_rms == 0.0);
    CHECK(report.mirrored_fraction == 1.0);
}

TEST_CASE("reconstruction_report agrees with the training criterion") {
    SplitMix64 rng(404);
    std::vector<std::vector<double>> data(10, std::vector<double>(6));
    for (auto& v : data) {
        for (double& x : v) x = rng.next_uniform(-0.9, 0.9);
    }
    TrainConfig config;
    config.learning_rate = 0.02;
    config.max_epochs = 60;
    config.mirror_threshold = 0.35;
    config.rng_seed = 6;
    Network net = init_network(NetworkShape({6, 5, 3, 6}), 0.05, 44);
    auto [trained, train_report] = train(std::move(net), data, config);

    const ReconstructionReport recon =
        reconstruction_report(trained, data, config.mirror_threshold);
    CHECK(recon.mirrored_fraction == train_report.final_mirrored_fraction);
}
