#include "mirrornet/evaluation.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "mirrornet/errors.hpp"
#include "mirrornet/train.hpp"

namespace mirrornet {

std::size_t Confusion::total() const {
    std::size_t sum = 0;
    for (const auto& row : counts) {
        for (std::size_t c : row) sum += c;
    }
    return sum;
}

Confusion confusion_matrix(const std::vector<std::size_t>& assignments,
                           const std::vector<std::string>& labels, std::size_t k) {
    if (assignments.size() != labels.size()) {
        throw ShapeError("confusion_matrix: " + std::to_string(assignments.size()) +
                         " assignments vs " + std::to_string(labels.size()) + " labels");
    }
    // std::map keeps class columns in lexicographic order.
    std::map<std::string, std::size_t> class_index;
    for (const std::string& label : labels) class_index.emplace(label, 0);
    std::size_t next = 0;
    for (auto& [name, idx] : class_index) idx = next++;

    Confusion confusion;
    confusion.class_names.reserve(class_index.size());
    for (const auto& [name, idx] : class_index) confusion.class_names.push_back(name);
    confusion.counts.assign(k, std::vector<std::size_t>(class_index.size(), 0));

    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] >= k) {
            throw ShapeError("assignment " + std::to_string(assignments[i]) +
                             " out of range for k=" + std::to_string(k));
        }
        ++confusion.counts[assignments[i]][class_index[labels[i]]];
    }
    return confusion;
}

MappingResult success_rate(const std::vector<std::vector<std::size_t>>& confusion) {
    const std::size_t k = confusion.size();
    if (k == 0) throw ShapeError("success_rate: empty confusion matrix");
    const std::size_t c = confusion.front().size();
    for (const auto& row : confusion) {
        if (row.size() != c) throw ShapeError("success_rate: ragged confusion matrix");
    }
    if (c == 0) throw ShapeError("success_rate: no classes");
    if (k > 8 || c > 8) {
        throw ComplexityRefusal("success_rate: exhaustive mapping supports k, c <= 8 (got k=" +
                                std::to_string(k) + ", c=" + std::to_string(c) + ")");
    }

    MappingResult best;
    best.cluster_to_class.assign(k, -1);
    for (const auto& row : confusion) {
        best.n_total += std::accumulate(row.begin(), row.end(), std::size_t{0});
    }
    if (best.n_total == 0) throw ShapeError("success_rate: empty confusion matrix");

    // Permute the larger side; the smaller side maps injectively into it.
    if (k <= c) {
        std::vector<std::size_t> classes(c);
        std::iota(classes.begin(), classes.end(), std::size_t{0});
        do {
            std::size_t hits = 0;
            for (std::size_t j = 0; j < k; ++j) hits += confusion[j][classes[j]];
            if (hits > best.n_correct) {
                best.n_correct = hits;
                for (std::size_t j = 0; j < k; ++j) {
                    best.cluster_to_class[j] = static_cast<int>(classes[j]);
                }
            }
        } while (std::next_permutation(classes.begin(), classes.end()));
    } else {
        std::vector<std::size_t> clusters(k);
        std::iota(clusters.begin(), clusters.end(), std::size_t{0});
        do {
            std::size_t hits = 0;
            for (std::size_t t = 0; t < c; ++t) hits += confusion[clusters[t]][t];
            if (hits > best.n_correct) {
                best.n_correct = hits;
                std::fill(best.cluster_to_class.begin(), best.cluster_to_class.end(), -1);
                for (std::size_t t = 0; t < c; ++t) {
                    best.cluster_to_class[clusters[t]] = static_cast<int>(t);
                }
            }
        } while (std::next_permutation(clusters.begin(), clusters.end()));
    }
    best.rate = static_cast<double>(best.n_correct) / static_cast<double>(best.n_total);
    return best;
}

EvalReport evaluate(const std::vector<std::size_t>& assignments,
                    const std::vector<std::string>& labels, std::size_t k) {
    EvalReport report;
    report.confusion = confusion_matrix(assignments, labels, k);
    report.mapping = success_rate(report.confusion.counts);
    return report;
}

ReconstructionReport reconstruction_report(const Network& net,
                                           const std::vector<std::vector<double>>& inputs,
                                           double threshold) {
    if (inputs.empty()) throw EmptyDataset("reconstruction_report: no inputs");
    ReconstructionReport report;
    report.threshold = threshold;
    report.per_sample_rms.reserve(inputs.size());
    BackpropWorkspace ws(net.shape);
    std::size_t mirrored = 0;
    double sum = 0.0;
    for (const std::vector<double>& x : inputs) {
        const double rms = rms_distance(x, ws.run_forward(net, x));
        report.per_sample_rms.push_back(rms);
        sum += rms;
        report.max_rms = std::max(report.max_rms, rms);
        if (rms < threshold) ++mirrored;
    }
    report.mean_rms = sum / static_cast<double>(inputs.size());
    report.mirrored_fraction =
        static_cast<double>(mirrored) / static_cast<double>(inputs.size());
    return report;
}

} // namespace mirrornet
