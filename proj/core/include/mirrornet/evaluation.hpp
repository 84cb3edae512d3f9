#ifndef MIRRORNET_EVALUATION_HPP
#define MIRRORNET_EVALUATION_HPP

#include <string>
#include <vector>

#include "mirrornet/network.hpp"

namespace mirrornet {

// Cluster x class counts. Class columns are the distinct labels in
// lexicographic order, so the matrix does not depend on sample order.
struct Confusion {
    std::vector<std::string> class_names;
    std::vector<std::vector<std::size_t>> counts; // k rows, class_names.size() cols

    std::size_t clusters() const { return counts.size(); }
    std::size_t classes() const { return class_names.size(); }
    std::size_t total() const;
};

// Tallies cluster assignments against ground-truth labels.
// Throws ShapeError when lengths differ or an assignment is >= k.
Confusion confusion_matrix(const std::vector<std::size_t>& assignments,
                           const std::vector<std::string>& labels, std::size_t k);

// The best injective cluster -> class mapping and its accuracy.
struct MappingResult {
    double rate = 0.0;
    // cluster_to_class[j] is a class column index, or -1 when unmapped
    // (possible when k > number of classes).
    std::vector<int> cluster_to_class;
    std::size_t n_correct = 0;
    std::size_t n_total = 0;
};

// Exhaustive search over injective mappings between clusters and classes
// (the smaller side maps into the larger); samples outside the mapping
// count as incorrect. Refuses k or c above 8 (ComplexityRefusal).
MappingResult success_rate(const std::vector<std::vector<std::size_t>>& confusion);

struct EvalReport {
    Confusion confusion;
    MappingResult mapping;
};

EvalReport evaluate(const std::vector<std::size_t>& assignments,
                    const std::vector<std::string>& labels, std::size_t k);

// Reconstruction quality of a network over a set of inputs.
struct ReconstructionReport {
    std::vector<double> per_sample_rms;
    double mean_rms = 0.0;
    double max_rms = 0.0;
    double mirrored_fraction = 0.0; // fraction with RMS below `threshold`
    double threshold = 0.0;
};

ReconstructionReport reconstruction_report(const Network& net,
                                           const std::vector<std::vector<double>>& inputs,
                                           double threshold);

} // namespace mirrornet

#endif // MIRRORNET_EVALUATION_HPP
