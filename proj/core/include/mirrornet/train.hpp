#ifndef MIRRORNET_TRAIN_HPP
#define MIRRORNET_TRAIN_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mirrornet/network.hpp"

namespace mirrornet {

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t max_epochs = 5000;
    // A sample counts as mirrored when the RMS distance between it and
    // its reconstruction falls below this.
    double mirror_threshold = 0.05;
    // Training stops once this fraction of the data is mirrored.
    double success_fraction = 0.95;
    // Half-width of the uniform weight/bias initialization.
    double init_scale = 0.05;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct TrainReport {
    std::size_t epochs_run = 0;
    double final_mirrored_fraction = 0.0;
    // Mean per-sample squared error observed during each epoch
    // (pre-update, the value backprop_step returns).
    std::vector<double> per_epoch_mse;
    bool converged = false;
};

// Root-mean-square distance between two equal-length vectors.
double rms_distance(std::span<const double> a, std::span<const double> b);

// Fraction of inputs whose reconstruction RMS error is below threshold.
double mirrored_fraction(const Network& net, const std::vector<std::vector<double>>& inputs,
                         double threshold);

// Invoked after every epoch with (epoch number, epoch MSE, mirrored fraction).
using EpochCallback = std::function<void(std::size_t, double, double)>;

// Online gradient descent: each epoch applies one backprop step per
// sample in a freshly shuffled order (shuffle seeded from rng_seed and
// the epoch number), then measures the mirrored fraction. Stops as soon
// as the fraction reaches success_fraction (converged) or after
// max_epochs (not converged). Identical inputs and seeds reproduce the
// trajectory bit-for-bit.
std::pair<Network, TrainReport> train(Network net,
                                      const std::vector<std::vector<double>>& data,
                                      const TrainConfig& config,
                                      const EpochCallback& on_epoch = {});

} // namespace mirrornet

#endif // MIRRORNET_TRAIN_HPP
