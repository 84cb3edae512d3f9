#include "mirrornet/train.hpp"

#include <cmath>
#include <numeric>

#include "mirrornet/errors.hpp"
#include "mirrornet/rng.hpp"

namespace mirrornet {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw InvalidValue("learning_rate must be positive");
    if (!(mirror_threshold > 0.0)) throw InvalidValue("mirror_threshold must be positive");
    if (!(success_fraction > 0.0) || success_fraction > 1.0) {
        throw InvalidValue("success_fraction must be in (0, 1]");
    }
    if (!(init_scale > 0.0)) throw InvalidValue("init_scale must be positive");
}

double rms_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ShapeError("rms_distance: lengths " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(a.size()));
}

namespace {

double mirrored_fraction_ws(BackpropWorkspace& ws, const Network& net,
                            const std::vector<std::vector<double>>& inputs,
                            double threshold) {
    std::size_t mirrored = 0;
    for (const std::vector<double>& x : inputs) {
        const std::span<const double> out = ws.run_forward(net, x);
        if (rms_distance(x, out) < threshold) ++mirrored;
    }
    return static_cast<double>(mirrored) / static_cast<double>(inputs.size());
}

} // namespace

double mirrored_fraction(const Network& net, const std::vector<std::vector<double>>& inputs,
                         double threshold) {
    if (inputs.empty()) {
        throw EmptyDataset("mirrored_fraction: no inputs");
    }
    BackpropWorkspace ws(net.shape);
    return mirrored_fraction_ws(ws, net, inputs, threshold);
}

std::pair<Network, TrainReport> train(Network net,
                                      const std::vector<std::vector<double>>& data,
                                      const TrainConfig& config,
                                      const EpochCallback& on_epoch) {
    config.validate();
    if (data.empty()) {
        throw EmptyDataset("train: empty dataset");
    }
    for (const std::vector<double>& x : data) {
        if (x.size() != net.shape.input_size()) {
            throw ShapeError("train: sample length " + std::to_string(x.size()) +
                             " does not match input layer " +
                             std::to_string(net.shape.input_size()));
        }
    }

    BackpropWorkspace ws(net.shape);
    TrainReport report;
    report.final_mirrored_fraction = mirrored_fraction_ws(ws, net, data, config.mirror_threshold);

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    while (report.final_mirrored_fraction < config.success_fraction &&
           report.epochs_run < config.max_epochs) {
        const std::size_t epoch = report.epochs_run + 1;
        // Fresh generator per epoch; SplitMix64 decorrelates the additive seeds.
        SplitMix64 rng(config.rng_seed + 0x9E3779B97F4A7C15ull * epoch);
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order);

        double error_sum = 0.0;
        for (const std::size_t idx : order) {
            error_sum += ws.step(net, data[idx], config.learning_rate);
        }
        const double epoch_mse = error_sum / static_cast<double>(data.size());

        report.epochs_run = epoch;
        report.per_epoch_mse.push_back(epoch_mse);
        report.final_mirrored_fraction =
            mirrored_fraction_ws(ws, net, data, config.mirror_threshold);
        if (on_epoch) {
            on_epoch(epoch, epoch_mse, report.final_mirrored_fraction);
        }
    }
    report.converged = report.final_mirrored_fraction >= config.success_fraction;
    return {std::move(net), report};
}

} // namespace mirrornet
