#include "mirrornet/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mirrornet/errors.hpp"
#include "mirrornet/preprocess.hpp"
#include "mirrornet/rng.hpp"

namespace mirrornet {

NetworkShape NetworkShape::parse(const std::string& text) {
    std::vector<std::size_t> sizes;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(token, &pos);
            if (pos != token.size() || v <= 0) throw std::invalid_argument(token);
            sizes.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw ShapeError("bad layer size '" + token + "' in shape '" + text + "'");
        }
    }
    NetworkShape shape(std::move(sizes));
    shape.validate();
    return shape;
}

void NetworkShape::validate() const {
    if (layer_sizes.size() < 3) {
        throw ShapeError("shape needs at least 3 layers, got " +
                         std::to_string(layer_sizes.size()));
    }
    for (std::size_t s : layer_sizes) {
        if (s == 0) throw ShapeError("zero-sized layer in shape " + to_string());
    }
    if (layer_sizes.front() != layer_sizes.back()) {
        throw ShapeError("output layer (" + std::to_string(layer_sizes.back()) +
                         ") must match input layer (" + std::to_string(layer_sizes.front()) +
                         ") for mirroring");
    }
}

std::string NetworkShape::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(layer_sizes[i]);
    }
    return out;
}

std::size_t central_layer_index(const NetworkShape& shape) {
    const std::size_t depth = shape.depth();
    return (depth + 1) / 2 - 1;
}

double sgm(double s) {
    if (s >= 0.0) {
        const double e = std::exp(-s);
        return (1.0 - e) / (1.0 + e);
    }
    const double e = std::exp(s);
    return (e - 1.0) / (e + 1.0);
}

double modified_activation(double s) {
    return std::clamp(sgm(s), -kUnitBound, kUnitBound);
}

Network init_network(const NetworkShape& shape, double init_scale, std::uint64_t rng_seed) {
    shape.validate();
    if (!(init_scale > 0.0)) {
        throw InvalidValue("init_scale must be positive");
    }
    SplitMix64 rng(rng_seed);
    Network net;
    net.shape = shape;
    net.weights.reserve(shape.depth());
    net.biases.reserve(shape.depth());
    for (std::size_t l = 0; l < shape.depth(); ++l) {
        Matrix w(shape.layer_sizes[l + 1], shape.layer_sizes[l]);
        for (double& v : w.data) v = rng.next_uniform(-init_scale, init_scale);
        net.weights.push_back(std::move(w));
        std::vector<double> b(shape.layer_sizes[l + 1]);
        for (double& v : b) v = rng.next_uniform(-init_scale, init_scale);
        net.biases.push_back(std::move(b));
    }
    return net;
}

namespace {

void check_input(const Network& net, std::span<const double> input) {
    if (net.weights.size() != net.shape.depth() || net.biases.size() != net.shape.depth()) {
        throw ShapeError("network has " + std::to_string(net.weights.size()) +
                         " weight matrices for depth " + std::to_string(net.shape.depth()));
    }
    for (std::size_t l = 0; l < net.shape.depth(); ++l) {
        if (net.weights[l].rows != net.shape.layer_sizes[l + 1] ||
            net.weights[l].cols != net.shape.layer_sizes[l] ||
            net.biases[l].size() != net.shape.layer_sizes[l + 1]) {
            throw ShapeError("layer " + std::to_string(l + 1) +
                             " weights/biases do not match shape " + net.shape.to_string());
        }
    }
    if (input.size() != net.shape.input_size()) {
        throw ShapeError("input length " + std::to_string(input.size()) +
                         " does not match input layer " +
                         std::to_string(net.shape.input_size()));
    }
}

// s = W a_prev + b, then y = sgm(s) and a = clamp(y).
void layer_forward(const Matrix& w, const std::vector<double>& b,
                   std::span<const double> prev, std::vector<double>& sig,
                   std::vector<double>& act) {
    for (std::size_t i = 0; i < w.rows; ++i) {
        const std::span<const double> row = w.row(i);
        double s = b[i];
        for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * prev[j];
        const double y = sgm(s);
        sig[i] = y;
        act[i] = std::clamp(y, -kUnitBound, kUnitBound);
    }
}

} // namespace

BackpropWorkspace::BackpropWorkspace(const NetworkShape& shape) {
    shape.validate();
    const std::size_t depth = shape.depth();
    activations_.resize(depth);
    sigmoids_.resize(depth);
    deltas_.resize(depth);
    for (std::size_t l = 0; l < depth; ++l) {
        activations_[l].resize(shape.layer_sizes[l + 1]);
        sigmoids_[l].resize(shape.layer_sizes[l + 1]);
        deltas_[l].resize(shape.layer_sizes[l + 1]);
    }
}

std::span<const double> BackpropWorkspace::run_forward(const Network& net,
                                                       std::span<const double> input) {
    check_input(net, input);
    const std::size_t depth = net.shape.depth();
    if (activations_.size() != depth ||
        activations_.back().size() != net.shape.output_size()) {
        throw ShapeError("workspace was built for a different shape");
    }
    std::span<const double> prev = input;
    for (std::size_t l = 0; l < depth; ++l) {
        layer_forward(net.weights[l], net.biases[l], prev, sigmoids_[l], activations_[l]);
        prev = activations_[l];
    }
    return activations_.back();
}

double BackpropWorkspace::step(Network& net, std::span<const double> input,
                               double learning_rate) {
    const std::span<const double> output = run_forward(net, input);
    const std::size_t depth = net.shape.depth();

    // Output layer: E = sum (t - o)^2 / 2 with t = input, o = clamped output.
    double error = 0.0;
    std::vector<double>& out_delta = deltas_[depth - 1];
    const std::vector<double>& out_sig = sigmoids_[depth - 1];
    for (std::size_t i = 0; i < output.size(); ++i) {
        const double diff = output[i] - input[i];
        error += 0.5 * diff * diff;
        out_delta[i] = diff * 0.5 * (1.0 - out_sig[i] * out_sig[i]);
    }
    if (!std::isfinite(error)) {
        throw NumericalFailure("non-finite reconstruction error; training diverged");
    }

    // Hidden layers, all deltas from pre-update weights.
    for (std::size_t l = depth - 1; l > 0; --l) {
        const Matrix& w = net.weights[l];
        std::vector<double>& prev_delta = deltas_[l - 1];
        std::fill(prev_delta.begin(), prev_delta.end(), 0.0);
        const std::vector<double>& d = deltas_[l];
        for (std::size_t i = 0; i < w.rows; ++i) {
            const double di = d[i];
            const std::span<const double> row = w.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) prev_delta[j] += di * row[j];
        }
        const std::vector<double>& sig = sigmoids_[l - 1];
        for (std::size_t j = 0; j < prev_delta.size(); ++j) {
            prev_delta[j] *= 0.5 * (1.0 - sig[j] * sig[j]);
        }
    }

    // Gradient descent update.
    for (std::size_t l = 0; l < depth; ++l) {
        Matrix& w = net.weights[l];
        std::vector<double>& b = net.biases[l];
        const std::vector<double>& d = deltas_[l];
        const std::span<const double> prev =
            (l == 0) ? input : std::span<const double>(activations_[l - 1]);
        for (std::size_t i = 0; i < w.rows; ++i) {
            const double step_i = learning_rate * d[i];
            const std::span<double> row = w.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) row[j] -= step_i * prev[j];
            b[i] -= step_i;
        }
    }
    return error;
}

std::vector<std::vector<double>> forward(const Network& net, std::span<const double> input) {
    check_input(net, input);
    std::vector<std::vector<double>> acts;
    acts.reserve(net.shape.depth());
    std::vector<double> sig;
    std::span<const double> prev = input;
    for (std::size_t l = 0; l < net.shape.depth(); ++l) {
        sig.resize(net.shape.layer_sizes[l + 1]);
        std::vector<double> act(net.shape.layer_sizes[l + 1]);
        layer_forward(net.weights[l], net.biases[l], prev, sig, act);
        acts.push_back(std::move(act));
        prev = acts.back();
    }
    return acts;
}

Code encode(const Network& net, std::span<const double> input) {
    return forward(net, input)[central_layer_index(net.shape)];
}

std::vector<double> reconstruct(const Network& net, std::span<const double> input) {
    return forward(net, input).back();
}

std::pair<Network, double> backprop_step(const Network& net, std::span<const double> input,
                                         double learning_rate) {
    if (!(learning_rate > 0.0)) {
        throw InvalidValue("learning_rate must be positive");
    }
    Network updated = net;
    BackpropWorkspace ws(net.shape);
    const double error = ws.step(updated, input, learning_rate);
    return {std::move(updated), error};
}

} // namespace mirrornet
