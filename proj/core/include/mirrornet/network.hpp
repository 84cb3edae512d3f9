#ifndef MIRRORNET_NETWORK_HPP
#define MIRRORNET_NETWORK_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mirrornet {

// Dense row-major matrix, just enough for feed-forward arithmetic.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    bool operator==(const Matrix&) const = default;
};

// Layer sizes, input first. Mirroring requires the output layer to match
// the input layer; encoder and decoder sizes are otherwise free, so
// asymmetric stacks like 676-30-20-676 are the normal case.
struct NetworkShape {
    std::vector<std::size_t> layer_sizes;

    NetworkShape() = default;
    explicit NetworkShape(std::vector<std::size_t> sizes) : layer_sizes(std::move(sizes)) {}

    static NetworkShape default_shape() { return NetworkShape({676, 30, 20, 676}); }

    // Parses "676,30,20,676". Throws ShapeError on malformed or invalid text.
    static NetworkShape parse(const std::string& text);

    // Throws ShapeError unless there are >= 3 layers, all positive, with
    // first == last.
    void validate() const;

    std::size_t input_size() const { return layer_sizes.front(); }
    std::size_t output_size() const { return layer_sizes.back(); }
    // Number of non-input layers.
    std::size_t depth() const { return layer_sizes.size() - 1; }

    std::string to_string() const;

    bool operator==(const NetworkShape&) const = default;
};

// Index of the bottleneck layer among the non-input layers (0-based):
// ceil(depth / 2) - 1. For 676-30-20-676 this is the 20-unit layer.
std::size_t central_layer_index(const NetworkShape& shape);

// Weights and biases for every non-input layer. weights[l] has
// dimensions layer_sizes[l+1] x layer_sizes[l].
struct Network {
    NetworkShape shape;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    bool operator==(const Network&) const = default;
};

// The bottleneck activation vector, used as the extracted feature set.
using Code = std::vector<double>;

// Sigmoidal activation tanh(s/2) = (1 - e^-s) / (1 + e^-s), computed in
// the overflow-free branch for either sign. Output strictly inside (-1, 1).
double sgm(double s);

// sgm followed by a hard clamp to [-0.9, +0.9].
double modified_activation(double s);

// Fills every weight and bias with independent draws from
// uniform(-init_scale, +init_scale) using SplitMix64(rng_seed); the same
// seed reproduces the network bit-for-bit.
Network init_network(const NetworkShape& shape, double init_scale, std::uint64_t rng_seed);

// Runs the network, returning the clamped activation vector of every
// non-input layer. Throws ShapeError if input length does not match.
std::vector<std::vector<double>> forward(const Network& net, std::span<const double> input);

// Activation of the central (bottleneck) layer.
Code encode(const Network& net, std::span<const double> input);

// Output-layer activation; same length as the input. Values are in
// [-0.9, 0.9] and map back to pixels via p = round(128 v + 128).
std::vector<double> reconstruct(const Network& net, std::span<const double> input);

// Reusable buffers for the forward/backward pass, so per-sample training
// steps do not allocate.
class BackpropWorkspace {
public:
    explicit BackpropWorkspace(const NetworkShape& shape);

    // One stochastic gradient-descent step against the reconstruction
    // error E = sum_i (input_i - output_i)^2 / 2 with the input itself as
    // target. The clamp is treated as identity in the backward pass: the
    // derivative through each unit is (1 - y^2)/2 for y = sgm(s), which
    // keeps saturated units trainable. Returns E measured before the
    // update. Throws NumericalFailure if E is not finite.
    double step(Network& net, std::span<const double> input, double learning_rate);

    // Forward pass into the workspace buffers; returns the output layer.
    std::span<const double> run_forward(const Network& net, std::span<const double> input);

private:
    std::vector<std::vector<double>> activations_; // clamped, per layer
    std::vector<std::vector<double>> sigmoids_;    // pre-clamp sgm(s), per layer
    std::vector<std::vector<double>> deltas_;
};

// Value-semantics step: copies the network, applies one update, and
// returns (updated network, pre-update sample error).
std::pair<Network, double> backprop_step(const Network& net, std::span<const double> input,
                                         double learning_rate);

} // namespace mirrornet

#endif // MIRRORNET_NETWORK_HPP
