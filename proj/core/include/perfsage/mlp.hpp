#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "perfsage/rng.hpp"

namespace perfsage::models {

/// Fully-connected layer; weights row-major (out x in).
struct DenseLayer {
    int in = 0;
    int out = 0;
    std::vector<double> w;
    std::vector<double> b;
};

/// Small multilayer perceptron: ReLU on hidden layers, linear scalar output.
struct Mlp {
    std::vector<DenseLayer> layers;

    /// dims = {inputs, hidden..., 1}; Glorot-uniform init, deterministic in rng.
    static Mlp init(const std::vector<int>& dims, Rng& rng);

    double forward(std::span<const double> x) const;
    int input_dim() const { return layers.empty() ? 0 : layers.front().in; }
    /// Trainable parameters: sum over layers of (in + 1) * out.
    int param_count() const;
};

/// Mean squared error of the net over rows of X against y.
double mse_loss(const Mlp& net, const std::vector<std::vector<double>>& X,
                std::span<const double> y);

/// Analytic gradient of mse_loss w.r.t. every parameter, flattened in layer
/// order (weights then biases per layer). Also returns the loss.
struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad;
};
LossGrad mse_gradient(const Mlp& net, const std::vector<std::vector<double>>& X,
                      std::span<const double> y);

/// Flat parameter access, matching the gradient layout. For tests.
std::vector<double> flatten_params(const Mlp& net);
void unflatten_params(Mlp& net, std::span<const double> flat);

/// Adam optimizer state over a flat parameter vector.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    int step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
    void update(std::span<double> params, std::span<const double> grad, double lr);
};

/// Full-batch Adam on MSE for `epochs` epochs. Returns the per-epoch loss
/// trace; throws TrainingError naming the epoch if the loss goes non-finite.
std::vector<double> train_full_batch(Mlp& net, const std::vector<std::vector<double>>& X,
                                     std::span<const double> y, double learning_rate,
                                     int epochs);

}  // namespace perfsage::models
