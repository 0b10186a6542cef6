#include "perfsage/mlp.hpp"

#include <cmath>

#include "perfsage/errors.hpp"

namespace perfsage::models {

Mlp Mlp::init(const std::vector<int>& dims, Rng& rng) {
    if (dims.size() < 2) throw ParamError("network needs at least input and output dims");
    for (int d : dims)
        if (d < 1) throw ParamError("network layer widths must be >= 1");
    Mlp net;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        DenseLayer layer;
        layer.in = dims[l];
        layer.out = dims[l + 1];
        const double bound = std::sqrt(6.0 / (layer.in + layer.out));
        layer.w.resize(static_cast<std::size_t>(layer.in) * layer.out);
        for (auto& w : layer.w) w = rng.uniform(-bound, bound);
        layer.b.assign(layer.out, 0.0);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

int Mlp::param_count() const {
    int count = 0;
    for (const auto& l : layers) count += (l.in + 1) * l.out;
    return count;
}

namespace {

/// Forward pass keeping post-activation values of every layer.
void forward_cached(const Mlp& net, std::span<const double> x,
                    std::vector<std::vector<double>>& acts) {
    acts.resize(net.layers.size() + 1);
    acts[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const auto& layer = net.layers[l];
        const bool hidden = l + 1 < net.layers.size();
        auto& out = acts[l + 1];
        out.assign(static_cast<std::size_t>(layer.out), 0.0);
        for (int o = 0; o < layer.out; ++o) {
            double z = layer.b[o];
            const double* wrow = &layer.w[static_cast<std::size_t>(o) * layer.in];
            for (int i = 0; i < layer.in; ++i) z += wrow[i] * acts[l][i];
            out[o] = hidden ? (z > 0.0 ? z : 0.0) : z;
        }
    }
}

}  // namespace

double Mlp::forward(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != input_dim())
        throw SchemaError("feature vector length does not match the network input");
    thread_local std::vector<std::vector<double>> acts;
    forward_cached(*this, x, acts);
    return acts.back()[0];
}

double mse_loss(const Mlp& net, const std::vector<std::vector<double>>& X,
                std::span<const double> y) {
    if (X.size() != y.size() || X.empty()) throw ParamError("bad training batch");
    double acc = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double e = net.forward(X[i]) - y[i];
        acc += e * e;
    }
    return acc / static_cast<double>(X.size());
}

LossGrad mse_gradient(const Mlp& net, const std::vector<std::vector<double>>& X,
                      std::span<const double> y) {
    if (X.size() != y.size() || X.empty()) throw ParamError("bad training batch");
    const std::size_t n_params = flatten_params(net).size();
    LossGrad result;
    result.grad.assign(n_params, 0.0);

    std::vector<std::vector<double>> acts;
    std::vector<std::vector<double>> delta(net.layers.size());
    const double inv_n = 1.0 / static_cast<double>(X.size());

    for (std::size_t s = 0; s < X.size(); ++s) {
        forward_cached(net, X[s], acts);
        const double err = acts.back()[0] - y[s];
        result.loss += err * err;

        // Output layer delta: d(err^2)/d(z_out) = 2 * err (linear output).
        delta.back().assign(1, 2.0 * err);
        for (std::size_t l = net.layers.size() - 1; l-- > 0;) {
            const auto& next = net.layers[l + 1];
            auto& d = delta[l];
            d.assign(static_cast<std::size_t>(net.layers[l].out), 0.0);
            for (int i = 0; i < next.in; ++i) {
                double acc = 0.0;
                for (int o = 0; o < next.out; ++o)
                    acc += next.w[static_cast<std::size_t>(o) * next.in + i] * delta[l + 1][o];
                // ReLU derivative via the cached activation.
                d[i] = acts[l + 1][i] > 0.0 ? acc : 0.0;
            }
        }

        std::size_t offset = 0;
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            const auto& layer = net.layers[l];
            double* gw = &result.grad[offset];
            for (int o = 0; o < layer.out; ++o)
                for (int i = 0; i < layer.in; ++i)
                    gw[static_cast<std::size_t>(o) * layer.in + i] +=
                        inv_n * delta[l][o] * acts[l][i];
            offset += layer.w.size();
            double* gb = &result.grad[offset];
            for (int o = 0; o < layer.out; ++o) gb[o] += inv_n * delta[l][o];
            offset += layer.b.size();
        }
    }
    result.loss *= inv_n;
    return result;
}

std::vector<double> flatten_params(const Mlp& net) {
    std::vector<double> flat;
    for (const auto& l : net.layers) {
        flat.insert(flat.end(), l.w.begin(), l.w.end());
        flat.insert(flat.end(), l.b.begin(), l.b.end());
    }
    return flat;
}

void unflatten_params(Mlp& net, std::span<const double> flat) {
    std::size_t offset = 0;
    for (auto& l : net.layers) {
        for (auto& w : l.w) w = flat[offset++];
        for (auto& b : l.b) b = flat[offset++];
    }
    if (offset != flat.size()) throw ParamError("flat parameter size mismatch");
}

void AdamState::update(std::span<double> params, std::span<const double> grad,
                       double lr) {
    ++step;
    const double bc1 = 1.0 - std::pow(beta1, step);
    const double bc2 = 1.0 - std::pow(beta2, step);
    for (std::size_t i = 0; i < params.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + epsilon);
    }
}

std::vector<double> train_full_batch(Mlp& net, const std::vector<std::vector<double>>& X,
                                     std::span<const double> y, double learning_rate,
                                     int epochs) {
    if (epochs < 1) throw ParamError("epochs must be >= 1");
    std::vector<double> params = flatten_params(net);
    AdamState adam(params.size());
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(epochs));
    for (int epoch = 0; epoch < epochs; ++epoch) {
        const LossGrad lg = mse_gradient(net, X, y);
        if (!std::isfinite(lg.loss))
            throw TrainingError("training diverged (non-finite loss) at epoch " +
                                    std::to_string(epoch),
                                epoch);
        trace.push_back(lg.loss);
        adam.update(params, lg.grad, learning_rate);
        unflatten_params(net, params);
    }
    return trace;
}

}  // namespace perfsage::models
