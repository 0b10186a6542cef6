#include "perfsage/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perfsage/errors.hpp"

namespace perfsage::models {

using datagen::Dataset;
using datagen::Sample;
using kernels::KernelKind;

std::string to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::NnC: return "nnc";
        case ModelFamily::Nn: return "nn";
        case ModelFamily::Const: return "const";
        case ModelFamily::LrC: return "lrc";
        case ModelFamily::NlrC: return "nlrc";
    }
    return "?";
}

ModelFamily family_from_string(const std::string& name) {
    if (name == "nnc") return ModelFamily::NnC;
    if (name == "nn") return ModelFamily::Nn;
    if (name == "const") return ModelFamily::Const;
    if (name == "lrc") return ModelFamily::LrC;
    if (name == "nlrc") return ModelFamily::NlrC;
    throw ParamError("unknown model family: '" + name + "'");
}

bool family_augmented(ModelFamily family) { return family != ModelFamily::Nn; }

int param_count_for(int input_dim, const std::vector<int>& hidden_widths) {
    int count = 0;
    int in = input_dim;
    for (int h : hidden_widths) {
        count += (in + 1) * h;
        in = h;
    }
    count += (in + 1) * 1;
    return count;
}

void ModelConfig::validate(int input_dim) const {
    if (family == ModelFamily::NnC || family == ModelFamily::Nn) {
        if (hidden_widths.empty() || hidden_widths.size() > 2)
            throw ParamError("networks use 1 hidden layer (prediction) or 2 (selection)");
        for (int h : hidden_widths)
            if (h < 1) throw ParamError("hidden widths must be >= 1");
        const bool lr_ok = learning_rate == 1e-2 || learning_rate == 1e-3 ||
                           learning_rate == 1e-4;
        if (!lr_ok) throw ParamError("learning rate must be one of 1e-2, 1e-3, 1e-4");
        if (epochs < 1) throw ParamError("epochs must be >= 1");
        if (!unconstrained &&
            param_count_for(input_dim, hidden_widths) > kLightweightParamBudget)
            throw ParamError("lightweight model exceeds the 75-parameter budget");
    }
    if (family == ModelFamily::NlrC && (forest_trees < 1 || forest_depth < 1))
        throw ParamError("forest needs trees >= 1 and depth >= 1");
}

ModelConfig default_config(KernelKind kind, ModelFamily family, bool unconstrained) {
    ModelConfig cfg;
    cfg.family = family;
    cfg.unconstrained = unconstrained;
    // One hidden layer for the prediction kernels, two for the blur
    // selection models; widths chosen to sit just under 75 parameters.
    if (kind == KernelKind::Blur) {
        cfg.hidden_widths = {5, 5};
        cfg.learning_rate = 1e-2;
        cfg.epochs = 20000;
        cfg.log_target = true;
    } else {
        cfg.hidden_widths = {8};
        cfg.learning_rate = 1e-2;
        cfg.epochs = 8000;
    }
    if (unconstrained)
        for (int& h : cfg.hidden_widths) h *= 8;
    return cfg;
}

// ---- normalization ----------------------------------------------------------

NormStats NormStats::fit(const std::vector<std::vector<double>>& X,
                         std::span<const double> y, bool log_target) {
    if (X.empty()) throw ParamError("cannot fit normalization on an empty set");
    const std::size_t p = X[0].size();
    NormStats st;
    st.log_target = log_target;
    st.f_min.assign(p, std::numeric_limits<double>::infinity());
    st.f_max.assign(p, -std::numeric_limits<double>::infinity());
    for (const auto& row : X)
        for (std::size_t j = 0; j < p; ++j) {
            st.f_min[j] = std::min(st.f_min[j], row[j]);
            st.f_max[j] = std::max(st.f_max[j], row[j]);
        }
    double lo = y[0], hi = y[0];
    for (double t : y) {
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (log_target) {
        if (!(lo > 0.0)) throw ParamError("targets must be positive runtimes");
        st.t_min = std::log(lo);
        st.t_max = std::log(hi);
    } else {
        st.t_min = lo;
        st.t_max = hi;
    }
    return st;
}

std::vector<double> NormStats::normalize(std::span<const double> features) const {
    if (features.size() != f_min.size())
        throw SchemaError("feature vector length does not match the model schema");
    std::vector<double> out(features.size());
    for (std::size_t j = 0; j < features.size(); ++j) {
        const double range = f_max[j] - f_min[j];
        out[j] = range > 0.0 ? (features[j] - f_min[j]) / range : 0.0;
    }
    return out;
}

double NormStats::normalize_target(double t) const {
    const double range = t_max - t_min;
    const double v = log_target ? std::log(t) : t;
    return range > 0.0 ? (v - t_min) / range : 0.0;
}

double NormStats::denormalize_target(double t_scaled) const {
    const double range = t_max - t_min;
    const double v = range > 0.0 ? t_min + t_scaled * range : t_min;
    return log_target ? std::exp(v) : v;
}

// ---- feature assembly ---------------------------------------------------------

std::vector<double> model_features(const Sample& sample, ModelFamily family) {
    if (family == ModelFamily::Const) return {static_cast<double>(sample.c)};
    std::vector<double> f = sample.features;
    if (family_augmented(family)) f.push_back(static_cast<double>(sample.c));
    return f;
}

std::vector<double> model_features(const kernels::InstanceParams& params,
                                   ModelFamily family, bool with_n_thd) {
    if (family == ModelFamily::Const)
        return {static_cast<double>(kernels::complexity(params))};
    return featurize(params, family_augmented(family), with_n_thd);
}

std::vector<std::string> model_schema(const std::vector<std::string>& base_names,
                                      ModelFamily family) {
    if (family == ModelFamily::Const) return {"c"};
    std::vector<std::string> names = base_names;
    if (family_augmented(family)) names.emplace_back("c");
    return names;
}

namespace {

struct DesignMatrix {
    std::vector<std::vector<double>> X;
    std::vector<double> y;
};

DesignMatrix assemble(const Dataset& train, ModelFamily family) {
    if (train.samples.size() < 2) throw ParamError("training needs at least 2 samples");
    DesignMatrix d;
    d.X.reserve(train.samples.size());
    d.y.reserve(train.samples.size());
    for (const auto& s : train.samples) {
        d.X.push_back(model_features(s, family));
        d.y.push_back(s.runtime_s);
    }
    return d;
}

/// Solve A x = b in place by Gaussian elimination with partial pivoting;
/// A is n x n row-major (the caller applies any ridge beforehand).
std::vector<double> solve_linear(std::vector<double> a, std::vector<double> b,
                                 std::size_t n) {
    double diag_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        diag_scale = std::max(diag_scale, std::abs(a[i * n + i]));
    const double pivot_floor = std::max(diag_scale, 1.0) * 1e-13;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        if (std::abs(a[pivot * n + col]) < pivot_floor)
            throw FitError("singular design matrix");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[pivot * n + j], a[col * n + j]);
            std::swap(b[pivot], b[col]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row * n + col] * inv;
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a[row * n + j] -= f * a[col * n + j];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= a[i * n + j] * x[j];
        x[i] = acc / a[i * n + i];
    }
    return x;
}

LinearModel fit_least_squares(const std::vector<std::vector<double>>& X,
                              std::span<const double> y, double ridge) {
    const std::size_t p = X[0].size();
    const std::size_t n = p + 1;  // + intercept
    // Equilibrate columns by their max magnitude; raw features span
    // 1..10^9, which would wreck the normal equations otherwise.
    std::vector<double> scale(p, 0.0);
    for (const auto& row : X)
        for (std::size_t j = 0; j < p; ++j)
            scale[j] = std::max(scale[j], std::abs(row[j]));
    for (auto& s : scale)
        if (s == 0.0) s = 1.0;
    std::vector<double> gram(n * n, 0.0);
    std::vector<double> rhs(n, 0.0);
    for (std::size_t s = 0; s < X.size(); ++s) {
        // augmented row: [x_0/s_0 ... x_{p-1}/s_{p-1}, 1]
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = i < p ? X[s][i] / scale[i] : 1.0;
            rhs[i] += xi * y[s];
            for (std::size_t j = i; j < n; ++j) {
                const double xj = j < p ? X[s][j] / scale[j] : 1.0;
                gram[i * n + j] += xi * xj;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) gram[i * n + j] = gram[j * n + i];
    // Plain normal equations when the design has full rank; the ridge (on
    // the equilibrated feature weights, intercept free) rescues singular and
    // near-singular designs such as constant columns.
    std::vector<double> sol;
    try {
        sol = solve_linear(gram, rhs, n);
    } catch (const FitError&) {
        for (std::size_t i = 0; i < p; ++i) gram[i * n + i] += ridge;
        try {
            sol = solve_linear(std::move(gram), std::move(rhs), n);
        } catch (const FitError&) {
            throw FitError("singular design matrix despite ridge");
        }
    }
    LinearModel m;
    m.weights.resize(p);
    for (std::size_t j = 0; j < p; ++j) m.weights[j] = sol[j] / scale[j];
    m.intercept = sol.back();
    return m;
}

TrainedModel base_model(const Dataset& train, const ModelConfig& config) {
    TrainedModel m;
    m.config = config;
    m.kind = train.kind;
    m.schema = model_schema(train.feature_names, config.family);
    return m;
}

constexpr double kRidge = 1e-8;

}  // namespace

TrainedModel train_nn(const Dataset& train, const ModelConfig& config) {
    if (config.family != ModelFamily::NnC && config.family != ModelFamily::Nn)
        throw ParamError("train_nn expects an NN family config");
    auto [X, y] = assemble(train, config.family);
    config.validate(static_cast<int>(X[0].size()));

    TrainedModel model = base_model(train, config);
    model.norm = NormStats::fit(X, y, config.log_target);
    std::vector<std::vector<double>> Xn;
    Xn.reserve(X.size());
    for (const auto& row : X) Xn.push_back(model.norm.normalize(row));
    std::vector<double> yn(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) yn[i] = model.norm.normalize_target(y[i]);

    std::vector<int> dims;
    dims.push_back(static_cast<int>(X[0].size()));
    for (int h : config.hidden_widths) dims.push_back(h);
    dims.push_back(1);

    Rng rng(derive_seed(config.seed, 0xA11CE));
    Mlp net = Mlp::init(dims, rng);
    model.loss_trace = train_full_batch(net, Xn, yn, config.learning_rate, config.epochs);
    model.payload = std::move(net);
    return model;
}

TrainedModel train_const(const Dataset& train, const ModelConfig& config) {
    if (config.family != ModelFamily::Const)
        throw ParamError("train_const expects family const");
    auto [X, y] = assemble(train, config.family);
    TrainedModel model = base_model(train, config);
    model.payload = fit_least_squares(X, y, kRidge);
    return model;
}

TrainedModel train_lrc(const Dataset& train, const ModelConfig& config) {
    if (config.family != ModelFamily::LrC) throw ParamError("train_lrc expects family lrc");
    auto [X, y] = assemble(train, config.family);
    TrainedModel model = base_model(train, config);
    model.payload = fit_least_squares(X, y, kRidge);
    return model;
}

TrainedModel train_nlrc(const Dataset& train, const ModelConfig& config) {
    if (config.family != ModelFamily::NlrC)
        throw ParamError("train_nlrc expects family nlrc");
    auto [X, y] = assemble(train, config.family);
    config.validate(static_cast<int>(X[0].size()));
    TrainedModel model = base_model(train, config);
    ForestParams fp;
    fp.trees = config.forest_trees;
    fp.max_depth = config.forest_depth;
    model.payload = fit_forest(X, y, fp, config.seed);
    return model;
}

TrainedModel train_model(const Dataset& train, const ModelConfig& config) {
    switch (config.family) {
        case ModelFamily::NnC:
        case ModelFamily::Nn: return train_nn(train, config);
        case ModelFamily::Const: return train_const(train, config);
        case ModelFamily::LrC: return train_lrc(train, config);
        case ModelFamily::NlrC: return train_nlrc(train, config);
    }
    throw ParamError("unreachable model family");
}

double predict(const TrainedModel& model, std::span<const double> features) {
    if (features.size() != model.schema.size())
        throw SchemaError("feature vector length " + std::to_string(features.size()) +
                          " does not match model schema of " +
                          std::to_string(model.schema.size()));
    double value = 0.0;
    if (const auto* net = std::get_if<Mlp>(&model.payload)) {
        const auto xn = model.norm.normalize(features);
        value = model.norm.denormalize_target(net->forward(xn));
    } else if (const auto* lin = std::get_if<LinearModel>(&model.payload)) {
        value = lin->intercept;
        for (std::size_t j = 0; j < features.size(); ++j)
            value += lin->weights[j] * features[j];
    } else {
        value = std::get<Forest>(model.payload).predict(features);
    }
    return std::max(value, 1e-9);
}

int param_count(const TrainedModel& model) {
    const auto* net = std::get_if<Mlp>(&model.payload);
    if (net == nullptr)
        throw ParamError("param_count is defined for NN-family models only");
    return net->param_count();
}

std::vector<double> predict_dataset(const TrainedModel& model, const Dataset& data) {
    std::vector<double> out;
    out.reserve(data.samples.size());
    for (const auto& s : data.samples)
        out.push_back(predict(model, model_features(s, model.config.family)));
    return out;
}

}  // namespace perfsage::models
