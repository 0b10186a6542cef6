#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "perfsage/datagen.hpp"
#include "perfsage/features.hpp"
#include "perfsage/forest.hpp"
#include "perfsage/mlp.hpp"

namespace perfsage::models {

/// The five predictor families: the complexity-augmented net, the plain net,
/// and the three regression baselines (complexity-only linear, augmented
/// linear, augmented random forest).
enum class ModelFamily { NnC, Nn, Const, LrC, NlrC };

std::string to_string(ModelFamily family);
ModelFamily family_from_string(const std::string& name);

/// Does this family consume the complexity count c?
bool family_augmented(ModelFamily family);

struct ModelConfig {
    ModelFamily family = ModelFamily::NnC;
    std::vector<int> hidden_widths = {8};
    double learning_rate = 1e-3;  // one of 1e-2, 1e-3, 1e-4
    int epochs = 5000;
    std::uint64_t seed = 0;
    bool unconstrained = false;
    bool log_target = false;  // selection models train on log runtimes
    int forest_trees = 100;
    int forest_depth = 12;

    /// Prediction nets have one hidden layer, selection nets two; the
    /// lightweight budget is 75 parameters.
    void validate(int input_dim) const;
};

/// Kind-tuned defaults. Selection models (blur) get two hidden layers; all
/// lightweight defaults stay within the 75-parameter budget. Unconstrained
/// mode widens hidden layers 8x.
ModelConfig default_config(kernels::KernelKind kind, ModelFamily family,
                           bool unconstrained = false);

constexpr int kLightweightParamBudget = 75;

/// (in+1)*out summed over layers for dims {inputs, hidden..., 1}.
int param_count_for(int input_dim, const std::vector<int>& hidden_widths);

/// Per-feature and target min-max statistics, taken from training data only.
/// With log_target set, targets are min-max scaled in log space (t_min/t_max
/// hold log seconds): selection models need relative resolution across
/// schedules whose runtimes span orders of magnitude.
struct NormStats {
    std::vector<double> f_min, f_max;
    double t_min = 0.0, t_max = 1.0;
    bool log_target = false;

    std::vector<double> normalize(std::span<const double> features) const;
    double normalize_target(double t) const;
    double denormalize_target(double t_scaled) const;

    static NormStats fit(const std::vector<std::vector<double>>& X,
                         std::span<const double> y, bool log_target = false);
};

struct LinearModel {
    std::vector<double> weights;
    double intercept = 0.0;
};

struct TrainedModel {
    ModelConfig config;
    kernels::KernelKind kind = kernels::KernelKind::MM;
    std::vector<std::string> schema;  // feature names; ends with "c" when augmented
    NormStats norm;
    std::variant<Mlp, LinearModel, Forest> payload;
    std::vector<double> loss_trace;  // NN families only
};

/// Assemble the family's model-input vector from a dataset sample
/// (base features, plus c for augmented families; c alone for Const).
std::vector<double> model_features(const datagen::Sample& sample, ModelFamily family);
std::vector<double> model_features(const kernels::InstanceParams& params,
                                   ModelFamily family, bool with_n_thd = true);
std::vector<std::string> model_schema(const std::vector<std::string>& base_names,
                                      ModelFamily family);

/// Full-batch Adam on MSE over min-max-normalized features and targets.
/// Deterministic in config.seed. family must be NnC or Nn.
TrainedModel train_nn(const datagen::Dataset& train, const ModelConfig& config);

/// Least squares t ~ a*c + b on the complexity count alone.
TrainedModel train_const(const datagen::Dataset& train, const ModelConfig& config);
/// Least squares on the full augmented feature vector (ridge 1e-8).
TrainedModel train_lrc(const datagen::Dataset& train, const ModelConfig& config);
/// Random-forest regression on the full augmented feature vector.
TrainedModel train_nlrc(const datagen::Dataset& train, const ModelConfig& config);

/// Dispatch on config.family.
TrainedModel train_model(const datagen::Dataset& train, const ModelConfig& config);

/// Forward/evaluate, de-normalized, clamped to >= 1e-9 seconds. The feature
/// vector must match the model schema.
double predict(const TrainedModel& model, std::span<const double> features);

/// Exact trainable-parameter count; NN families only.
int param_count(const TrainedModel& model);

/// Versioned JSON document; weights round-trip bit-exactly.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

/// Predictions for every sample of a dataset.
std::vector<double> predict_dataset(const TrainedModel& model,
                                    const datagen::Dataset& data);

}  // namespace perfsage::models
