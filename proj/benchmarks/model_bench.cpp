#include <benchmark/benchmark.h>

#include "perfsage/datagen.hpp"
#include "perfsage/models.hpp"

using namespace perfsage;

namespace {

// Inference cost is what matters at compile/run time: the tiny augmented
// net should be orders of magnitude cheaper to query than the forest.
datagen::Dataset training_data() {
    auto space = datagen::ParamSpace::defaults(kernels::KernelKind::MM, 4);
    const auto reg = kernels::VariantRegistry::builtin();
    datagen::BuildOptions opts;
    opts.probe = [](const kernels::InstanceParams& p) {
        return 1e-9 * double(kernels::complexity(p)) + 1e-7;
    };
    return datagen::build_dataset(reg.get(kernels::KernelKind::MM, "dense_threaded"),
                                  space, 250, 7, opts);
}

const datagen::Dataset& data() {
    static const datagen::Dataset ds = training_data();
    return ds;
}

void BM_PredictNnC(benchmark::State& state) {
    auto cfg = models::default_config(kernels::KernelKind::MM, models::ModelFamily::NnC);
    cfg.epochs = 500;
    const auto model = models::train_nn(data(), cfg);
    const auto f = models::model_features(data().samples[0], models::ModelFamily::NnC);
    for (auto _ : state) {
        double p = models::predict(model, f);
        benchmark::DoNotOptimize(p);
    }
}

void BM_PredictNlrC(benchmark::State& state) {
    models::ModelConfig cfg;
    cfg.family = models::ModelFamily::NlrC;
    const auto model = models::train_nlrc(data(), cfg);
    const auto f = models::model_features(data().samples[0], models::ModelFamily::NlrC);
    for (auto _ : state) {
        double p = models::predict(model, f);
        benchmark::DoNotOptimize(p);
    }
}

void BM_TrainEpochs(benchmark::State& state) {
    auto cfg = models::default_config(kernels::KernelKind::MM, models::ModelFamily::NnC);
    cfg.epochs = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto model = models::train_nn(data(), cfg);
        benchmark::DoNotOptimize(model.loss_trace.back());
    }
}

}  // namespace

BENCHMARK(BM_PredictNnC);
BENCHMARK(BM_PredictNlrC);
BENCHMARK(BM_TrainEpochs)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
