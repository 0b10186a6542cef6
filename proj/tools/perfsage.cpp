// perfsage: benchmark compute kernels, train lightweight runtime predictors,
// compare the five model families, and pick fast blur schedules.

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "perfsage/datagen.hpp"
#include "perfsage/errors.hpp"
#include "perfsage/eval.hpp"
#include "perfsage/hostinfo.hpp"
#include "perfsage/models.hpp"
#include "perfsage/selector.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace perfsage;

namespace {

// ---- manifest ---------------------------------------------------------------

std::int64_t manifest_timestamp() {
    if (const char* env = std::getenv("PERFSAGE_TIMESTAMP")) return std::atoll(env);
    return static_cast<std::int64_t>(std::time(nullptr));
}

void record_run(const fs::path& out_dir, const std::string& command,
                const std::vector<std::string>& argv, std::uint64_t seed,
                const std::vector<std::string>& inputs,
                const std::vector<std::string>& outputs) {
    fs::create_directories(out_dir);
    const fs::path path = out_dir / "manifest.json";
    json manifest;
    if (fs::exists(path)) {
        std::ifstream is(path);
        try {
            is >> manifest;
        } catch (const json::exception&) {
            throw LoadError("existing manifest '" + path.string() + "' is not valid JSON");
        }
    }
    if (!manifest.contains("host")) manifest["host"] = host_label();
    json run;
    run["command"] = command;
    run["argv"] = argv;
    run["seed"] = seed;
    run["timestamp"] = manifest_timestamp();
    run["inputs"] = inputs;
    run["outputs"] = outputs;
    manifest["runs"].push_back(std::move(run));
    std::ofstream os(path, std::ios::binary);
    os << manifest.dump(2) << '\n';
}

// ---- shared helpers -----------------------------------------------------------

/// Deterministic stand-in for wall-clock measurement; used by --mock-timer.
datagen::RuntimeProbe mock_probe() {
    return [](const kernels::InstanceParams& params) {
        const auto feats = models::featurize(params, true);
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (double f : feats) {
            std::uint64_t bits;
            std::memcpy(&bits, &f, sizeof bits);
            h ^= bits;
            splitmix64(h);
        }
        const double jitter = 0.5 + double(splitmix64(h) >> 11) * 0x1.0p-53;
        return 1e-9 * double(kernels::complexity(params)) * jitter + 1e-6;
    };
}

kernels::ScheduleCandidate parse_schedule(const std::string& text) {
    kernels::ScheduleCandidate c;
    unsigned s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%u,%u,%u,%u%c", &s1, &s2, &s3, &s4, &extra) != 4)
        throw ParamError("schedule must be four comma-separated factors, e.g. 8,256,128,8");
    c.s1 = s1; c.s2 = s2; c.s3 = s3; c.s4 = s4;
    if (!c.is_pow2()) throw ParamError("schedule factors must be positive powers of two");
    return c;
}

struct EvalRow {
    eval::EvalReport report;
};

eval::EvalReport evaluate_model_on(const models::TrainedModel& model,
                                   const datagen::Dataset& data, double drop) {
    const auto pred = models::predict_dataset(model, data);
    const auto truth = data.runtimes();
    auto rep = eval::make_report(truth, pred, drop);
    rep.kernel = kernels::to_string(data.kind);
    rep.variant = data.samples.empty() ? "" : data.samples.front().variant_id;
    rep.model_family = models::to_string(model.config.family);
    return rep;
}

models::ModelConfig make_config(kernels::KernelKind kind, models::ModelFamily family,
                                bool unconstrained, std::uint64_t seed,
                                std::optional<int> epochs, std::optional<double> lr,
                                const std::vector<int>& hidden) {
    auto cfg = models::default_config(kind, family, unconstrained);
    cfg.family = family;
    cfg.seed = seed;
    if (epochs) cfg.epochs = *epochs;
    if (lr) cfg.learning_rate = *lr;
    if (!hidden.empty()) cfg.hidden_widths = hidden;
    return cfg;
}

// ---- subcommand state ----------------------------------------------------------

struct GenArgs {
    std::string kernel = "mm";
    std::string variant = "dense_threaded";
    std::size_t count = 500;
    std::uint64_t seed = 1;
    std::string out = "perfsage_out";
    std::uint32_t dim_max = 1024;
    int max_threads = 0;  // 0 => host default
    int warmups = 1;
    int reps = 5;
    std::vector<std::uint32_t> blur_sides;
    std::string blur_space = "cpu";
    std::string external_cmd;
    std::string external_id = "external";
    bool gpu_class = false;
    bool mock_timer = false;
};

struct TrainArgs {
    std::string data;
    std::string family = "nnc";
    double train_frac = 0.5;
    std::uint64_t seed = 0;
    std::optional<int> epochs;
    std::optional<double> lr;
    std::vector<int> hidden;
    bool unconstrained = false;
    std::string out = "perfsage_out";
};

struct EvalArgs {
    std::vector<std::string> model_paths;
    std::string data;
    double drop = 0.3;
    std::string out = "perfsage_out";
    std::string group_by;
};

struct SelectArgs {
    std::uint32_t n = 1024;
    std::size_t candidates = 200;
    std::uint64_t seed = 0;
    std::string default_schedule = "8,256,128,8";
    std::string family = "nnc";
    std::optional<int> epochs;
    std::optional<double> lr;
    std::string data;
    std::string out = "perfsage_out";
    int warmups = 1;
    int reps = 5;
    int max_threads = 0;
    bool mock_timer = false;
};

struct CompareArgs {
    std::string data;
    double train_frac = 0.5;
    std::uint64_t seed = 0;
    std::optional<int> epochs;
    double drop = 0.3;
    bool unconstrained = false;
    std::string out = "perfsage_out";
};

struct BenchArgs {
    std::string kernel = "mm";
    std::string variant = "dense_threaded";
    std::uint32_t m = 256, n = 256, k = 256, r = 3, s = 2;
    double d = 1.0, d2 = 1.0;
    int n_thd = 0;
    int warmups = 1;
    int reps = 5;
    std::uint64_t seed = 1;
    std::string schedule = "8,256,128,8";
    bool list = false;
};

// ---- subcommand bodies -----------------------------------------------------------

int cmd_gen(const GenArgs& a, const std::vector<std::string>& argv) {
    const auto kind = kernels::kind_from_string(a.kernel);
    const int threads = a.max_threads > 0 ? a.max_threads : max_threads();
    auto space = datagen::ParamSpace::defaults(kind, threads);
    space.dim_max = a.dim_max;
    if (kind == kernels::KernelKind::Blur) {
        space.blur_sides = a.blur_sides.empty() ? std::vector<std::uint32_t>{1024}
                                                : a.blur_sides;
        space.schedules = a.blur_space == "gpu" ? kernels::ScheduleSpace::gpu_style()
                                                : kernels::ScheduleSpace::cpu_default();
    }

    auto registry = kernels::VariantRegistry::builtin();
    std::string variant_id = a.variant;
    if (!a.external_cmd.empty()) {
        kernels::VariantDescriptor ext;
        ext.variant_id = a.external_id;
        ext.kind = kind;
        ext.impl = kernels::ImplKind::External;
        ext.hw_class = a.gpu_class ? kernels::HardwareClass::Gpu
                                   : kernels::HardwareClass::Cpu;
        ext.hardware_label = host_label();
        ext.launch_command = a.external_cmd;
        registry.add(ext);
        variant_id = a.external_id;
    } else if (kind == kernels::KernelKind::Blur && a.variant == "dense_threaded") {
        variant_id = "tiled";  // the only native blur variant
    }
    const auto& variant = registry.get(kind, variant_id);

    datagen::BuildOptions opts;
    opts.policy = {a.warmups, a.reps};
    if (a.mock_timer) opts.probe = mock_probe();

    const auto dataset = datagen::build_dataset(variant, space, a.count, a.seed, opts);
    fs::create_directories(a.out);
    const fs::path csv = fs::path(a.out) /
                         ("dataset_" + a.kernel + "_" + variant_id + ".csv");
    datagen::save_csv(dataset, csv.string());
    record_run(a.out, "gen", argv, a.seed, {}, {csv.string()});
    std::cout << "wrote " << dataset.size() << " samples to " << csv.string() << "\n";
    return 0;
}

int cmd_train(const TrainArgs& a, const std::vector<std::string>& argv) {
    const auto family = models::family_from_string(a.family);
    const auto dataset = datagen::load_csv(a.data);
    const auto [train_set, test_set] =
        datagen::split(dataset, a.train_frac, derive_seed(a.seed, 0x5b11));
    const auto cfg = make_config(dataset.kind, family, a.unconstrained, a.seed,
                                 a.epochs, a.lr, a.hidden);
    const auto model = models::train_model(train_set, cfg);

    fs::create_directories(a.out);
    const fs::path model_path = fs::path(a.out) / ("model_" + a.family + ".json");
    const fs::path train_csv = fs::path(a.out) / "train.csv";
    const fs::path test_csv = fs::path(a.out) / "test.csv";
    models::save_model(model, model_path.string());
    datagen::save_csv(train_set, train_csv.string());
    datagen::save_csv(test_set, test_csv.string());
    record_run(a.out, "train", argv, a.seed, {a.data},
               {model_path.string(), train_csv.string(), test_csv.string()});

    std::cout << "trained " << a.family << " on " << train_set.size() << " samples";
    if (std::holds_alternative<models::Mlp>(model.payload)) {
        std::cout << " (" << models::param_count(model) << " parameters, final loss "
                  << model.loss_trace.back() << ")";
    }
    std::cout << "\nmodel: " << model_path.string() << "\n";
    return 0;
}

int cmd_eval(const EvalArgs& a, const std::vector<std::string>& argv) {
    const auto data = datagen::load_csv(a.data);
    if (data.samples.empty()) throw DomainError("evaluation dataset is empty");
    std::vector<eval::EvalReport> reports;
    for (const auto& path : a.model_paths) {
        const auto model = models::load_model(path);
        reports.push_back(evaluate_model_on(model, data, a.drop));
    }
    fs::create_directories(a.out);
    const fs::path csv = fs::path(a.out) / "eval.csv";
    {
        std::ofstream os(csv, std::ios::binary);
        eval::write_reports_csv(os, reports);
    }
    eval::print_reports(std::cout, reports);
    if (!a.group_by.empty()) {
        eval::GroupBy g = eval::GroupBy::Kernel;
        if (a.group_by == "variant") g = eval::GroupBy::Variant;
        else if (a.group_by == "family") g = eval::GroupBy::ModelFamily;
        else if (a.group_by != "kernel")
            throw ParamError("--group-by must be kernel, variant, or family");
        eval::print_aggregate(std::cout, eval::aggregate(reports, g));
    }
    record_run(a.out, "eval", argv, 0, a.model_paths, {csv.string()});
    return 0;
}

int cmd_select(const SelectArgs& a, const std::vector<std::string>& argv) {
    const auto default_sched = parse_schedule(a.default_schedule);
    const int threads = a.max_threads > 0 ? a.max_threads : max_threads();
    const auto space = kernels::ScheduleSpace::cpu_default();
    auto candidates = selector::enumerate_candidates(space, a.candidates, a.seed);

    const auto registry = kernels::VariantRegistry::builtin();
    const auto& tiled = registry.get(kernels::KernelKind::Blur, "tiled");
    const datagen::TimingPolicy policy{a.warmups, a.reps};
    const auto probe = a.mock_timer ? mock_probe() : datagen::RuntimeProbe{};

    datagen::Dataset measured;
    measured.kind = kernels::KernelKind::Blur;
    measured.feature_names = models::feature_names(kernels::KernelKind::Blur, false);
    measured.seed = a.seed;
    measured.host = host_label();

    selector::MeasuredCandidates table;
    if (!a.data.empty()) {
        measured = datagen::load_csv(a.data);
        if (measured.kind != kernels::KernelKind::Blur)
            throw ParamError("--data must hold blur schedule samples");
        candidates.clear();
        for (const auto& s : measured.samples) {
            if (static_cast<std::uint32_t>(s.features[0]) != a.n) continue;
            kernels::ScheduleCandidate c{
                static_cast<std::uint32_t>(s.features[1]),
                static_cast<std::uint32_t>(s.features[2]),
                static_cast<std::uint32_t>(s.features[3]),
                static_cast<std::uint32_t>(s.features[4])};
            candidates.push_back(c);
            table.emplace_back(c, s.runtime_s);
        }
        if (candidates.empty())
            throw ParamError("no samples with n=" + std::to_string(a.n) + " in " + a.data);
    } else {
        // One shared image; only the schedule varies between measurements.
        auto instance = kernels::make_instance(
            kernels::InstanceParams::blur(a.n, default_sched), derive_seed(a.seed, 0x1417));
        instance.params.n_thd = threads;
        auto measure_schedule = [&](const kernels::ScheduleCandidate& c) {
            instance.params.schedule = c;
            if (probe) return probe(instance.params);
            return datagen::measure(instance, tiled, threads, policy);
        };
        bool default_present = false;
        for (const auto& c : candidates) default_present |= (c == default_sched);
        if (!default_present) candidates.push_back(default_sched);
        for (const auto& c : candidates) {
            const double runtime = measure_schedule(c);
            table.emplace_back(c, runtime);
            instance.params.schedule = c;
            datagen::Sample s;
            s.features = models::featurize(instance.params, false, false);
            s.c = kernels::complexity(instance.params);
            s.runtime_s = runtime;
            s.variant_id = tiled.variant_id;
            measured.samples.push_back(std::move(s));
        }
    }

    const auto family = models::family_from_string(a.family);
    auto cfg = make_config(kernels::KernelKind::Blur, family, false, a.seed, a.epochs,
                           a.lr, {});
    const auto model = models::train_model(measured, cfg);

    const auto chosen = selector::select(model, a.n, candidates);
    const auto chosen_params = kernels::InstanceParams::blur(a.n, chosen);
    const double predicted = models::predict(
        model, models::model_features(chosen_params, family));
    const auto report =
        selector::evaluate_selection(chosen, table, default_sched, std::nullopt, predicted);

    fs::create_directories(a.out);
    const fs::path json_path = fs::path(a.out) / "selection.json";
    {
        std::ofstream os(json_path, std::ios::binary);
        os << report.to_json() << '\n';
    }
    const fs::path csv_path = fs::path(a.out) / "schedules.csv";
    datagen::save_csv(measured, csv_path.string());
    record_run(a.out, "select", argv, a.seed, a.data.empty() ? std::vector<std::string>{}
                                                             : std::vector<std::string>{a.data},
               {json_path.string(), csv_path.string()});
    std::cout << report.summary() << "\n";
    return 0;
}

int cmd_compare(const CompareArgs& a, const std::vector<std::string>& argv) {
    const auto dataset = datagen::load_csv(a.data);
    const auto [train_set, test_set] =
        datagen::split(dataset, a.train_frac, derive_seed(a.seed, 0x5b11));

    std::vector<eval::EvalReport> reports;
    for (auto family : {models::ModelFamily::NnC, models::ModelFamily::Nn,
                        models::ModelFamily::Const, models::ModelFamily::LrC,
                        models::ModelFamily::NlrC}) {
        const auto cfg = make_config(dataset.kind, family, a.unconstrained, a.seed,
                                     a.epochs, {}, {});
        const auto model = models::train_model(train_set, cfg);
        reports.push_back(evaluate_model_on(model, test_set, a.drop));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < reports.size(); ++i)
        if (reports[i].mape_thresholded < reports[best].mape_thresholded) best = i;

    fs::create_directories(a.out);
    const fs::path csv = fs::path(a.out) / "compare.csv";
    {
        std::ofstream os(csv, std::ios::binary);
        eval::write_reports_csv(os, reports);
    }
    eval::print_reports(std::cout, reports);
    std::cout << "best thresholded MAPE: " << reports[best].model_family << " ("
              << reports[best].mape_thresholded << "%)\n";
    record_run(a.out, "compare", argv, a.seed, {a.data}, {csv.string()});
    return 0;
}

int cmd_bench(const BenchArgs& a, const std::vector<std::string>& argv) {
    const auto registry = kernels::VariantRegistry::builtin();
    if (a.list) {
        std::cout << "kernel  variant          storage  threading  impl\n";
        for (const auto& v : registry.all()) {
            std::cout << std::left << std::setw(8) << kernels::to_string(v.kind)
                      << std::setw(17) << v.variant_id << std::setw(9)
                      << (v.storage == kernels::Storage::Sparse ? "sparse" : "dense")
                      << std::setw(11)
                      << (v.threading == kernels::Threading::FixedSingle ? "single"
                                                                         : "threaded")
                      << (v.impl == kernels::ImplKind::Tiled ? "tiled" : "naive") << "\n";
        }
        return 0;
    }
    const auto kind = kernels::kind_from_string(a.kernel);
    const int threads = a.n_thd > 0 ? a.n_thd : max_threads();
    kernels::InstanceParams params;
    switch (kind) {
        case kernels::KernelKind::MM:
            params = kernels::InstanceParams::mm(a.m, a.n, a.k, a.d, a.d2, threads);
            break;
        case kernels::KernelKind::MV:
            params = kernels::InstanceParams::mv(a.m, a.n, a.d, threads);
            break;
        case kernels::KernelKind::MC:
            params = kernels::InstanceParams::mc(a.m, a.n, a.r, a.d, threads);
            break;
        case kernels::KernelKind::MP:
            params = kernels::InstanceParams::mp(a.m, a.n, a.r, a.s, a.d, threads);
            break;
        case kernels::KernelKind::Blur:
            params = kernels::InstanceParams::blur(a.n, parse_schedule(a.schedule));
            params.n_thd = threads;
            break;
    }
    const std::string variant_id =
        (kind == kernels::KernelKind::Blur && a.variant == "dense_threaded") ? "tiled"
                                                                             : a.variant;
    const auto& variant = registry.get(kind, variant_id);
    const auto instance = kernels::make_instance(params, a.seed);
    const double median =
        datagen::measure(instance, variant, params.n_thd, {a.warmups, a.reps});
    std::cout << kernels::to_string(kind) << "/" << variant_id << " c="
              << kernels::complexity(params) << " n_thd=" << params.n_thd
              << " median_s=" << median << "\n";
    (void)argv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernel runtime prediction and variant selection toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a TOML/INI file");
    std::vector<std::string> raw_args(argv + 1, argv + argc);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "benchmark a kernel variant into a dataset CSV");
    gen_cmd->add_option("--kernel", gen.kernel, "mm|mv|mc|mp|blur")->required();
    gen_cmd->add_option("--variant", gen.variant, "variant id (see bench --list)");
    gen_cmd->add_option("--count", gen.count, "number of samples");
    gen_cmd->add_option("--seed", gen.seed, "root seed");
    gen_cmd->add_option("--out", gen.out, "output directory");
    gen_cmd->add_option("--dim-max", gen.dim_max, "upper bound for matrix dims");
    gen_cmd->add_option("--max-threads", gen.max_threads, "cap sampled n_thd (0 = host)");
    gen_cmd->add_option("--warmups", gen.warmups, "discarded runs per measurement");
    gen_cmd->add_option("--reps", gen.reps, "timed runs per measurement (median)");
    gen_cmd->add_option("--blur-n", gen.blur_sides, "blur image sides (repeatable)");
    gen_cmd->add_option("--blur-space", gen.blur_space, "blur schedule lattice: cpu|gpu");
    gen_cmd->add_option("--external-cmd", gen.external_cmd,
                        "shell command implementing the black-box variant protocol");
    gen_cmd->add_option("--variant-id", gen.external_id, "id for the external variant");
    gen_cmd->add_flag("--gpu-class", gen.gpu_class,
                      "external variant is GPU-class (omit n_thd feature)");
    gen_cmd->add_flag("--mock-timer", gen.mock_timer,
                      "deterministic fake runtimes (for reproducibility tests)");

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "split a dataset and train one model family");
    train_cmd->add_option("--data", train.data, "dataset CSV")->required();
    train_cmd->add_option("--family", train.family, "nnc|nn|const|lrc|nlrc");
    train_cmd->add_option("--train-frac", train.train_frac, "train fraction of the split");
    train_cmd->add_option("--seed", train.seed, "split + init seed");
    train_cmd->add_option("--epochs", train.epochs, "training epochs");
    train_cmd->add_option("--lr", train.lr, "learning rate (1e-2|1e-3|1e-4)");
    train_cmd->add_option("--hidden", train.hidden, "hidden layer widths");
    train_cmd->add_flag("--unconstrained", train.unconstrained,
                        "lift the 75-parameter budget (8x wider hidden layers)");
    train_cmd->add_option("--out", train.out, "output directory");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate trained models on a dataset");
    eval_cmd->add_option("--model", eval_args.model_paths, "model file (repeatable)")
        ->required();
    eval_cmd->add_option("--data", eval_args.data, "dataset CSV (e.g. test.csv)")->required();
    eval_cmd->add_option("--drop", eval_args.drop, "low-runtime drop fraction");
    eval_cmd->add_option("--group-by", eval_args.group_by,
                         "also print aggregate means: kernel|variant|family");
    eval_cmd->add_option("--out", eval_args.out, "output directory");

    SelectArgs sel;
    auto* sel_cmd = app.add_subcommand("select", "pick the fastest blur schedule by prediction");
    sel_cmd->add_option("--n", sel.n, "image side");
    sel_cmd->add_option("--candidates", sel.candidates, "candidate schedules to score");
    sel_cmd->add_option("--seed", sel.seed, "candidate sampling / training seed");
    sel_cmd->add_option("--default", sel.default_schedule, "baseline schedule s1,s2,s3,s4");
    sel_cmd->add_option("--family", sel.family, "predictor family");
    sel_cmd->add_option("--epochs", sel.epochs, "training epochs");
    sel_cmd->add_option("--lr", sel.lr, "learning rate");
    sel_cmd->add_option("--data", sel.data, "reuse measured schedules from a CSV");
    sel_cmd->add_option("--warmups", sel.warmups, "discarded runs per measurement");
    sel_cmd->add_option("--reps", sel.reps, "timed runs per measurement");
    sel_cmd->add_option("--max-threads", sel.max_threads, "blur worker threads (0 = host)");
    sel_cmd->add_flag("--mock-timer", sel.mock_timer, "deterministic fake runtimes");
    sel_cmd->add_option("--out", sel.out, "output directory");

    CompareArgs cmp;
    auto* cmp_cmd = app.add_subcommand("compare",
                                       "train and evaluate all five families side by side");
    cmp_cmd->add_option("--data", cmp.data, "dataset CSV")->required();
    cmp_cmd->add_option("--train-frac", cmp.train_frac, "train fraction of the split");
    cmp_cmd->add_option("--seed", cmp.seed, "split + training seed");
    cmp_cmd->add_option("--epochs", cmp.epochs, "training epochs for the NN families");
    cmp_cmd->add_option("--drop", cmp.drop, "low-runtime drop fraction");
    cmp_cmd->add_flag("--unconstrained", cmp.unconstrained, "lift the parameter budget");
    cmp_cmd->add_option("--out", cmp.out, "output directory");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "measure one kernel instance");
    bench_cmd->add_option("--kernel", bench.kernel, "mm|mv|mc|mp|blur");
    bench_cmd->add_option("--variant", bench.variant, "variant id");
    bench_cmd->add_option("--m", bench.m, "rows");
    bench_cmd->add_option("--n", bench.n, "cols / image side");
    bench_cmd->add_option("--k", bench.k, "MM inner dim");
    bench_cmd->add_option("--r", bench.r, "MC filter dim / MP aux dim");
    bench_cmd->add_option("--s", bench.s, "MP pool dim");
    bench_cmd->add_option("--d", bench.d, "density of A");
    bench_cmd->add_option("--d2", bench.d2, "density of B (MM)");
    bench_cmd->add_option("--n-thd", bench.n_thd, "threads (0 = host)");
    bench_cmd->add_option("--warmups", bench.warmups, "discarded runs");
    bench_cmd->add_option("--reps", bench.reps, "timed runs (median)");
    bench_cmd->add_option("--seed", bench.seed, "instance seed");
    bench_cmd->add_option("--schedule", bench.schedule, "blur schedule s1,s2,s3,s4");
    bench_cmd->add_flag("--list", bench.list, "list registered variants and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) return cmd_gen(gen, raw_args);
        if (train_cmd->parsed()) return cmd_train(train, raw_args);
        if (eval_cmd->parsed()) return cmd_eval(eval_args, raw_args);
        if (sel_cmd->parsed()) return cmd_select(sel, raw_args);
        if (cmp_cmd->parsed()) return cmd_compare(cmp, raw_args);
        if (bench_cmd->parsed()) return cmd_bench(bench, raw_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
