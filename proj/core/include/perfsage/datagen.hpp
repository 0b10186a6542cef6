#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perfsage/kernels.hpp"
#include "perfsage/rng.hpp"
#include "perfsage/variants.hpp"

namespace perfsage::datagen {

/// Legal parameter ranges for random instance generation of one kernel kind.
/// Densities are drawn from the dyadic ladder {1, 1/2, 1/4, ...} truncated
/// at 1/2^floor(log2(rows*cols)); the MV ladder starts at 1/2.
struct ParamSpace {
    kernels::KernelKind kind = kernels::KernelKind::MM;
    std::uint32_t dim_min = 1;
    std::uint32_t dim_max = 1024;
    int max_threads = 1;
    std::vector<std::uint32_t> mc_filter_dims = {3, 5, 7};
    std::vector<std::uint32_t> mp_aux_dims = {2, 3, 4, 5};
    std::vector<std::uint32_t> mp_pool_dims = {1, 2};
    bool density_ladder_includes_one = true;
    std::vector<std::uint32_t> blur_sides = {1024, 2048, 4096, 8192, 16384, 32768};
    kernels::ScheduleSpace schedules = kernels::ScheduleSpace::cpu_default();

    static ParamSpace defaults(kernels::KernelKind kind, int max_threads);
    void validate() const;
};

/// Dyadic density ladder for an operand with `cells` entries.
std::vector<double> density_ladder(std::uint64_t cells, bool include_one);

/// One uniform draw from the space; deterministic in the generator state.
kernels::InstanceParams sample_params(const ParamSpace& space, Rng& rng);
kernels::InstanceParams sample_params(const ParamSpace& space, std::uint64_t seed);

// ---- measurement -----------------------------------------------------------

struct TimingPolicy {
    int warmups = 1;
    int reps = 5;
};

/// Median (average of the middle two for even counts).
double median_of(std::vector<double> values);

/// `warmups` discarded runs, then the median of `reps` timed runs.
double measure_with(const std::function<double()>& timed_run_seconds,
                    const TimingPolicy& policy);

/// Wall-clock measurement of one variant execution; covers kernel execution
/// only, not input generation. Timed regions are serialized process-wide.
/// External variants are asked once over the line protocol instead.
double measure(const kernels::KernelInstance& instance,
               const kernels::VariantDescriptor& variant, int n_thd,
               const TimingPolicy& policy = {});

/// One exchange of the black-box protocol: spawn `command` via /bin/sh,
/// write the features as one space-separated line to its stdin, read one
/// decimal runtime (seconds) from its stdout. Nonzero exit, a non-numeric
/// reply, or a non-positive runtime raises ExternalVariantError.
double run_external_variant(const std::string& command,
                            std::span<const double> features);

// ---- datasets ---------------------------------------------------------------

struct Sample {
    std::vector<double> features;
    std::uint64_t c = 0;
    double runtime_s = 0.0;
    std::string variant_id;

    bool operator==(const Sample&) const = default;
};

struct Dataset {
    kernels::KernelKind kind = kernels::KernelKind::MM;
    std::vector<std::string> feature_names;
    std::vector<Sample> samples;
    // provenance (not serialized to CSV)
    std::uint64_t seed = 0;
    std::string host;

    std::size_t size() const { return samples.size(); }
    std::vector<double> runtimes() const;

    bool same_contents(const Dataset& other) const {
        return kind == other.kind && feature_names == other.feature_names &&
               samples == other.samples;
    }
};

/// Replaces real measurement when set; receives the sampled parameters.
using RuntimeProbe = std::function<double(const kernels::InstanceParams&)>;

struct BuildOptions {
    TimingPolicy policy{};
    RuntimeProbe probe{};
};

/// Sample `count` parameter points, run/ask the variant, assemble a dataset.
/// Deterministic in (space, count, seed) given a probe. A measurement error
/// aborts with BuildAbortError reporting the completed sample count.
Dataset build_dataset(const kernels::VariantDescriptor& variant,
                      const ParamSpace& space, std::size_t count,
                      std::uint64_t seed, const BuildOptions& options = {});

/// Disjoint, exhaustive, seeded-shuffle partition; the train part receives
/// round(train_fraction * size) samples.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed);

/// CSV with header `kernel,variant,<feature names...>,c,runtime_s`, one
/// sample per row, runtimes at 17 significant digits (exact round-trip).
void save_csv(const Dataset& dataset, const std::string& path);
Dataset load_csv(const std::string& path);

}  // namespace perfsage::datagen
