#include "perfsage/datagen.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>

#include "perfsage/errors.hpp"
#include "perfsage/features.hpp"

namespace perfsage::datagen {

using kernels::InstanceParams;
using kernels::KernelKind;

ParamSpace ParamSpace::defaults(KernelKind kind, int max_threads) {
    ParamSpace s;
    s.kind = kind;
    s.max_threads = std::max(1, max_threads);
    if (kind == KernelKind::MV) s.density_ladder_includes_one = false;
    return s;
}

void ParamSpace::validate() const {
    if (dim_min < 1 || dim_max < dim_min)
        throw ParamError("param space needs 1 <= dim_min <= dim_max");
    if (max_threads < 1) throw ParamError("param space needs max_threads >= 1");
    if (kind == KernelKind::MC && mc_filter_dims.empty())
        throw ParamError("MC space needs filter dims");
    if (kind == KernelKind::MP && (mp_aux_dims.empty() || mp_pool_dims.empty()))
        throw ParamError("MP space needs aux and pool dims");
    if (kind == KernelKind::Blur && blur_sides.empty())
        throw ParamError("blur space needs image sides");
}

std::vector<double> density_ladder(std::uint64_t cells, bool include_one) {
    const int depth = std::bit_width(cells) - 1;  // floor(log2(cells))
    std::vector<double> ladder;
    for (int j = include_one ? 0 : 1; j <= depth; ++j)
        ladder.push_back(std::ldexp(1.0, -j));
    if (ladder.empty()) ladder.push_back(1.0);  // 1x1 operands
    return ladder;
}

namespace {

template <typename T>
T pick(const std::vector<T>& v, Rng& rng) {
    return v[rng.bounded(v.size())];
}

double pick_density(std::uint64_t cells, bool include_one, Rng& rng) {
    return pick(density_ladder(cells, include_one), rng);
}

}  // namespace

InstanceParams sample_params(const ParamSpace& space, Rng& rng) {
    space.validate();
    auto dim = [&] {
        return static_cast<std::uint32_t>(rng.uniform_int(space.dim_min, space.dim_max));
    };
    auto dim_at_least = [&](std::uint32_t lo) {
        return static_cast<std::uint32_t>(
            rng.uniform_int(std::max(space.dim_min, lo), std::max<std::uint32_t>(space.dim_max, lo)));
    };
    auto threads = [&] {
        return static_cast<int>(rng.uniform_int(1, space.max_threads));
    };
    switch (space.kind) {
        case KernelKind::MM: {
            const std::uint32_t m = dim(), n = dim(), k = dim();
            const double d1 = pick_density(std::uint64_t(m) * n,
                                           space.density_ladder_includes_one, rng);
            const double d2 = pick_density(std::uint64_t(n) * k,
                                           space.density_ladder_includes_one, rng);
            return InstanceParams::mm(m, n, k, d1, d2, threads());
        }
        case KernelKind::MV: {
            const std::uint32_t m = dim(), n = dim();
            const double d = pick_density(std::uint64_t(m) * n,
                                          space.density_ladder_includes_one, rng);
            return InstanceParams::mv(m, n, d, threads());
        }
        case KernelKind::MC: {
            const std::uint32_t r = pick(space.mc_filter_dims, rng);
            const std::uint32_t m = dim_at_least(r), n = dim_at_least(r);
            const double d = pick_density(std::uint64_t(m) * n,
                                          space.density_ladder_includes_one, rng);
            return InstanceParams::mc(m, n, r, d, threads());
        }
        case KernelKind::MP: {
            const std::uint32_t r = pick(space.mp_aux_dims, rng);
            const std::uint32_t s = pick(space.mp_pool_dims, rng);
            const std::uint32_t m = dim_at_least(r), n = dim_at_least(r);
            const double d = pick_density(std::uint64_t(m) * n,
                                          space.density_ladder_includes_one, rng);
            return InstanceParams::mp(m, n, r, s, d, threads());
        }
        case KernelKind::Blur: {
            const std::uint32_t n = pick(space.blur_sides, rng);
            const auto lattice = space.schedules.enumerate_all();
            if (lattice.empty()) throw ParamError("empty schedule space");
            return InstanceParams::blur(n, lattice[rng.bounded(lattice.size())]);
        }
    }
    throw ParamError("unreachable kernel kind");
}

InstanceParams sample_params(const ParamSpace& space, std::uint64_t seed) {
    Rng rng(seed);
    return sample_params(space, rng);
}

// ---- measurement -----------------------------------------------------------

double median_of(std::vector<double> values) {
    if (values.empty()) throw DomainError("median of empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double measure_with(const std::function<double()>& timed_run_seconds,
                    const TimingPolicy& policy) {
    if (policy.reps < 1) throw ParamError("timing policy needs reps >= 1");
    if (policy.warmups < 0) throw ParamError("timing policy needs warmups >= 0");
    for (int i = 0; i < policy.warmups; ++i) (void)timed_run_seconds();
    std::vector<double> times;
    times.reserve(policy.reps);
    for (int i = 0; i < policy.reps; ++i) times.push_back(timed_run_seconds());
    return median_of(std::move(times));
}

namespace {

// Serial-timing contract: one timed region at a time, process-wide.
std::mutex& timing_mutex() {
    static std::mutex m;
    return m;
}

volatile double g_sink = 0.0;

}  // namespace

double measure(const kernels::KernelInstance& instance,
               const kernels::VariantDescriptor& variant, int n_thd,
               const TimingPolicy& policy) {
    if (variant.is_external()) {
        const auto feats = models::featurize(instance.params, false, variant.takes_n_thd());
        return run_external_variant(variant.launch_command, feats);
    }
    std::lock_guard<std::mutex> lock(timing_mutex());
    auto timed = [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const kernels::Matrix out = kernels::run_variant(instance, variant, n_thd);
        const auto t1 = std::chrono::steady_clock::now();
        g_sink = g_sink + (out.data.empty() ? 0.0 : out.data[0]);
        return std::chrono::duration<double>(t1 - t0).count();
    };
    return measure_with(timed, policy);
}

// ---- datasets ---------------------------------------------------------------

std::vector<double> Dataset::runtimes() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.runtime_s);
    return out;
}

Dataset build_dataset(const kernels::VariantDescriptor& variant,
                      const ParamSpace& space, std::size_t count,
                      std::uint64_t seed, const BuildOptions& options) {
    if (count < 2) throw ParamError("build_dataset needs count >= 2");
    if (variant.kind != space.kind)
        throw ParamError("variant kernel does not match the parameter space");
    space.validate();

    Dataset ds;
    ds.kind = space.kind;
    ds.feature_names = models::feature_names(space.kind, variant.takes_n_thd());
    ds.seed = seed;
    ds.host = variant.hardware_label;
    ds.samples.reserve(count);

    Rng rng(derive_seed(seed, 0));
    for (std::size_t i = 0; i < count; ++i) {
        try {
            InstanceParams params = sample_params(space, rng);
            if (variant.threading == kernels::Threading::FixedSingle) params.n_thd = 1;
            if (space.kind == KernelKind::Blur) params.n_thd = space.max_threads;

            Sample sample;
            sample.features = models::featurize(params, false, variant.takes_n_thd());
            sample.c = kernels::complexity(params);
            sample.variant_id = variant.variant_id;
            if (options.probe) {
                sample.runtime_s = options.probe(params);
            } else if (variant.is_external()) {
                sample.runtime_s =
                    run_external_variant(variant.launch_command, sample.features);
            } else {
                const auto instance = kernels::make_instance(params, derive_seed(seed, i + 1));
                sample.runtime_s = measure(instance, variant, params.n_thd, options.policy);
            }
            if (!(sample.runtime_s > 0.0))
                throw DomainError("measured runtime must be > 0");
            ds.samples.push_back(std::move(sample));
        } catch (const Error& e) {
            throw BuildAbortError("dataset build aborted after " +
                                      std::to_string(ds.samples.size()) + "/" +
                                      std::to_string(count) + " samples: " + e.what(),
                                  ds.samples.size());
        }
    }
    return ds;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ParamError("train fraction must lie in (0,1)");
    const std::size_t n = dataset.samples.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, 0x517ULL));
    rng.partial_shuffle(order, n);
    const auto train_count = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(n)));
    auto part = [&](std::size_t begin, std::size_t end) {
        Dataset d;
        d.kind = dataset.kind;
        d.feature_names = dataset.feature_names;
        d.seed = dataset.seed;
        d.host = dataset.host;
        d.samples.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i)
            d.samples.push_back(dataset.samples[order[i]]);
        return d;
    };
    return {part(0, train_count), part(train_count, n)};
}

}  // namespace perfsage::datagen
