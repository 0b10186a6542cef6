#include "perfsage/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "perfsage/errors.hpp"
#include "perfsage/rng.hpp"

namespace perfsage::kernels {

std::string to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::MM: return "mm";
        case KernelKind::MV: return "mv";
        case KernelKind::MC: return "mc";
        case KernelKind::MP: return "mp";
        case KernelKind::Blur: return "blur";
    }
    return "?";
}

KernelKind kind_from_string(const std::string& name) {
    if (name == "mm") return KernelKind::MM;
    if (name == "mv") return KernelKind::MV;
    if (name == "mc") return KernelKind::MC;
    if (name == "mp") return KernelKind::MP;
    if (name == "blur") return KernelKind::Blur;
    throw ParamError("unknown kernel kind: '" + name + "'");
}

bool ScheduleCandidate::is_pow2() const {
    auto ok = [](std::uint32_t v) { return v > 0 && std::has_single_bit(v); };
    return ok(s1) && ok(s2) && ok(s3) && ok(s4);
}

std::string ScheduleCandidate::to_string() const {
    std::ostringstream os;
    os << "{" << s1 << "," << s2 << "," << s3 << "," << s4 << "}";
    return os.str();
}

ScheduleSpace ScheduleSpace::cpu_default() { return {}; }

ScheduleSpace ScheduleSpace::gpu_style() {
    ScheduleSpace s;
    s.s1_min = 2; s.s1_max = 16;
    s.s2_min = 1; s.s2_max = 64;
    s.s3_min = 1; s.s3_max = 64;
    s.s4_min = 1; s.s4_max = 1;
    s.chained = false;
    return s;
}

namespace {

std::vector<std::uint32_t> pow2_range(std::uint32_t lo, std::uint32_t hi) {
    std::vector<std::uint32_t> v;
    for (std::uint32_t x = std::bit_ceil(std::max<std::uint32_t>(lo, 1)); x <= hi; x <<= 1)
        v.push_back(x);
    return v;
}

}  // namespace

bool ScheduleSpace::contains(const ScheduleCandidate& c) const {
    if (!c.is_pow2()) return false;
    if (c.s1 < s1_min || c.s1 > s1_max) return false;
    if (c.s2 < s2_min || c.s2 > s2_max) return false;
    if (c.s3 < s3_min || c.s3 > (chained ? std::min(s3_max, c.s2) : s3_max)) return false;
    if (c.s4 < s4_min || c.s4 > (chained ? std::min(s4_max, c.s3) : s4_max)) return false;
    return true;
}

std::vector<ScheduleCandidate> ScheduleSpace::enumerate_all() const {
    std::vector<ScheduleCandidate> out;
    for (std::uint32_t s1 : pow2_range(s1_min, s1_max))
        for (std::uint32_t s2 : pow2_range(s2_min, s2_max))
            for (std::uint32_t s3 :
                 pow2_range(s3_min, chained ? std::min(s3_max, s2) : s3_max))
                for (std::uint32_t s4 :
                     pow2_range(s4_min, chained ? std::min(s4_max, s3) : s4_max))
                    out.push_back({s1, s2, s3, s4});
    return out;
}

std::uint64_t ScheduleSpace::size() const { return enumerate_all().size(); }

InstanceParams InstanceParams::mm(std::uint32_t m, std::uint32_t n, std::uint32_t k,
                                  double d1, double d2, int n_thd) {
    InstanceParams p;
    p.kind = KernelKind::MM;
    p.m = m; p.n = n; p.k = k;
    p.d1 = d1; p.d2 = d2;
    p.n_thd = n_thd;
    return p;
}

InstanceParams InstanceParams::mv(std::uint32_t m, std::uint32_t n, double d,
                                  int n_thd) {
    InstanceParams p;
    p.kind = KernelKind::MV;
    p.m = m; p.n = n;
    p.d = d;
    p.n_thd = n_thd;
    return p;
}

InstanceParams InstanceParams::mc(std::uint32_t m, std::uint32_t n, std::uint32_t r,
                                  double d, int n_thd) {
    InstanceParams p;
    p.kind = KernelKind::MC;
    p.m = m; p.n = n; p.r = r;
    p.d = d;
    p.n_thd = n_thd;
    return p;
}

InstanceParams InstanceParams::mp(std::uint32_t m, std::uint32_t n, std::uint32_t r,
                                  std::uint32_t s, double d, int n_thd) {
    InstanceParams p;
    p.kind = KernelKind::MP;
    p.m = m; p.n = n; p.r = r; p.s = s;
    p.d = d;
    p.n_thd = n_thd;
    return p;
}

InstanceParams InstanceParams::blur(std::uint32_t n, const ScheduleCandidate& sched) {
    InstanceParams p;
    p.kind = KernelKind::Blur;
    p.n = n;
    p.schedule = sched;
    return p;
}

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ParamError(msg);
}

bool density_ok(double d) { return d > 0.0 && d <= 1.0; }

}  // namespace

void InstanceParams::validate() const {
    require(n_thd >= 1, "n_thd must be >= 1");
    switch (kind) {
        case KernelKind::MM:
            require(m >= 1 && n >= 1 && k >= 1, "MM dims must be >= 1");
            require(density_ok(d1) && density_ok(d2), "MM densities must lie in (0,1]");
            require(r == 0 && s == 0 && !schedule, "MM carries no r/s/schedule");
            break;
        case KernelKind::MV:
            require(m >= 1 && n >= 1, "MV dims must be >= 1");
            require(density_ok(d), "MV density must lie in (0,1]");
            require(k == 0 && r == 0 && s == 0 && !schedule, "MV carries no k/r/s/schedule");
            break;
        case KernelKind::MC:
            require(r >= 1, "MC filter dim must be >= 1");
            require(m >= r && n >= r, "MC requires m >= r and n >= r");
            require(density_ok(d), "MC density must lie in (0,1]");
            require(k == 0 && s == 0 && !schedule, "MC carries no k/s/schedule");
            break;
        case KernelKind::MP:
            require(s >= 1, "MP pool dim must be >= 1");
            require(r >= 1, "MP aux dim must be >= 1");
            require(m >= s && n >= s, "MP requires m >= s and n >= s");
            require(density_ok(d), "MP density must lie in (0,1]");
            require(k == 0 && !schedule, "MP carries no k/schedule");
            break;
        case KernelKind::Blur:
            require(n >= 4, "blur image side must be >= 4");
            require(schedule.has_value(), "blur requires a schedule");
            require(schedule->is_pow2(), "blur schedule factors must be positive powers of two");
            require(m == 0 && k == 0 && r == 0 && s == 0, "blur carries only n and schedule");
            break;
    }
}

std::uint64_t complexity(const InstanceParams& params) {
    params.validate();
    const std::uint64_t m = params.m, n = params.n, k = params.k;
    switch (params.kind) {
        case KernelKind::MM:
            return m * n * k;
        case KernelKind::MV:
            return m * n;
        case KernelKind::MC: {
            const std::uint64_t r = params.r;
            return (m - r + 1) * (n - r + 1) * r * r;
        }
        case KernelKind::MP: {
            const std::uint64_t s = params.s;
            const std::uint64_t wn = (n + s - 1) / s;
            const std::uint64_t wm = (m + s - 1) / s;
            return wn * wm * s * s;
        }
        case KernelKind::Blur:
            return n * n;
    }
    return 0;
}

namespace {

/// Exact-count sparsification: round(d * rows * cols) distinct positions,
/// uniform without replacement, values uniform in [0,1).
CooMatrix random_coo(std::size_t rows, std::size_t cols, double density, Rng& rng) {
    CooMatrix m;
    m.rows = rows;
    m.cols = cols;
    const std::uint64_t total = static_cast<std::uint64_t>(rows) * cols;
    const auto nnz = static_cast<std::uint64_t>(
        std::llround(density * static_cast<double>(total)));
    std::vector<std::uint64_t> positions(total);
    std::iota(positions.begin(), positions.end(), 0);
    rng.partial_shuffle(positions, nnz);
    positions.resize(nnz);
    std::sort(positions.begin(), positions.end());
    m.entries.reserve(nnz);
    for (std::uint64_t pos : positions) {
        CooEntry e;
        e.row = static_cast<std::uint32_t>(pos / cols);
        e.col = static_cast<std::uint32_t>(pos % cols);
        e.value = rng.uniform();
        m.entries.push_back(e);
    }
    return m;
}

Matrix random_dense(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    for (auto& x : m.data) x = rng.uniform();
    return m;
}

}  // namespace

KernelInstance KernelInstance::from_dense(const InstanceParams& params, Matrix a,
                                          Matrix b) {
    params.validate();
    KernelInstance inst;
    inst.params = params;
    inst.a = std::move(a);
    inst.b = std::move(b);
    inst.a_coo = CooMatrix::from_dense(inst.a);
    if (!inst.b.empty()) inst.b_coo = CooMatrix::from_dense(inst.b);
    return inst;
}

KernelInstance make_instance(const InstanceParams& params, std::uint64_t seed) {
    params.validate();
    KernelInstance inst;
    inst.params = params;
    inst.seed = seed;
    Rng rng_a(derive_seed(seed, 0));
    Rng rng_b(derive_seed(seed, 1));
    switch (params.kind) {
        case KernelKind::MM:
            inst.a_coo = random_coo(params.m, params.n, params.d1, rng_a);
            inst.b_coo = random_coo(params.n, params.k, params.d2, rng_b);
            inst.a = inst.a_coo.to_dense();
            inst.b = inst.b_coo.to_dense();
            break;
        case KernelKind::MV:
            inst.a_coo = random_coo(params.m, params.n, params.d, rng_a);
            inst.a = inst.a_coo.to_dense();
            inst.b = random_dense(params.n, 1, rng_b);
            break;
        case KernelKind::MC:
            inst.a_coo = random_coo(params.m, params.n, params.d, rng_a);
            inst.a = inst.a_coo.to_dense();
            inst.b = random_dense(params.r, params.r, rng_b);
            break;
        case KernelKind::MP:
            inst.a_coo = random_coo(params.m, params.n, params.d, rng_a);
            inst.a = inst.a_coo.to_dense();
            break;
        case KernelKind::Blur:
            inst.a = random_dense(params.n, params.n, rng_a);
            break;
    }
    return inst;
}

}  // namespace perfsage::kernels
