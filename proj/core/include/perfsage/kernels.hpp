#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "perfsage/matrix.hpp"

namespace perfsage::kernels {

enum class KernelKind { MM, MV, MC, MP, Blur };

std::string to_string(KernelKind kind);
KernelKind kind_from_string(const std::string& name);

/// A point in the blur schedule space: four power-of-two split factors.
/// s1 splits the horizontal pass's inner loop, s2/s3 tile the output in
/// x/y, s4 splits the vertical pass's inner loop within an x-tile.
struct ScheduleCandidate {
    std::uint32_t s1 = 8;
    std::uint32_t s2 = 256;
    std::uint32_t s3 = 128;
    std::uint32_t s4 = 8;

    /// All factors positive powers of two. Range and chain constraints
    /// (s3 <= s2, s4 <= s3) are properties of a ScheduleSpace, not of the
    /// point itself; see selector.
    bool is_pow2() const;

    /// The documented blur-CPU lattice constraints.
    bool satisfies_chain() const {
        return s1 >= 2 && s1 <= 1024 && s2 >= 2 && s2 <= 1024 && s3 >= 2 &&
               s4 >= 2 && s3 <= s2 && s4 <= s3 && is_pow2();
    }

    auto tie() const { return std::tie(s1, s2, s3, s4); }
    bool operator==(const ScheduleCandidate& o) const { return tie() == o.tie(); }
    bool operator<(const ScheduleCandidate& o) const { return tie() < o.tie(); }

    std::string to_string() const;
};

/// A rectangular-with-chaining lattice of schedules: each factor ranges over
/// powers of two in [min, max]; when `chained`, s3 is additionally capped by
/// the drawn s2 and s4 by the drawn s3.
struct ScheduleSpace {
    std::uint32_t s1_min = 2, s1_max = 1024;
    std::uint32_t s2_min = 2, s2_max = 1024;
    std::uint32_t s3_min = 2, s3_max = 1024;
    std::uint32_t s4_min = 2, s4_max = 1024;
    bool chained = true;

    /// The blur-CPU lattice: s1,s2 over {2..1024}, s3 <= s2, s4 <= s3.
    static ScheduleSpace cpu_default();
    /// The blur-GPU-style lattice: s1 over {2..16}, s2,s3 over {1..64},
    /// s4 pinned to 1, no chaining.
    static ScheduleSpace gpu_style();

    bool contains(const ScheduleCandidate& c) const;
    std::uint64_t size() const;
    /// Every point, lexicographic in (s1,s2,s3,s4).
    std::vector<ScheduleCandidate> enumerate_all() const;
};

/// Parameters identifying one kernel instance. Only the fields meaningful
/// for `kind` are used:
///   MM:   m, n, k, d1, d2, n_thd
///   MV:   m, n, d, n_thd
///   MC:   m, n, r (filter dim), d, n_thd
///   MP:   m, n, r (aux dim), s (pool dim), d, n_thd
///   Blur: n (square image side), schedule
struct InstanceParams {
    KernelKind kind = KernelKind::MM;
    std::uint32_t m = 0;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t r = 0;
    std::uint32_t s = 0;
    double d1 = 1.0;
    double d2 = 1.0;
    double d = 1.0;
    int n_thd = 1;
    std::optional<ScheduleCandidate> schedule;

    static InstanceParams mm(std::uint32_t m, std::uint32_t n, std::uint32_t k,
                             double d1 = 1.0, double d2 = 1.0, int n_thd = 1);
    static InstanceParams mv(std::uint32_t m, std::uint32_t n, double d = 1.0,
                             int n_thd = 1);
    static InstanceParams mc(std::uint32_t m, std::uint32_t n, std::uint32_t r,
                             double d = 1.0, int n_thd = 1);
    static InstanceParams mp(std::uint32_t m, std::uint32_t n, std::uint32_t r,
                             std::uint32_t s, double d = 1.0, int n_thd = 1);
    static InstanceParams blur(std::uint32_t n, const ScheduleCandidate& sched);

    /// Throws ParamError if any field violates the domain for `kind`.
    void validate() const;
};

/// Closed-form operation count of a kernel instance:
///   MM: m*n*k    MV: m*n    MC: (m-r+1)*(n-r+1)*r^2
///   MP: ceil(n/s)*ceil(m/s)*s^2    Blur: n^2
std::uint64_t complexity(const InstanceParams& params);

/// A materialized instance: parameters plus generated operands. Operand A
/// (and B for MM) is kept both dense and as a coordinate list so any
/// variant can run without paying a conversion inside the timed region.
struct KernelInstance {
    InstanceParams params;
    std::uint64_t seed = 0;
    Matrix a;
    Matrix b;
    CooMatrix a_coo;
    CooMatrix b_coo;

    /// Build an instance around caller-supplied dense operands.
    static KernelInstance from_dense(const InstanceParams& params, Matrix a,
                                     Matrix b = {});
};

/// Fill operands with uniform values in [0,1). Sparse operands get exactly
/// round(d * rows * cols) non-zeros at uniformly chosen distinct positions.
/// Bit-identical regeneration from equal (params, seed).
KernelInstance make_instance(const InstanceParams& params, std::uint64_t seed);

}  // namespace perfsage::kernels
