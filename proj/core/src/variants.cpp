#include "perfsage/variants.hpp"

#include <algorithm>
#include <thread>

#include "perfsage/errors.hpp"
#include "perfsage/hostinfo.hpp"

namespace perfsage::kernels {

namespace {

/// Run fn(begin, end) over [0, total) split across up to n_thd threads.
/// Each index is handled by exactly one thread, so results are
/// deterministic regardless of n_thd.
void parallel_chunks(std::size_t total, int n_thd,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t workers =
        std::min<std::size_t>(std::max(n_thd, 1), std::max<std::size_t>(total, 1));
    if (workers <= 1) {
        fn(0, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(total, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

// ---- matrix-matrix -------------------------------------------------------

void mm_rows_dense(const Matrix& a, const Matrix& b, Matrix& out,
                   std::size_t row_begin, std::size_t row_end) {
    // i-k-j order: streams through b rows, accumulates into the output row.
    const std::size_t n = a.cols, k = b.cols;
    for (std::size_t i = row_begin; i < row_end; ++i) {
        double* out_row = &out.data[i * k];
        for (std::size_t j = 0; j < n; ++j) {
            const double aij = a(i, j);
            const double* b_row = &b.data[j * k];
            for (std::size_t c = 0; c < k; ++c) out_row[c] += aij * b_row[c];
        }
    }
}

Matrix mm_dense(const KernelInstance& inst, int n_thd) {
    const Matrix& a = inst.a;
    const Matrix& b = inst.b;
    Matrix out(a.rows, b.cols);
    parallel_chunks(a.rows, n_thd, [&](std::size_t lo, std::size_t hi) {
        mm_rows_dense(a, b, out, lo, hi);
    });
    return out;
}

Matrix mm_sparse(const KernelInstance& inst, int n_thd) {
    // COO(A) x dense(B); entries are row-major so each output row is
    // touched by one contiguous run of entries.
    const CooMatrix& a = inst.a_coo;
    const Matrix& b = inst.b;
    Matrix out(a.rows, b.cols);
    const std::size_t k = b.cols;
    const auto& entries = a.entries;
    // Partition entry ranges on row boundaries.
    std::vector<std::size_t> row_start(a.rows + 1, entries.size());
    for (std::size_t idx = entries.size(); idx-- > 0;) row_start[entries[idx].row] = idx;
    for (std::size_t r = a.rows; r-- > 0;)
        if (row_start[r] > row_start[r + 1]) row_start[r] = row_start[r + 1];
    parallel_chunks(a.rows, n_thd, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double* out_row = &out.data[i * k];
            for (std::size_t e = row_start[i]; e < row_start[i + 1]; ++e) {
                const double v = entries[e].value;
                const double* b_row = &b.data[static_cast<std::size_t>(entries[e].col) * k];
                for (std::size_t c = 0; c < k; ++c) out_row[c] += v * b_row[c];
            }
        }
    });
    return out;
}

Matrix mm_tiled(const KernelInstance& inst, int n_thd) {
    constexpr std::size_t kTile = 64;
    const Matrix& a = inst.a;
    const Matrix& b = inst.b;
    Matrix out(a.rows, b.cols);
    const std::size_t n = a.cols, k = b.cols;
    const std::size_t row_tiles = (a.rows + kTile - 1) / kTile;
    parallel_chunks(row_tiles, n_thd, [&](std::size_t tlo, std::size_t thi) {
        for (std::size_t t = tlo; t < thi; ++t) {
            const std::size_t i0 = t * kTile, i1 = std::min(a.rows, i0 + kTile);
            for (std::size_t j0 = 0; j0 < n; j0 += kTile) {
                const std::size_t j1 = std::min(n, j0 + kTile);
                for (std::size_t c0 = 0; c0 < k; c0 += kTile) {
                    const std::size_t c1 = std::min(k, c0 + kTile);
                    for (std::size_t i = i0; i < i1; ++i) {
                        double* out_row = &out.data[i * k];
                        for (std::size_t j = j0; j < j1; ++j) {
                            const double aij = a(i, j);
                            const double* b_row = &b.data[j * k];
                            for (std::size_t c = c0; c < c1; ++c)
                                out_row[c] += aij * b_row[c];
                        }
                    }
                }
            }
        }
    });
    return out;
}

// ---- matrix-vector -------------------------------------------------------

Matrix mv_dense(const KernelInstance& inst, int n_thd) {
    const Matrix& a = inst.a;
    const Matrix& x = inst.b;
    Matrix out(a.rows, 1);
    parallel_chunks(a.rows, n_thd, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double acc = 0.0;
            const double* row = &a.data[i * a.cols];
            for (std::size_t j = 0; j < a.cols; ++j) acc += row[j] * x.data[j];
            out.data[i] = acc;
        }
    });
    return out;
}

Matrix mv_sparse(const KernelInstance& inst, int /*n_thd*/) {
    const CooMatrix& a = inst.a_coo;
    const Matrix& x = inst.b;
    Matrix out(a.rows, 1);
    for (const auto& e : a.entries) out.data[e.row] += e.value * x.data[e.col];
    return out;
}

// ---- matrix convolution (valid mode) --------------------------------------

Matrix mc_dense(const KernelInstance& inst, int n_thd) {
    const Matrix& a = inst.a;
    const Matrix& f = inst.b;
    const std::size_t r = f.rows;
    const std::size_t out_rows = a.rows - r + 1, out_cols = a.cols - r + 1;
    Matrix out(out_rows, out_cols);
    parallel_chunks(out_rows, n_thd, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = 0; j < out_cols; ++j) {
                double acc = 0.0;
                for (std::size_t u = 0; u < r; ++u)
                    for (std::size_t v = 0; v < r; ++v)
                        acc += a(i + u, j + v) * f(u, v);
                out(i, j) = acc;
            }
    });
    return out;
}

Matrix mc_sparse(const KernelInstance& inst, int /*n_thd*/) {
    // Scatter each non-zero of A into the output cells it contributes to.
    const CooMatrix& a = inst.a_coo;
    const Matrix& f = inst.b;
    const std::size_t r = f.rows;
    const std::size_t out_rows = a.rows - r + 1, out_cols = a.cols - r + 1;
    Matrix out(out_rows, out_cols);
    for (const auto& e : a.entries) {
        const std::size_t p = e.row, q = e.col;
        const std::size_t u_lo = (p >= out_rows) ? p - out_rows + 1 : 0;
        const std::size_t u_hi = std::min<std::size_t>(r - 1, p);
        const std::size_t v_lo = (q >= out_cols) ? q - out_cols + 1 : 0;
        const std::size_t v_hi = std::min<std::size_t>(r - 1, q);
        for (std::size_t u = u_lo; u <= u_hi; ++u)
            for (std::size_t v = v_lo; v <= v_hi; ++v)
                out(p - u, q - v) += e.value * f(u, v);
    }
    return out;
}

// ---- max-pooling -----------------------------------------------------------

// Non-overlapping s x s windows, stride s; partial windows at the edges are
// zero-padded, giving a ceil(m/s) x ceil(n/s) output.
Matrix mp_dense(const KernelInstance& inst, int n_thd) {
    const Matrix& a = inst.a;
    const std::size_t s = inst.params.s;
    const std::size_t out_rows = (a.rows + s - 1) / s, out_cols = (a.cols + s - 1) / s;
    Matrix out(out_rows, out_cols);
    parallel_chunks(out_rows, n_thd, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = 0; j < out_cols; ++j) {
                const std::size_t r0 = i * s, r1 = std::min(a.rows, r0 + s);
                const std::size_t c0 = j * s, c1 = std::min(a.cols, c0 + s);
                const bool partial = (r1 - r0) * (c1 - c0) < s * s;
                double best = partial ? 0.0 : a(r0, c0);
                for (std::size_t p = r0; p < r1; ++p)
                    for (std::size_t q = c0; q < c1; ++q)
                        best = std::max(best, a(p, q));
                out(i, j) = best;
            }
    });
    return out;
}

Matrix mp_sparse(const KernelInstance& inst, int /*n_thd*/) {
    // Entries are >= 0 by construction, so a window's max is the max of its
    // listed entries, or the implicit 0 when it has none.
    const CooMatrix& a = inst.a_coo;
    const std::size_t s = inst.params.s;
    const std::size_t out_rows = (a.rows + s - 1) / s, out_cols = (a.cols + s - 1) / s;
    Matrix out(out_rows, out_cols);
    for (const auto& e : a.entries) {
        double& cell = out(e.row / s, e.col / s);
        cell = std::max(cell, e.value);
    }
    return out;
}

}  // namespace

VariantRegistry VariantRegistry::builtin() {
    VariantRegistry reg;
    const std::string host = host_label();
    auto native = [&](KernelKind kind, std::string id, Storage st, Threading th,
                      ImplKind impl) {
        VariantDescriptor v;
        v.variant_id = std::move(id);
        v.kind = kind;
        v.storage = st;
        v.threading = th;
        v.impl = impl;
        v.hardware_label = host;
        reg.add(v);
    };
    for (KernelKind kind :
         {KernelKind::MM, KernelKind::MV, KernelKind::MC, KernelKind::MP}) {
        native(kind, "dense_single", Storage::Dense, Threading::FixedSingle, ImplKind::Naive);
        native(kind, "dense_threaded", Storage::Dense, Threading::Threaded, ImplKind::Naive);
        native(kind, "sparse_single", Storage::Sparse, Threading::FixedSingle, ImplKind::Naive);
    }
    native(KernelKind::MM, "tiled_threaded", Storage::Dense, Threading::Threaded, ImplKind::Tiled);
    native(KernelKind::Blur, "tiled", Storage::Dense, Threading::Threaded, ImplKind::Tiled);
    return reg;
}

void VariantRegistry::add(const VariantDescriptor& v) {
    for (const auto& existing : variants_)
        if (existing.kind == v.kind && existing.variant_id == v.variant_id)
            throw ParamError("duplicate variant id '" + v.variant_id + "' for kernel " +
                             to_string(v.kind));
    if (v.is_external() && v.launch_command.empty())
        throw ParamError("external variant '" + v.variant_id + "' needs a launch command");
    variants_.push_back(v);
}

const VariantDescriptor& VariantRegistry::get(KernelKind kind,
                                              const std::string& variant_id) const {
    for (const auto& v : variants_)
        if (v.kind == kind && v.variant_id == variant_id) return v;
    throw ParamError("no variant '" + variant_id + "' registered for kernel " +
                     to_string(kind));
}

std::vector<VariantDescriptor> VariantRegistry::for_kind(KernelKind kind) const {
    std::vector<VariantDescriptor> out;
    for (const auto& v : variants_)
        if (v.kind == kind) out.push_back(v);
    return out;
}

Matrix run_variant(const KernelInstance& instance, const VariantDescriptor& variant,
                   int n_thd) {
    if (variant.kind != instance.params.kind)
        throw ParamError("variant '" + variant.variant_id + "' targets kernel " +
                         to_string(variant.kind) + ", instance is " +
                         to_string(instance.params.kind));
    if (n_thd < 1) throw ParamError("n_thd must be >= 1");
    if (variant.is_external())
        throw ExternalVariantError(
            "external variant '" + variant.variant_id +
            "' reports runtimes over the subprocess protocol and has no in-process output");
    const int threads = variant.threading == Threading::FixedSingle ? 1 : n_thd;
    switch (instance.params.kind) {
        case KernelKind::MM:
            if (variant.impl == ImplKind::Tiled) return mm_tiled(instance, threads);
            return variant.storage == Storage::Sparse ? mm_sparse(instance, threads)
                                                      : mm_dense(instance, threads);
        case KernelKind::MV:
            return variant.storage == Storage::Sparse ? mv_sparse(instance, threads)
                                                      : mv_dense(instance, threads);
        case KernelKind::MC:
            return variant.storage == Storage::Sparse ? mc_sparse(instance, threads)
                                                      : mc_dense(instance, threads);
        case KernelKind::MP:
            return variant.storage == Storage::Sparse ? mp_sparse(instance, threads)
                                                      : mp_dense(instance, threads);
        case KernelKind::Blur:
            return blur_tiled(instance.a, *instance.params.schedule, threads);
    }
    throw ParamError("unreachable kernel kind");
}

}  // namespace perfsage::kernels
