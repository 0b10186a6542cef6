#pragma once

#include <string>
#include <vector>

#include "perfsage/kernels.hpp"

namespace perfsage::kernels {

enum class Storage { Dense, Sparse };
enum class Threading { FixedSingle, Threaded };
enum class ImplKind { Naive, Tiled, External };

/// CPU-class variants take n_thd as a model feature; GPU-class (external
/// black boxes standing in for device code) do not.
enum class HardwareClass { Cpu, Gpu };

struct VariantDescriptor {
    std::string variant_id;
    KernelKind kind = KernelKind::MM;
    Storage storage = Storage::Dense;
    Threading threading = Threading::Threaded;
    ImplKind impl = ImplKind::Naive;
    HardwareClass hw_class = HardwareClass::Cpu;
    std::string hardware_label;
    std::string launch_command;  // external variants only

    bool is_external() const { return impl == ImplKind::External; }
    bool takes_n_thd() const {
        return hw_class == HardwareClass::Cpu && kind != KernelKind::Blur;
    }
};

/// Registry of runnable variants. variant_id is unique per kind.
class VariantRegistry {
public:
    /// All native in-repo variants, labeled with the host CPU.
    static VariantRegistry builtin();

    void add(const VariantDescriptor& v);
    const VariantDescriptor& get(KernelKind kind, const std::string& variant_id) const;
    std::vector<VariantDescriptor> for_kind(KernelKind kind) const;
    const std::vector<VariantDescriptor>& all() const { return variants_; }

private:
    std::vector<VariantDescriptor> variants_;
};

/// Execute a variant on an instance and return the mathematical result
/// (product / convolution / pooled map / blurred image). Throws
/// ExternalVariantError for external variants: those only report runtimes
/// through the subprocess protocol and produce no output here.
Matrix run_variant(const KernelInstance& instance, const VariantDescriptor& variant,
                   int n_thd);

/// Straightforward loop implementation of each kernel; the correctness
/// oracle for every variant.
Matrix reference_result(const KernelInstance& instance);

/// Two-pass 3-point mean blur (horizontal then vertical) over an n x n
/// image, tiled and split by `schedule`, outer tiles run on up to n_thd
/// threads. Output is (n-2) x (n-2) and numerically identical for all
/// schedules; schedules change runtime only.
Matrix blur_tiled(const Matrix& image, const ScheduleCandidate& schedule, int n_thd);

}  // namespace perfsage::kernels
