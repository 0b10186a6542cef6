#include "perfsage/features.hpp"

#include "perfsage/errors.hpp"

namespace perfsage::models {

using kernels::InstanceParams;
using kernels::KernelKind;

std::vector<std::string> feature_names(KernelKind kind, bool with_n_thd) {
    std::vector<std::string> names;
    switch (kind) {
        case KernelKind::MM: names = {"m", "n", "k", "d1", "d2"}; break;
        case KernelKind::MV: names = {"m", "n", "d"}; break;
        case KernelKind::MC: names = {"m", "n", "r", "d"}; break;
        case KernelKind::MP: names = {"m", "n", "r", "s", "d"}; break;
        case KernelKind::Blur: return {"n", "s1", "s2", "s3", "s4"};
    }
    if (with_n_thd) names.push_back("n_thd");
    return names;
}

std::vector<double> featurize(const InstanceParams& params, bool augmented,
                              bool with_n_thd) {
    params.validate();
    std::vector<double> f;
    switch (params.kind) {
        case KernelKind::MM:
            f = {double(params.m), double(params.n), double(params.k), params.d1,
                 params.d2};
            break;
        case KernelKind::MV:
            f = {double(params.m), double(params.n), params.d};
            break;
        case KernelKind::MC:
            f = {double(params.m), double(params.n), double(params.r), params.d};
            break;
        case KernelKind::MP:
            f = {double(params.m), double(params.n), double(params.r),
                 double(params.s), params.d};
            break;
        case KernelKind::Blur: {
            const auto& sc = *params.schedule;
            f = {double(params.n), double(sc.s1), double(sc.s2), double(sc.s3),
                 double(sc.s4)};
            with_n_thd = false;
            break;
        }
    }
    if (with_n_thd && params.kind != KernelKind::Blur)
        f.push_back(double(params.n_thd));
    if (augmented) f.push_back(double(kernels::complexity(params)));
    return f;
}

std::vector<double> featurize(const InstanceParams& params, bool augmented) {
    return featurize(params, augmented, true);
}

std::pair<KernelKind, bool> kind_from_feature_names(
    const std::vector<std::string>& names) {
    for (KernelKind kind : {KernelKind::MM, KernelKind::MV, KernelKind::MC,
                            KernelKind::MP, KernelKind::Blur}) {
        for (bool with_n_thd : {true, false}) {
            if (names == feature_names(kind, with_n_thd)) return {kind, with_n_thd};
        }
    }
    std::string joined;
    for (const auto& n : names) joined += (joined.empty() ? "" : ",") + n;
    throw LoadError("unrecognized feature schema: [" + joined + "]");
}

}  // namespace perfsage::models
