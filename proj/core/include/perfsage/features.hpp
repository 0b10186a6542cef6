#pragma once

#include <string>
#include <vector>

#include "perfsage/kernels.hpp"

namespace perfsage::models {

/// Base feature names per kind (no complexity column):
///   MM:   m,n,k,d1,d2[,n_thd]    MV: m,n,d[,n_thd]    MC: m,n,r,d[,n_thd]
///   MP:   m,n,r,s,d[,n_thd]      Blur: n,s1,s2,s3,s4
/// with_n_thd applies to the four matrix kernels only (CPU-class variants);
/// blur never takes it.
std::vector<std::string> feature_names(kernels::KernelKind kind, bool with_n_thd);

/// Base feature vector in schema order; `augmented` appends c = complexity(params).
std::vector<double> featurize(const kernels::InstanceParams& params, bool augmented,
                              bool with_n_thd);

/// CPU-class default: n_thd included for the matrix kernels.
std::vector<double> featurize(const kernels::InstanceParams& params, bool augmented);

/// Recover (kind, with_n_thd) from a stored schema; the five layouts are
/// mutually distinct. Throws LoadError on an unknown layout.
std::pair<kernels::KernelKind, bool> kind_from_feature_names(
    const std::vector<std::string>& names);

}  // namespace perfsage::models
