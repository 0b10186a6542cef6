#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace perfsage::models {

/// Regression tree stored as a flat node array; children by index, -1 for leaf.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const { return left < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;
    double predict(std::span<const double> x) const;
};

/// Bagged CART regression forest: bootstrap resampling per tree, exhaustive
/// variance-reduction splits over all features, depth-limited.
struct Forest {
    std::vector<Tree> trees;
    double predict(std::span<const double> x) const;
};

struct ForestParams {
    int trees = 100;
    int max_depth = 12;
    int min_samples_split = 2;
};

Forest fit_forest(const std::vector<std::vector<double>>& X, std::span<const double> y,
                  const ForestParams& params, std::uint64_t seed);

}  // namespace perfsage::models
