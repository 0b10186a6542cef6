#include "perfsage/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "perfsage/errors.hpp"
#include "perfsage/rng.hpp"

namespace perfsage::models {

double Tree::predict(std::span<const double> x) const {
    int node = 0;
    for (;;) {
        const TreeNode& n = nodes[static_cast<std::size_t>(node)];
        if (n.is_leaf()) return n.value;
        node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
}

double Forest::predict(std::span<const double> x) const {
    if (trees.empty()) throw ParamError("empty forest");
    double acc = 0.0;
    for (const auto& t : trees) acc += t.predict(x);
    return acc / static_cast<double>(trees.size());
}

namespace {

struct Builder {
    const std::vector<std::vector<double>>& X;
    std::span<const double> y;
    const ForestParams& params;
    Tree tree;

    double mean_of(std::span<const std::size_t> idx) const {
        double acc = 0.0;
        for (std::size_t i : idx) acc += y[i];
        return acc / static_cast<double>(idx.size());
    }

    /// Best (feature, threshold) by SSE reduction, or feature -1 when no
    /// split separates the samples.
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double sse = std::numeric_limits<double>::infinity();
    };

    Split best_split(std::vector<std::size_t>& idx) const {
        Split best;
        const std::size_t n = idx.size();
        const std::size_t p = X[0].size();
        std::vector<std::size_t> order(idx);
        for (std::size_t f = 0; f < p; ++f) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return X[a][f] < X[b][f];
            });
            // Prefix sums over the sorted order for O(1) SSE of both sides.
            double sum_left = 0.0, sq_left = 0.0;
            double sum_total = 0.0, sq_total = 0.0;
            for (std::size_t i : order) {
                sum_total += y[i];
                sq_total += y[i] * y[i];
            }
            for (std::size_t cut = 1; cut < n; ++cut) {
                const double yv = y[order[cut - 1]];
                sum_left += yv;
                sq_left += yv * yv;
                const double lo = X[order[cut - 1]][f];
                const double hi = X[order[cut]][f];
                if (lo == hi) continue;  // can't separate equal values
                const double nl = static_cast<double>(cut);
                const double nr = static_cast<double>(n - cut);
                const double sum_right = sum_total - sum_left;
                const double sq_right = sq_total - sq_left;
                const double sse = (sq_left - sum_left * sum_left / nl) +
                                   (sq_right - sum_right * sum_right / nr);
                if (sse < best.sse) {
                    best.sse = sse;
                    best.feature = static_cast<int>(f);
                    best.threshold = lo + (hi - lo) / 2.0;
                }
            }
        }
        return best;
    }

    int build(std::vector<std::size_t> idx, int depth) {
        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.back().value = mean_of(idx);

        if (depth >= params.max_depth ||
            idx.size() < static_cast<std::size_t>(params.min_samples_split))
            return node_id;
        const Split split = best_split(idx);
        if (split.feature < 0) return node_id;

        std::vector<std::size_t> left, right;
        for (std::size_t i : idx)
            (X[i][static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right)
                .push_back(i);
        if (left.empty() || right.empty()) return node_id;

        idx.clear();
        idx.shrink_to_fit();
        const int l = build(std::move(left), depth + 1);
        const int r = build(std::move(right), depth + 1);
        tree.nodes[static_cast<std::size_t>(node_id)].feature = split.feature;
        tree.nodes[static_cast<std::size_t>(node_id)].threshold = split.threshold;
        tree.nodes[static_cast<std::size_t>(node_id)].left = l;
        tree.nodes[static_cast<std::size_t>(node_id)].right = r;
        return node_id;
    }
};

}  // namespace

Forest fit_forest(const std::vector<std::vector<double>>& X, std::span<const double> y,
                  const ForestParams& params, std::uint64_t seed) {
    if (X.size() != y.size()) throw ParamError("feature/target size mismatch");
    if (X.size() < 10) throw ParamError("forest needs at least 10 samples");
    if (params.trees < 1 || params.max_depth < 1)
        throw ParamError("forest needs trees >= 1 and max_depth >= 1");
    const std::size_t n = X.size();
    Forest forest;
    forest.trees.reserve(static_cast<std::size_t>(params.trees));
    for (int t = 0; t < params.trees; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> bootstrap(n);
        for (auto& i : bootstrap) i = rng.bounded(n);
        std::sort(bootstrap.begin(), bootstrap.end());
        Builder builder{X, y, params, {}};
        builder.build(std::move(bootstrap), 0);
        forest.trees.push_back(std::move(builder.tree));
    }
    return forest;
}

}  // namespace perfsage::models
