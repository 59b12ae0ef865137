#pragma once

#include "semithermo/semigroup.hpp"
#include "semithermo/sphere.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace semithermo {

inline constexpr double kDeltaPcv = 1e-6;
inline constexpr double kDeltaCrit = 1e-6;

struct PruneOpts {
    bool enabled = false;
    /// Exponent of the weight |(f^n)'|^{-t_ref} used to rank branches.
    double t_ref = 1.0;
    /// Drop nodes whose weight is below threshold * (level maximum).
    double threshold = 1e-14;
};

struct TreeOptions {
    double delta_pcv = kDeltaPcv;
    double delta_crit = kDeltaCrit;
    PruneOpts prune{};
    RootOptions roots{};
};

struct TreeNode {
    Word word;
    SpherePoint point;
    /// Sum of log spherical derivatives along the branch back to the base.
    double log_sderiv = 0.0;
    /// Index of f_{word[0]}(point) in the previous level; 0 for the root.
    std::size_t parent = 0;
};

/// Truncated backward orbit f~^{-k}(xi), k = 0..depth, in canonical order:
/// parents in order, then generator index, then root order.
struct PreimageTree {
    SpherePoint base_point;
    double base_check = 0.0;
    int depth = 0;
    /// levels[0] is the base point with the empty word.
    std::vector<std::vector<TreeNode>> levels;
    std::size_t pruned_count = 0;
    /// Largest fraction of a level's weight removed by pruning.
    double pruned_mass = 0.0;
    /// Largest single-step log spherical derivative seen.
    double max_step_log_sderiv = 0.0;

    const std::vector<TreeNode>& level(int k) const { return levels.at(static_cast<std::size_t>(k)); }
};

PreimageTree enumerate_tree(const SemigroupSpec& spec, const SpherePoint& base, int depth,
                            const TreeOptions& opts = {});

/// log sum_x exp(-t * log_sderiv(x)) over one level.
double tree_weight_sum(const PreimageTree& tree, double t, int level);

/// Accumulated log derivatives of levels first_level..depth, without words or
/// points. Same values and order as the matching PreimageTree levels.
struct LevelProfile {
    SpherePoint base_point;
    double base_check = 0.0;
    int depth = 0;
    int first_level = 0;
    std::vector<std::vector<double>> log_sderiv;
    double max_step_log_sderiv = 0.0;

    const std::vector<double>& level(int k) const
    {
        return log_sderiv.at(static_cast<std::size_t>(k - first_level));
    }
};

/// Depth-first enumeration fanned out over OpenMP threads. Output does not
/// depend on the thread count.
LevelProfile build_profile(const SemigroupSpec& spec, const SpherePoint& base, int depth, int first_level,
                           const TreeOptions& opts = {});

double tree_weight_sum(const LevelProfile& profile, double t, int level);

/// log sum exp(-t * v) with a fixed pairwise reduction shape that depends only
/// on values.size(). Parallel over fixed-size chunks.
double log_sum_exp_weights(std::span<const double> values, double t);

namespace reference {

/// Serial breadth-first reference for build_profile.
LevelProfile build_profile(const SemigroupSpec& spec, const SpherePoint& base, int depth, int first_level,
                           const TreeOptions& opts = {});

/// Serial reference for log_sum_exp_weights.
double log_sum_exp_weights(std::span<const double> values, double t);

} // namespace reference

} // namespace semithermo
