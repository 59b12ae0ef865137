#include "semithermo/preimage_tree.hpp"
#include "semithermo/errors.hpp"
#include "tree_expand.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace semithermo {

namespace detail {

void expand(const SemigroupSpec& spec, const SpherePoint& y, double delta_crit, const RootOptions& roots,
            std::vector<Child>& out)
{
    out.clear();
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const RationalMap& g = spec.generators[i];
        const PreimageSet pre = preimages(g, y, roots);
        for (const Root& r : pre.roots) {
            if (r.multiplicity > 1) {
                throw CriticalBranch(fmt::format("preimage of multiplicity {} under generator {}", r.multiplicity, i + 1));
            }
            for (const auto& c : spec.critical_by_generator[i]) {
                if (chordal_distance(r.point, c) <= delta_crit) {
                    throw CriticalBranch(fmt::format("branch point within {:.1e} of a critical point of generator {}",
                                                     delta_crit, i + 1));
                }
            }
            const double sd = spherical_derivative(g, r.point);
            if (!(sd > 0.0) || !std::isfinite(sd)) {
                throw CriticalBranch("vanishing spherical derivative on a branch");
            }
            out.push_back(Child{static_cast<std::uint8_t>(i), r.point, std::log(sd)});
        }
    }
}

void rethrow_first(const std::vector<std::exception_ptr>& errors)
{
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace detail

namespace {

void check_request(const SemigroupSpec& spec, const SpherePoint& base, int depth, double delta_pcv, double& base_check)
{
    if (depth < 1) {
        throw PreconditionError("tree depth must be >= 1");
    }
    if (base.is_infinite()) {
        throw PreconditionError("base point must be finite");
    }
    base_check = spec.pcv_distance(base);
    if (base_check <= delta_pcv) {
        throw BasePointTooClose(fmt::format("base point is {:.3e} (chordal) from the postcritical samples", base_check));
    }
}

constexpr std::size_t kChunk = 4096;
constexpr std::size_t kSplitWidth = 256;

double pairwise(const double* v, std::size_t n)
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += v[i];
        }
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise(v, h) + pairwise(v + h, n - h);
}

double chunk_sum(std::span<const double> values, double t, double shift, std::size_t c)
{
    double buf[kChunk];
    const std::size_t lo = c * kChunk;
    const std::size_t n = std::min(kChunk, values.size() - lo);
    for (std::size_t i = 0; i < n; ++i) {
        buf[i] = std::exp(-t * values[lo + i] - shift);
    }
    return pairwise(buf, n);
}

double weight_shift(std::span<const double> values, double t)
{
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) {
        m = std::max(m, -t * v);
    }
    return m;
}

} // namespace

PreimageTree enumerate_tree(const SemigroupSpec& spec, const SpherePoint& base, int depth, const TreeOptions& opts)
{
    PreimageTree tree;
    check_request(spec, base, depth, opts.delta_pcv, tree.base_check);
    tree.base_point = base;
    tree.depth = depth;
    tree.levels.push_back({TreeNode{Word{}, base, 0.0}});

    for (int k = 1; k <= depth; ++k) {
        const auto& parents = tree.levels.back();
        const auto np = static_cast<std::ptrdiff_t>(parents.size());
        std::vector<std::vector<TreeNode>> parts(parents.size());
        std::vector<std::exception_ptr> errors(parents.size());
        std::vector<double> max_step(parents.size(), -std::numeric_limits<double>::infinity());

#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t p = 0; p < np; ++p) {
            const auto idx = static_cast<std::size_t>(p);
            try {
                std::vector<detail::Child> children;
                detail::expand(spec, parents[idx].point, opts.delta_crit, opts.roots, children);
                parts[idx].reserve(children.size());
                for (const auto& c : children) {
                    TreeNode node;
                    node.word.symbols.reserve(parents[idx].word.size() + 1);
                    node.word.symbols.push_back(c.generator);
                    node.word.symbols.insert(node.word.symbols.end(), parents[idx].word.symbols.begin(),
                                             parents[idx].word.symbols.end());
                    node.point = c.point;
                    node.log_sderiv = parents[idx].log_sderiv + c.step_log_sderiv;
                    node.parent = idx;
                    max_step[idx] = std::max(max_step[idx], c.step_log_sderiv);
                    parts[idx].push_back(std::move(node));
                }
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
        detail::rethrow_first(errors);

        std::vector<TreeNode> level;
        for (auto& part : parts) {
            std::move(part.begin(), part.end(), std::back_inserter(level));
        }
        for (double m : max_step) {
            tree.max_step_log_sderiv = std::max(tree.max_step_log_sderiv, m);
        }

        if (opts.prune.enabled && !level.empty()) {
            double top = -std::numeric_limits<double>::infinity();
            for (const auto& n : level) {
                top = std::max(top, -opts.prune.t_ref * n.log_sderiv);
            }
            const double cut = std::log(opts.prune.threshold);
            double kept_w = 0.0;
            double dropped_w = 0.0;
            std::vector<TreeNode> kept;
            kept.reserve(level.size());
            for (auto& n : level) {
                const double lw = -opts.prune.t_ref * n.log_sderiv - top;
                if (lw < cut) {
                    dropped_w += std::exp(lw);
                    ++tree.pruned_count;
                } else {
                    kept_w += std::exp(lw);
                    kept.push_back(std::move(n));
                }
            }
            tree.pruned_mass = std::max(tree.pruned_mass, dropped_w / (kept_w + dropped_w));
            level = std::move(kept);
        }
        tree.levels.push_back(std::move(level));
    }
    return tree;
}

double tree_weight_sum(const PreimageTree& tree, double t, int level)
{
    if (level < 0 || level > tree.depth) {
        throw PreconditionError(fmt::format("level {} outside tree depth {}", level, tree.depth));
    }
    const auto& nodes = tree.level(level);
    std::vector<double> v(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        v[i] = nodes[i].log_sderiv;
    }
    return log_sum_exp_weights(v, t);
}

double tree_weight_sum(const LevelProfile& profile, double t, int level)
{
    if (level < profile.first_level || level > profile.depth) {
        throw PreconditionError(
            fmt::format("level {} outside stored range [{}, {}]", level, profile.first_level, profile.depth));
    }
    return log_sum_exp_weights(profile.level(level), t);
}

double log_sum_exp_weights(std::span<const double> values, double t)
{
    if (values.empty()) {
        return -std::numeric_limits<double>::infinity();
    }
    const double shift = weight_shift(values, t);
    const std::size_t nchunks = (values.size() + kChunk - 1) / kChunk;
    std::vector<double> partial(nchunks);
    const auto nc = static_cast<std::ptrdiff_t>(nchunks);
#pragma omp parallel for schedule(static) if (nchunks > 1)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        partial[static_cast<std::size_t>(c)] = chunk_sum(values, t, shift, static_cast<std::size_t>(c));
    }
    return shift + std::log(pairwise(partial.data(), partial.size()));
}

namespace {

struct DfsContext {
    const SemigroupSpec& spec;
    const TreeOptions& opts;
    int depth;
    int first_level;
    int split;
};

void dfs(const DfsContext& ctx, const SpherePoint& p, double logd, int level, std::vector<std::vector<double>>& bufs,
         double& max_step)
{
    std::vector<detail::Child> children;
    detail::expand(ctx.spec, p, ctx.opts.delta_crit, ctx.opts.roots, children);
    const int next = level + 1;
    for (const auto& c : children) {
        const double v = logd + c.step_log_sderiv;
        max_step = std::max(max_step, c.step_log_sderiv);
        if (next >= ctx.first_level) {
            bufs[static_cast<std::size_t>(next - ctx.split - 1)].push_back(v);
        }
        if (next < ctx.depth) {
            dfs(ctx, c.point, v, next, bufs, max_step);
        }
    }
}

struct FrontierItem {
    SpherePoint point;
    double log_sderiv;
};

void check_levels(int depth, int first_level)
{
    if (first_level < 0 || first_level > depth) {
        throw PreconditionError(fmt::format("first_level {} outside [0, {}]", first_level, depth));
    }
}

} // namespace

LevelProfile build_profile(const SemigroupSpec& spec, const SpherePoint& base, int depth, int first_level,
                           const TreeOptions& opts)
{
    LevelProfile prof;
    check_request(spec, base, depth, opts.delta_pcv, prof.base_check);
    check_levels(depth, first_level);
    prof.base_point = base;
    prof.depth = depth;
    prof.first_level = first_level;
    prof.log_sderiv.resize(static_cast<std::size_t>(depth - first_level + 1));
    if (first_level == 0) {
        prof.log_sderiv[0].push_back(0.0);
    }

    // Breadth-first until the frontier is wide enough to fan out.
    std::vector<FrontierItem> frontier{{base, 0.0}};
    int split = 0;
    std::vector<detail::Child> children;
    while (split < depth && frontier.size() < kSplitWidth) {
        std::vector<FrontierItem> next;
        for (const auto& item : frontier) {
            detail::expand(spec, item.point, opts.delta_crit, opts.roots, children);
            for (const auto& c : children) {
                prof.max_step_log_sderiv = std::max(prof.max_step_log_sderiv, c.step_log_sderiv);
                next.push_back({c.point, item.log_sderiv + c.step_log_sderiv});
            }
        }
        ++split;
        if (split >= first_level) {
            auto& lvl = prof.log_sderiv[static_cast<std::size_t>(split - first_level)];
            for (const auto& item : next) {
                lvl.push_back(item.log_sderiv);
            }
        }
        frontier = std::move(next);
    }
    if (split == depth) {
        return prof;
    }

    const DfsContext ctx{spec, opts, depth, first_level, split};
    const std::size_t nsub = frontier.size();
    const auto nlev = static_cast<std::size_t>(depth - split);
    std::vector<std::vector<std::vector<double>>> parts(nsub, std::vector<std::vector<double>>(nlev));
    std::vector<std::exception_ptr> errors(nsub);
    std::vector<double> max_step(nsub, 0.0);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(nsub); ++s) {
        const auto idx = static_cast<std::size_t>(s);
        try {
            dfs(ctx, frontier[idx].point, frontier[idx].log_sderiv, split, parts[idx], max_step[idx]);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    detail::rethrow_first(errors);

    for (std::size_t s = 0; s < nsub; ++s) {
        prof.max_step_log_sderiv = std::max(prof.max_step_log_sderiv, max_step[s]);
    }
    for (std::size_t l = 0; l < nlev; ++l) {
        const int level = split + 1 + static_cast<int>(l);
        if (level < first_level) {
            continue;
        }
        auto& out = prof.log_sderiv[static_cast<std::size_t>(level - first_level)];
        std::size_t total = 0;
        for (const auto& part : parts) {
            total += part[l].size();
        }
        out.reserve(total);
        for (auto& part : parts) {
            out.insert(out.end(), part[l].begin(), part[l].end());
            std::vector<double>().swap(part[l]);
        }
    }
    return prof;
}

namespace reference {

LevelProfile build_profile(const SemigroupSpec& spec, const SpherePoint& base, int depth, int first_level,
                           const TreeOptions& opts)
{
    LevelProfile prof;
    check_request(spec, base, depth, opts.delta_pcv, prof.base_check);
    check_levels(depth, first_level);
    prof.base_point = base;
    prof.depth = depth;
    prof.first_level = first_level;
    prof.log_sderiv.resize(static_cast<std::size_t>(depth - first_level + 1));

    std::vector<FrontierItem> level{{base, 0.0}};
    if (first_level == 0) {
        prof.log_sderiv[0].push_back(0.0);
    }
    std::vector<detail::Child> children;
    for (int k = 1; k <= depth; ++k) {
        std::vector<FrontierItem> next;
        for (const auto& item : level) {
            detail::expand(spec, item.point, opts.delta_crit, opts.roots, children);
            for (const auto& c : children) {
                prof.max_step_log_sderiv = std::max(prof.max_step_log_sderiv, c.step_log_sderiv);
                next.push_back({c.point, item.log_sderiv + c.step_log_sderiv});
            }
        }
        if (k >= first_level) {
            auto& out = prof.log_sderiv[static_cast<std::size_t>(k - first_level)];
            for (const auto& item : next) {
                out.push_back(item.log_sderiv);
            }
        }
        level = std::move(next);
    }
    return prof;
}

double log_sum_exp_weights(std::span<const double> values, double t)
{
    if (values.empty()) {
        return -std::numeric_limits<double>::infinity();
    }
    const double shift = weight_shift(values, t);
    const std::size_t nchunks = (values.size() + kChunk - 1) / kChunk;
    std::vector<double> partial(nchunks);
    for (std::size_t c = 0; c < nchunks; ++c) {
        partial[c] = chunk_sum(values, t, shift, c);
    }
    return shift + std::log(pairwise(partial.data(), partial.size()));
}

} // namespace reference

} // namespace semithermo
