#include "semithermo/errors.hpp"
#include "semithermo/measures.hpp"
#include "semithermo/render.hpp"
#include "semithermo/rng.hpp"
#include "tree_expand.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>

namespace semithermo {

namespace {

struct Step {
    detail::Child child;
    double log_prob;
};

Step backward_step(const SemigroupSpec& spec, const SpherePoint& y, double t, SplitMix64& rng,
                   std::vector<detail::Child>& children, std::vector<double>& logw)
{
    detail::expand(spec, y, kDeltaCrit, RootOptions{}, children);
    logw.resize(children.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < children.size(); ++k) {
        logw[k] = -t * children[k].step_log_sderiv;
        top = std::max(top, logw[k]);
    }
    double total = 0.0;
    for (double v : logw) {
        total += std::exp(v - top);
    }
    const double u = rng.uniform() * total;
    double run = 0.0;
    std::size_t pick = children.size() - 1;
    for (std::size_t k = 0; k < children.size(); ++k) {
        run += std::exp(logw[k] - top);
        if (u < run) {
            pick = k;
            break;
        }
    }
    return {children[pick], logw[pick] - top - std::log(total)};
}

} // namespace

OrbitSample sample_backward_orbit(const SemigroupSpec& spec, const SpherePoint& start, double t, int length,
                                  std::uint64_t seed)
{
    if (length < 0) {
        throw PreconditionError("orbit length must be non-negative");
    }
    OrbitSample out;
    out.seed = seed;
    out.points.push_back(start);
    SplitMix64 rng(seed);
    std::vector<detail::Child> children;
    std::vector<double> logw;
    for (int k = 0; k < length; ++k) {
        const Step st = backward_step(spec, out.points.back(), t, rng, children, logw);
        out.points.push_back(st.child.point);
        out.symbols.push_back(st.child.generator);
        out.log_weights.push_back(st.log_prob);
        out.log_sderiv.push_back(st.child.step_log_sderiv);
    }
    return out;
}

CltReport birkhoff_diagnostics(const SemigroupSpec& spec, double t, int n_block, std::uint64_t n_samples,
                               std::uint64_t seed)
{
    if (n_samples < 2) {
        throw PreconditionError(fmt::format("birkhoff_diagnostics needs at least 2 samples, got {}", n_samples));
    }
    if (n_block < 2) {
        throw PreconditionError(fmt::format("birkhoff_diagnostics needs n_block >= 2, got {}", n_block));
    }
    const SpherePoint start = find_repelling_seed(spec);
    const int half = n_block / 2;

    std::vector<double> full(n_samples);
    std::vector<double> part(n_samples);
    std::vector<std::exception_ptr> errors(n_samples);
    const auto n = static_cast<std::int64_t>(n_samples);
#pragma omp parallel
    {
        std::vector<detail::Child> children;
        std::vector<double> logw;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            try {
                SplitMix64 rng = SplitMix64::split(seed, ui);
                SpherePoint y = start;
                for (int k = 0; k < kOrbitBurnIn; ++k) {
                    y = backward_step(spec, y, t, rng, children, logw).child.point;
                }
                double sum = 0.0;
                for (int k = 0; k < n_block; ++k) {
                    const Step st = backward_step(spec, y, t, rng, children, logw);
                    y = st.child.point;
                    sum += st.child.step_log_sderiv;
                    if (k + 1 == half) {
                        part[ui] = sum;
                    }
                }
                full[ui] = sum;
            } catch (...) {
                errors[ui] = std::current_exception();
            }
        }
    }
    detail::rethrow_first(errors);

    auto moments = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) {
            mean += x;
        }
        mean /= static_cast<double>(v.size());
        double m2 = 0.0;
        double m3 = 0.0;
        double m4 = 0.0;
        for (double x : v) {
            const double d = x - mean;
            m2 += d * d;
            m3 += d * d * d;
            m4 += d * d * d * d;
        }
        const auto cnt = static_cast<double>(v.size());
        return std::array<double, 5>{mean, m2 / (cnt - 1.0), m2 / cnt, m3 / cnt, m4 / cnt};
    };
    const auto mf = moments(full);
    const auto mh = moments(part);

    CltReport rep;
    rep.t = t;
    rep.n_block = n_block;
    rep.n_samples = n_samples;
    rep.seed = seed;
    rep.mean = mf[0] / n_block;
    rep.variance = mf[1] / n_block;
    rep.degenerate = rep.variance < 1e-12;
    if (!rep.degenerate) {
        rep.skewness = mf[3] / std::pow(mf[2], 1.5);
        rep.excess_kurtosis = mf[4] / (mf[2] * mf[2]) - 3.0;
        const double var_half = mh[1] / half;
        rep.variance_ratio = var_half > 0.0 ? rep.variance / var_half - 1.0 : 0.0;
    }
    return rep;
}

void write_report(std::ostream& os, const CltReport& r)
{
    fmt::print(os, "t={:.17g}\n", r.t);
    fmt::print(os, "n_block={}\n", r.n_block);
    fmt::print(os, "n_samples={}\n", r.n_samples);
    fmt::print(os, "seed={}\n", r.seed);
    fmt::print(os, "mean={:.17g}\n", r.mean);
    fmt::print(os, "variance={:.17g}\n", r.variance);
    fmt::print(os, "skewness={:.17g}\n", r.skewness);
    fmt::print(os, "excess_kurtosis={:.17g}\n", r.excess_kurtosis);
    fmt::print(os, "variance_ratio={:.17g}\n", r.variance_ratio);
    fmt::print(os, "degenerate={}\n", r.degenerate ? 1 : 0);
}

} // namespace semithermo
