#pragma once

#include "semithermo/rational_map.hpp"
#include "semithermo/sphere.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace semithermo {

/// Finite word over the generator alphabet. Symbols are stored zero-based;
/// text forms are one-based ("1.2.1").
struct Word {
    std::vector<std::uint8_t> symbols;

    std::size_t size() const { return symbols.size(); }
    bool empty() const { return symbols.empty(); }
    std::string to_string() const;
    static Word parse(const std::string& text);

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word&, const Word&) = default;
};

struct SemigroupOptions {
    /// Words up to this length push critical values into pcv_samples.
    int pcv_depth = 6;
    RootOptions roots{};
};

/// Finitely generated rational semigroup with the derived data every
/// estimator needs.
struct SemigroupSpec {
    std::string name;
    std::vector<RationalMap> generators;
    /// Only for polynomial semigroups: |f_i(z)| >= 2|z| when |z| > R.
    std::optional<double> escape_radius;
    /// Critical points per generator, including infinity when critical.
    std::vector<std::vector<SpherePoint>> critical_by_generator;
    /// All finite critical points of all generators.
    std::vector<SpherePoint> crit_samples;
    /// Forward images of critical values, a computable proxy for PCV(G).
    std::vector<SpherePoint> pcv_samples;

    std::size_t size() const { return generators.size(); }
    int total_degree() const;
    bool all_polynomial() const;
    /// Minimum chordal distance from z to pcv_samples (2 when empty).
    double pcv_distance(const SpherePoint& z) const;
};

/// Validates the generators and derives escape radius and critical data.
/// Throws ValidationError for an empty list or a degree-1 generator.
SemigroupSpec make_semigroup(std::vector<RationalMap> generators, std::string name = {},
                             const SemigroupOptions& opts = {});

inline constexpr int kMaxComposeDepth = 8;

/// f_w = f_{w_n} o ... o f_{w_1}. Throws DepthExceeded past max_depth.
RationalMap compose_word(const SemigroupSpec& spec, const Word& word, int max_depth = kMaxComposeDepth);

} // namespace semithermo
