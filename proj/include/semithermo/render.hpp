#pragma once

#include "semithermo/image.hpp"
#include "semithermo/semigroup.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace semithermo {

/// Repelling fixed point of the first generator that has one (spherical
/// multiplier > 1). Throws NoRepellingSeed.
SpherePoint find_repelling_seed(const SemigroupSpec& spec);

inline constexpr std::uint64_t kChaosBurnIn = 100;

/// Inverse-iteration chaos game: uniform generator, then uniform branch
/// (counted with multiplicity). Returns the finite points after burn-in.
std::vector<cplx> chaos_game_points(const SemigroupSpec& spec, std::uint64_t iterations, std::uint64_t seed);

/// Occupancy raster of the chaos game. Deterministic for a fixed seed.
GridImage render_global(const SemigroupSpec& spec, std::uint64_t iterations, std::uint64_t seed,
                        const GridSpec& grid);

/// Symbol sequence of a fiber: constant(i), periodic(pattern) or seeded random.
class WordRule {
public:
    enum class Kind { Constant, Periodic, Random };

    static WordRule constant(int symbol);
    static WordRule periodic(std::vector<int> pattern);
    static WordRule random(std::uint64_t seed);
    /// "const:i", "periodic:p1p2..." or "random" (one-based symbols).
    static WordRule parse(const std::string& text, std::uint64_t seed);

    Kind kind() const { return kind_; }
    /// Zero-based symbols for steps 0..length-1.
    std::vector<std::uint8_t> sequence(std::size_t length, std::size_t alphabet) const;
    std::string to_string() const;

private:
    Kind kind_ = Kind::Constant;
    std::vector<int> pattern_;
    std::uint64_t seed_ = 0;
};

struct FiberRender {
    /// Escape iteration per pixel; 0 when the orbit stays bounded.
    GridImage escape_time;
    /// Pixels within about one pixel of J_w: escaping pixels whose
    /// distance estimate is below the pixel size, plus bounded pixels
    /// with an escaping 4-neighbor.
    GridImage julia;
    int max_iter = 0;
};

/// Escape-time render of the fiber Julia set of a polynomial semigroup.
/// Throws NotPolynomial for rational generators. OpenMP over rows.
FiberRender render_fiber(const SemigroupSpec& spec, const WordRule& rule, const GridSpec& grid, int max_iter);

namespace reference {

/// Serial pixel loop; bit-identical to semithermo::render_fiber.
FiberRender render_fiber(const SemigroupSpec& spec, const WordRule& rule, const GridSpec& grid, int max_iter);

} // namespace reference

} // namespace semithermo
