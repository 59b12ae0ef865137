#pragma once

#include "semithermo/sphere.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace semithermo {

struct BBox {
    double re_min = -2.2;
    double re_max = 2.2;
    double im_min = -2.2;
    double im_max = 2.2;

    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
};

struct GridSpec {
    BBox bbox{};
    int width = 512;
    int height = 512;
};

enum class PixelKind { Occupancy, EscapeTime };

/// Raster over a rectangle of the plane. Row 0 is the top (im_max) edge.
/// Occupancy pixels are 0/1; escape-time pixels hold the escape iteration,
/// with 0 meaning "did not escape".
class GridImage {
public:
    GridImage(const GridSpec& grid, PixelKind kind);

    const BBox& bbox() const { return bbox_; }
    int width() const { return width_; }
    int height() const { return height_; }
    PixelKind kind() const { return kind_; }
    double pixel_width() const { return bbox_.width() / width_; }
    double pixel_height() const { return bbox_.height() / height_; }

    std::uint32_t at(int x, int y) const { return pixels_[index(x, y)]; }
    std::uint32_t& at(int x, int y) { return pixels_[index(x, y)]; }
    bool occupied(int x, int y) const { return at(x, y) != 0; }

    cplx center(int x, int y) const;
    std::optional<std::pair<int, int>> pixel_of(cplx z) const;

    std::size_t count_nonzero() const;
    const std::vector<std::uint32_t>& pixels() const { return pixels_; }
    std::vector<std::uint32_t>& pixels() { return pixels_; }

private:
    std::size_t index(int x, int y) const
    {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    BBox bbox_;
    int width_;
    int height_;
    PixelKind kind_;
    std::vector<std::uint32_t> pixels_;
};

/// Binary PGM (P5, maxval 255). Occupancy maps to 0/255; escape times are
/// scaled by `scale_max` and non-escaping pixels are written as 255.
std::string to_pgm(const GridImage& image, std::uint32_t scale_max = 0);
void write_pgm(const GridImage& image, const std::string& path, std::uint32_t scale_max = 0);

/// Reads a P5 file as an occupancy image (nonzero byte = occupied).
GridImage read_pgm(const std::string& path, const BBox& bbox = {});

/// Pixels of `a` and `b` that differ in occupancy, over the pixels occupied
/// in either one.
double symmetric_difference_fraction(const GridImage& a, const GridImage& b);

/// Largest Chebyshev pixel distance from an occupied pixel of `from` to the
/// nearest occupied pixel of `to`, capped at `cap`.
int max_pixel_distance(const GridImage& from, const GridImage& to, int cap = 8);

} // namespace semithermo
