#include "semithermo/image.hpp"
#include "semithermo/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace semithermo {

GridImage::GridImage(const GridSpec& grid, PixelKind kind)
    : bbox_(grid.bbox), width_(grid.width), height_(grid.height), kind_(kind)
{
    if (grid.width < 16 || grid.height < 16) {
        throw PreconditionError(fmt::format("grid {}x{} is smaller than 16x16", grid.width, grid.height));
    }
    if (!(bbox_.width() > 0.0) || !(bbox_.height() > 0.0)) {
        throw PreconditionError("degenerate bounding box");
    }
    pixels_.assign(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), 0);
}

cplx GridImage::center(int x, int y) const
{
    return {bbox_.re_min + (x + 0.5) * pixel_width(), bbox_.im_max - (y + 0.5) * pixel_height()};
}

std::optional<std::pair<int, int>> GridImage::pixel_of(cplx z) const
{
    const double fx = (z.real() - bbox_.re_min) / pixel_width();
    const double fy = (bbox_.im_max - z.imag()) / pixel_height();
    if (!(fx >= 0.0) || !(fy >= 0.0) || fx >= width_ || fy >= height_) {
        return std::nullopt;
    }
    return std::make_pair(static_cast<int>(fx), static_cast<int>(fy));
}

std::size_t GridImage::count_nonzero() const
{
    return static_cast<std::size_t>(std::count_if(pixels_.begin(), pixels_.end(), [](auto v) { return v != 0; }));
}

std::string to_pgm(const GridImage& image, std::uint32_t scale_max)
{
    std::string out = fmt::format("P5\n{} {}\n255\n", image.width(), image.height());
    out.reserve(out.size() + image.pixels().size());
    std::uint32_t top = scale_max;
    if (top == 0) {
        for (auto v : image.pixels()) {
            top = std::max(top, v);
        }
        top = std::max<std::uint32_t>(top, 1);
    }
    for (auto v : image.pixels()) {
        std::uint8_t b = 0;
        if (image.kind() == PixelKind::Occupancy) {
            b = v != 0 ? 255 : 0;
        } else if (v == 0) {
            b = 255;
        } else {
            b = static_cast<std::uint8_t>(std::min<std::uint64_t>(254, static_cast<std::uint64_t>(v) * 254 / top));
        }
        out.push_back(static_cast<char>(b));
    }
    return out;
}

void write_pgm(const GridImage& image, const std::string& path, std::uint32_t scale_max)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error(fmt::format("cannot open '{}' for writing", path));
    }
    const std::string bytes = to_pgm(image, scale_max);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

GridImage read_pgm(const std::string& path, const BBox& bbox)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ParseError(fmt::format("cannot open '{}'", path));
    }
    std::string magic;
    f >> magic;
    if (magic != "P5") {
        throw ParseError(fmt::format("'{}' is not a binary PGM (P5)", path));
    }
    auto next_int = [&]() {
        f >> std::ws;
        while (f.peek() == '#') {
            std::string line;
            std::getline(f, line);
            f >> std::ws;
        }
        int v = 0;
        if (!(f >> v)) {
            throw ParseError(fmt::format("malformed PGM header in '{}'", path));
        }
        return v;
    };
    const int w = next_int();
    const int h = next_int();
    const int maxval = next_int();
    if (maxval <= 0 || maxval > 255) {
        throw ParseError("only 8-bit PGM is supported");
    }
    f.get();
    GridImage img(GridSpec{bbox, w, h}, PixelKind::Occupancy);
    std::vector<char> data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    if (!f.read(data.data(), static_cast<std::streamsize>(data.size()))) {
        throw ParseError(fmt::format("truncated PGM data in '{}'", path));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        img.pixels()[i] = data[i] != 0 ? 1 : 0;
    }
    return img;
}

double symmetric_difference_fraction(const GridImage& a, const GridImage& b)
{
    if (a.width() != b.width() || a.height() != b.height()) {
        throw PreconditionError("images differ in size");
    }
    std::size_t diff = 0;
    std::size_t either = 0;
    for (std::size_t i = 0; i < a.pixels().size(); ++i) {
        const bool x = a.pixels()[i] != 0;
        const bool y = b.pixels()[i] != 0;
        diff += (x != y);
        either += (x || y);
    }
    return either == 0 ? 0.0 : static_cast<double>(diff) / static_cast<double>(either);
}

int max_pixel_distance(const GridImage& from, const GridImage& to, int cap)
{
    int worst = 0;
    for (int y = 0; y < from.height(); ++y) {
        for (int x = 0; x < from.width(); ++x) {
            if (!from.occupied(x, y)) {
                continue;
            }
            int best = cap;
            for (int r = 0; r < best; ++r) {
                bool found = false;
                for (int dy = -r; dy <= r && !found; ++dy) {
                    for (int dx = -r; dx <= r && !found; ++dx) {
                        if (std::max(std::abs(dx), std::abs(dy)) != r) {
                            continue;
                        }
                        const int xx = x + dx;
                        const int yy = y + dy;
                        if (xx >= 0 && yy >= 0 && xx < to.width() && yy < to.height() && to.occupied(xx, yy)) {
                            found = true;
                        }
                    }
                }
                if (found) {
                    best = r;
                }
            }
            worst = std::max(worst, best);
        }
    }
    return worst;
}

} // namespace semithermo
