#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "outagekit/geometry.hpp"

namespace outagekit::detail {

// Bucket grid over a planar box with cells no smaller than `min_cell`, so all
// neighbours within min_cell of a point lie in the surrounding 3x3 block.
class CellGrid {
public:
    CellGrid(std::span<const Point> pts, double x0, double y0, double wx, double wy, double min_cell,
             bool periodic, std::size_t max_cells = std::size_t{1} << 22)
        : x0_(x0), y0_(y0), periodic_(periodic) {
        nx_ = cells_along(wx, min_cell);
        ny_ = cells_along(wy, min_cell);
        while (static_cast<std::size_t>(nx_) * ny_ > max_cells) {
            nx_ = std::max(1, nx_ / 2);
            ny_ = std::max(1, ny_ / 2);
        }
        cx_ = wx / nx_;
        cy_ = wy / ny_;
        std::vector<std::uint32_t> cell_of(pts.size());
        start_.assign(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            cell_of[i] = static_cast<std::uint32_t>(index(ix(pts[i][0]), iy(pts[i][1])));
            ++start_[cell_of[i] + 1];
        }
        for (std::size_t c = 1; c < start_.size(); ++c) {
            start_[c] += start_[c - 1];
        }
        items_.resize(pts.size());
        std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            items_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
        }
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int ix(double x) const { return std::clamp(static_cast<int>(std::floor((x - x0_) / cx_)), 0, nx_ - 1); }
    int iy(double y) const { return std::clamp(static_cast<int>(std::floor((y - y0_) / cy_)), 0, ny_ - 1); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

    std::span<std::uint32_t> cell(std::size_t c) { return {items_.data() + start_[c], items_.data() + start_[c + 1]}; }
    std::span<const std::uint32_t> cell(std::size_t c) const {
        return {items_.data() + start_[c], items_.data() + start_[c + 1]};
    }
    std::size_t cell_count() const { return start_.size() - 1; }

    // Calls f(cell_index) for every distinct cell in the 3x3 block around (i, j).
    template <class F>
    void for_each_adjacent(int i, int j, F&& f) const {
        int xs[3], ys[3];
        const int nxs = neighbours(i, nx_, xs);
        const int nys = neighbours(j, ny_, ys);
        for (int b = 0; b < nys; ++b) {
            for (int a = 0; a < nxs; ++a) {
                f(index(xs[a], ys[b]));
            }
        }
    }

private:
    static int cells_along(double w, double min_cell) {
        if (!(min_cell > 0.0)) {
            return 1;
        }
        const double n = std::floor(w / min_cell);
        return static_cast<int>(std::clamp(n, 1.0, 65536.0));
    }

    int neighbours(int i, int n, int* out) const {
        if (periodic_) {
            if (n <= 3) {
                for (int k = 0; k < n; ++k) {
                    out[k] = k;
                }
                return n;
            }
            out[0] = (i + n - 1) % n;
            out[1] = i;
            out[2] = (i + 1) % n;
            return 3;
        }
        int m = 0;
        for (int k = std::max(0, i - 1); k <= std::min(n - 1, i + 1); ++k) {
            out[m++] = k;
        }
        return m;
    }

    double x0_, y0_;
    bool periodic_;
    int nx_ = 1, ny_ = 1;
    double cx_ = 1.0, cy_ = 1.0;
    std::vector<std::uint32_t> start_;
    std::vector<std::uint32_t> items_;
};

}  // namespace outagekit::detail
