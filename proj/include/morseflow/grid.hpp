#ifndef MORSEFLOW_GRID_HPP_
#define MORSEFLOW_GRID_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace morseflow {

// Uniform box grid: each axis of the box is split into 2^depth equal cells,
// so the cell count is 2^(depth*dim). Cells are half-open on every axis
// except at the upper box face.
class Grid {
public:
    Grid() = default;
    Grid(std::vector<std::array<double, 2>> box, int depth)
        : box_(std::move(box)), depth_(depth) {
        per_axis_ = std::int64_t(1) << depth_;
        widths_.resize(box_.size());
        for (std::size_t k = 0; k < box_.size(); ++k)
            widths_[k] = (box_[k][1] - box_[k][0]) / static_cast<double>(per_axis_);
    }

    int dim() const { return static_cast<int>(box_.size()); }
    int depth() const { return depth_; }
    std::int64_t cells_per_axis() const { return per_axis_; }
    const std::vector<std::array<double, 2>>& box() const { return box_; }
    double width(int axis) const { return widths_[static_cast<std::size_t>(axis)]; }

    std::int64_t cell_count() const {
        std::int64_t n = 1;
        for (int k = 0; k < dim(); ++k) n *= per_axis_;
        return n;
    }

    std::int64_t linear_index(const std::vector<std::int64_t>& multi) const {
        std::int64_t id = 0, stride = 1;
        for (int k = 0; k < dim(); ++k) {
            id += multi[static_cast<std::size_t>(k)] * stride;
            stride *= per_axis_;
        }
        return id;
    }

    std::vector<std::int64_t> multi_index(std::int64_t id) const {
        std::vector<std::int64_t> m(static_cast<std::size_t>(dim()));
        for (int k = 0; k < dim(); ++k) {
            m[static_cast<std::size_t>(k)] = id % per_axis_;
            id /= per_axis_;
        }
        return m;
    }

    // Cell containing p, or nullopt when p lies outside the box.
    std::optional<std::int64_t> cell_of_point(const std::vector<double>& p) const {
        std::vector<std::int64_t> m(static_cast<std::size_t>(dim()));
        for (int k = 0; k < dim(); ++k) {
            const double v = p[static_cast<std::size_t>(k)];
            const auto& [lo, hi] = box_[static_cast<std::size_t>(k)];
            if (!(v >= lo && v <= hi)) return std::nullopt;
            std::int64_t i = static_cast<std::int64_t>(
                std::floor((v - lo) / widths_[static_cast<std::size_t>(k)]));
            if (i >= per_axis_) i = per_axis_ - 1;  // upper face belongs to the last cell
            if (i < 0) i = 0;
            m[static_cast<std::size_t>(k)] = i;
        }
        return linear_index(m);
    }

    std::vector<std::array<double, 2>> cell_bounds(std::int64_t id) const {
        const auto m = multi_index(id);
        std::vector<std::array<double, 2>> b(static_cast<std::size_t>(dim()));
        for (int k = 0; k < dim(); ++k) {
            const double lo = box_[static_cast<std::size_t>(k)][0] +
                              static_cast<double>(m[static_cast<std::size_t>(k)]) *
                                  widths_[static_cast<std::size_t>(k)];
            b[static_cast<std::size_t>(k)] = {lo, lo + widths_[static_cast<std::size_t>(k)]};
        }
        return b;
    }

    std::vector<double> cell_center(std::int64_t id) const {
        const auto b = cell_bounds(id);
        std::vector<double> c(b.size());
        for (std::size_t k = 0; k < b.size(); ++k) c[k] = 0.5 * (b[k][0] + b[k][1]);
        return c;
    }

private:
    std::vector<std::array<double, 2>> box_;
    int depth_ = 0;
    std::int64_t per_axis_ = 1;
    std::vector<double> widths_;
};

}  // namespace morseflow

#endif  // MORSEFLOW_GRID_HPP_
