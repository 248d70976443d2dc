#include "fmrmr/core.hpp"

#include <cmath>

#include "fmrmr/error.hpp"

namespace fmrmr {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("matrix data size " + std::to_string(data_.size()) + " != " +
                         std::to_string(rows_) + "x" + std::to_string(cols_));
    }
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
    Matrix out(rows_, cols.size());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] >= cols_) throw IndexError("column index out of range");
            out(r, k) = (*this)(r, cols[k]);
        }
    }
    return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
    Matrix out(rows.size(), cols_);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k] >= rows_) throw IndexError("row index out of range");
        auto src = row(rows[k]);
        std::copy(src.begin(), src.end(), out.row(k).begin());
    }
    return out;
}

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) throw ShapeError("grid must have at least one point");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double t = points_[i];
        if (!(t > 0.0 && t <= 1.0)) throw ConfigError("grid points must lie in (0, 1]");
        if (i > 0 && !(t > points_[i - 1])) throw ConfigError("grid points must be strictly increasing");
    }
}

Grid make_default_grid() {
    std::vector<double> t(100);
    for (std::size_t i = 1; i <= 100; ++i) t[i - 1] = static_cast<double>(i + 4) / 105.0;
    return Grid(std::move(t));
}

Grid make_ordinal_grid(std::size_t n_points) {
    std::vector<double> t(n_points);
    for (std::size_t i = 1; i <= n_points; ++i) t[i - 1] = static_cast<double>(i) / static_cast<double>(n_points);
    return Grid(std::move(t));
}

FunctionalDataset::FunctionalDataset(Grid grid, Matrix values, Labels labels)
    : grid_(std::move(grid)), values_(std::move(values)), labels_(std::move(labels)) {
    if (values_.cols() != grid_.size()) {
        throw ShapeError("dataset has " + std::to_string(values_.cols()) + " columns but grid has " +
                         std::to_string(grid_.size()) + " points");
    }
    if (labels_.size() != values_.rows()) throw ShapeError("label count does not match trajectory count");
    for (Label y : labels_) {
        if (y != 0 && y != 1) throw LabelError("labels must be 0 or 1");
    }
    for (double v : values_.data()) {
        if (!std::isfinite(v)) throw NumericalError("dataset contains non-finite values");
    }
}

std::pair<std::size_t, std::size_t> FunctionalDataset::class_counts() const noexcept {
    std::size_t ones = 0;
    for (Label y : labels_) ones += (y == 1);
    return {labels_.size() - ones, ones};
}

bool FunctionalDataset::has_both_classes() const noexcept {
    auto [c0, c1] = class_counts();
    return c0 > 0 && c1 > 0;
}

FunctionalDataset FunctionalDataset::subset(std::span<const std::size_t> rows) const {
    Labels y(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k] >= labels_.size()) throw IndexError("row index out of range");
        y[k] = labels_[rows[k]];
    }
    return FunctionalDataset(grid_, values_.select_rows(rows), std::move(y));
}

std::vector<double> column(const FunctionalDataset& dataset, std::size_t j) {
    if (j < 1 || j > dataset.n_points()) {
        throw IndexError("grid index " + std::to_string(j) + " outside [1, " +
                         std::to_string(dataset.n_points()) + "]");
    }
    return dataset.values().column(j - 1);
}

std::vector<double> labels_as_real(std::span<const Label> labels) {
    return {labels.begin(), labels.end()};
}

void require_both_classes(std::span<const Label> labels, const char* context) {
    bool zero = false, one = false;
    for (Label y : labels) {
        zero |= (y == 0);
        one |= (y == 1);
    }
    if (!zero || !one) throw DegenerateClassesError(std::string(context) + ": both classes must be present");
}

}  // namespace fmrmr
