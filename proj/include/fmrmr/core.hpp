#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fmrmr {

/// Dense row-major matrix of doubles. Row = one trajectory (or one sample).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::vector<double> column(std::size_t c) const;

    /// New matrix holding the given columns (0-based) in the given order.
    Matrix select_columns(std::span<const std::size_t> cols) const;
    /// New matrix holding the given rows (0-based) in the given order.
    Matrix select_rows(std::span<const std::size_t> rows) const;

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

using Label = std::int32_t;
using Labels = std::vector<Label>;

/// Ordered time points in (0, 1], strictly increasing.
class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<double> points);

    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t i) const noexcept { return points_[i]; }
    const std::vector<double>& points() const noexcept { return points_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::vector<double> points_;
};

/// The 100-point simulation grid t_i = (i + 4) / 105, i = 1..100.
Grid make_default_grid();

/// Equi-spaced grid i / N, i = 1..N.
Grid make_ordinal_grid(std::size_t n_points);

/// n trajectories observed on a shared grid, with binary labels.
class FunctionalDataset {
public:
    FunctionalDataset() = default;
    FunctionalDataset(Grid grid, Matrix values, Labels labels);

    const Grid& grid() const noexcept { return grid_; }
    const Matrix& values() const noexcept { return values_; }
    const Labels& labels() const noexcept { return labels_; }

    std::size_t n_samples() const noexcept { return values_.rows(); }
    std::size_t n_points() const noexcept { return values_.cols(); }

    /// Counts of class 0 and class 1.
    std::pair<std::size_t, std::size_t> class_counts() const noexcept;
    bool has_both_classes() const noexcept;

    /// Subset of trajectories, in the given order.
    FunctionalDataset subset(std::span<const std::size_t> rows) const;

    friend bool operator==(const FunctionalDataset&, const FunctionalDataset&) = default;

private:
    Grid grid_;
    Matrix values_;
    Labels labels_;
};

/// The j-th variable (1-based grid index) across all trajectories.
std::vector<double> column(const FunctionalDataset& dataset, std::size_t j);

/// Labels as doubles, for measures that treat the response numerically.
std::vector<double> labels_as_real(std::span<const Label> labels);

void require_both_classes(std::span<const Label> labels, const char* context);

enum class Criterion { Difference, Quotient };

/// Ordered output of a selection run. Indices are 1-based grid indices.
struct SelectionResult {
    std::vector<std::size_t> indices;
    std::vector<double> step_scores;
    std::string measure_name;
    Criterion criterion = Criterion::Difference;
};

struct RngSeed {
    std::uint64_t value = 0;
};

}  // namespace fmrmr
