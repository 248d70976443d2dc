#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fmrmr/core.hpp"

namespace fmrmr {

/// Returned by f_statistic when the within-class variance vanishes but the
/// class means differ.
inline constexpr double kFStatisticCap = 1e12;

/// |sample Pearson correlation|, 0 when either vector is constant.
double abs_pearson(std::span<const double> u, std::span<const double> v);

/// Three bins cut at mean -/+ sd/2 (sample sd, n - 1 denominator).
/// Points exactly on a cut go to the middle bin.
std::vector<int> discretize3(std::span<const double> u);

/// Plug-in mutual information (natural log) of two categorical vectors.
double mutual_information_categorical(std::span<const int> a, std::span<const int> b);

/// u is always discretized with discretize3; v too unless v_is_label, in
/// which case its distinct values are the categories.
double mutual_information(std::span<const double> u, std::span<const double> v, bool v_is_label);

/// One-way ANOVA F statistic of u grouped by a binary label.
double f_statistic(std::span<const double> u, std::span<const Label> y);

/// Squared sample distance covariance (biased V-statistic, double-centered
/// distance matrices). Clamped at 0.
double dcov_sq(std::span<const double> u, std::span<const double> v);

/// Squared sample distance correlation in [0, 1]; 0 when either self term is 0.
double dcor_sq(std::span<const double> u, std::span<const double> v);

enum class MeasureKind { C, MI, FC, V, R };

/// Per-variable precomputation shared by all pair evaluations against that
/// variable. Which fields are populated depends on the measure.
struct PreparedColumn {
    std::vector<double> centered;        // C, FC: u - mean(u)
    double sum_sq = 0.0;                 // C, FC: sum of centered squares
    std::vector<int> bins;               // MI
    std::vector<double> dcenter;         // V, R: double-centered distances, n*n
    double dself = 0.0;                  // V, R: dcov_sq(u, u)
    std::size_t n = 0;
};

/// A named association measure I(., .) usable for relevance (variable vs.
/// label) and redundancy (variable vs. variable).
class AssociationMeasure {
public:
    explicit AssociationMeasure(MeasureKind kind) : kind_(kind) {}

    MeasureKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept;

    double relevance(std::span<const double> x, std::span<const Label> y) const;
    double redundancy(std::span<const double> u, std::span<const double> v) const;

    PreparedColumn prepare(std::span<const double> u) const;
    double redundancy(const PreparedColumn& u, const PreparedColumn& v) const;

    /// Doubles stored by prepare() for a column of n samples; lets callers
    /// budget memory before caching every column.
    std::size_t prepared_footprint(std::size_t n) const noexcept;

private:
    MeasureKind kind_;
};

/// "C" | "MI" | "FC" | "V" | "R"; throws ConfigError otherwise.
AssociationMeasure measure_from_name(std::string_view name);
MeasureKind measure_kind_from_name(std::string_view name);
std::string_view measure_name(MeasureKind kind) noexcept;

/// Building blocks, exposed for callers that cache per-variable work.
PreparedColumn center_column(std::span<const double> u);
PreparedColumn distance_center_column(std::span<const double> u);
double pearson_from_centered(const PreparedColumn& u, const PreparedColumn& v);
double dcov_from_centered(const PreparedColumn& u, const PreparedColumn& v);
double dcor_from_centered(const PreparedColumn& u, const PreparedColumn& v);

/// Sum that depends only on the multiset of terms, not their order.
double order_free_sum(std::vector<double> terms);

}  // namespace fmrmr
