#include "fmrmr/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fmrmr/error.hpp"

namespace fmrmr {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw ShapeError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
    }
}

void require_min_length(std::size_t n, std::size_t min, const char* what) {
    if (n < min) throw ShapeError(std::string(what) + ": need at least " + std::to_string(min) + " samples");
}

double mean_of(std::span<const double> u) {
    return order_free_sum({u.begin(), u.end()}) / static_cast<double>(u.size());
}

// Maps arbitrary real values onto dense category codes 0..k-1.
std::vector<int> categories_of(std::span<const double> v) {
    std::map<double, int> codes;
    for (double x : v) codes.emplace(x, 0);
    int next = 0;
    for (auto& [value, code] : codes) code = next++;
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = codes.at(v[i]);
    return out;
}

}  // namespace

double order_free_sum(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
}

PreparedColumn center_column(std::span<const double> u) {
    PreparedColumn p;
    p.n = u.size();
    const double m = mean_of(u);
    p.centered.resize(u.size());
    std::vector<double> sq(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        p.centered[i] = u[i] - m;
        sq[i] = p.centered[i] * p.centered[i];
    }
    p.sum_sq = order_free_sum(std::move(sq));
    return p;
}

double pearson_from_centered(const PreparedColumn& u, const PreparedColumn& v) {
    require_same_length(u.n, v.n, "abs_pearson");
    if (u.sum_sq <= 0.0 || v.sum_sq <= 0.0) return 0.0;
    std::vector<double> prod(u.n);
    for (std::size_t i = 0; i < u.n; ++i) prod[i] = u.centered[i] * v.centered[i];
    const double r = std::abs(order_free_sum(std::move(prod))) / std::sqrt(u.sum_sq * v.sum_sq);
    return std::min(r, 1.0);
}

double abs_pearson(std::span<const double> u, std::span<const double> v) {
    require_same_length(u.size(), v.size(), "abs_pearson");
    require_min_length(u.size(), 2, "abs_pearson");
    return pearson_from_centered(center_column(u), center_column(v));
}

std::vector<int> discretize3(std::span<const double> u) {
    require_min_length(u.size(), 2, "discretize3");
    const PreparedColumn c = center_column(u);
    const double half_sd = 0.5 * std::sqrt(c.sum_sq / static_cast<double>(u.size() - 1));
    std::vector<int> bins(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = c.centered[i];
        bins[i] = d < -half_sd ? 0 : (d > half_sd ? 2 : 1);
    }
    return bins;
}

double mutual_information_categorical(std::span<const int> a, std::span<const int> b) {
    require_same_length(a.size(), b.size(), "mutual_information");
    const std::size_t n = a.size();
    if (n == 0) return 0.0;
    std::map<std::pair<int, int>, std::size_t> joint;
    std::map<int, std::size_t> ma, mb;
    for (std::size_t i = 0; i < n; ++i) {
        ++joint[{a[i], b[i]}];
        ++ma[a[i]];
        ++mb[b[i]];
    }
    const double nn = static_cast<double>(n);
    std::vector<double> terms;
    terms.reserve(joint.size());
    for (const auto& [cell, count] : joint) {
        // count * n / (count_a * count_b); the integer product keeps the
        // result independent of argument order.
        const double ratio = static_cast<double>(count) * nn /
                             (static_cast<double>(ma[cell.first] * mb[cell.second]));
        terms.push_back(static_cast<double>(count) / nn * std::log(ratio));
    }
    return std::max(0.0, order_free_sum(std::move(terms)));
}

double mutual_information(std::span<const double> u, std::span<const double> v, bool v_is_label) {
    require_same_length(u.size(), v.size(), "mutual_information");
    require_min_length(u.size(), 2, "mutual_information");
    const auto bu = discretize3(u);
    const auto bv = v_is_label ? categories_of(v) : discretize3(v);
    return mutual_information_categorical(bu, bv);
}

double f_statistic(std::span<const double> u, std::span<const Label> y) {
    require_same_length(u.size(), y.size(), "f_statistic");
    require_both_classes(y, "f_statistic");
    require_min_length(u.size(), 3, "f_statistic");
    constexpr double K = 2.0;
    const double n = static_cast<double>(u.size());
    std::vector<double> group[2];
    for (std::size_t i = 0; i < u.size(); ++i) group[y[i] == 1 ? 1 : 0].push_back(u[i]);

    const double grand = mean_of(u);
    double between = 0.0, within = 0.0;
    for (const auto& g : group) {
        const PreparedColumn c = center_column(g);
        const double m = mean_of(g);
        between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
        within += c.sum_sq;  // (n_k - 1) * unbiased variance
    }
    const double num = between / (K - 1.0);
    const double den = within / (n - K);
    if (den <= 0.0) return num <= 0.0 ? 0.0 : kFStatisticCap;
    return std::min(num / den, kFStatisticCap);
}

PreparedColumn distance_center_column(std::span<const double> u) {
    PreparedColumn p;
    const std::size_t n = u.size();
    p.n = n;
    p.dcenter.resize(n * n);
    std::vector<double> row_mean(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double d = std::abs(u[j] - u[k]);
            p.dcenter[j * n + k] = d;
            s += d;
        }
        row_mean[j] = s / static_cast<double>(n);
    }
    double grand = 0.0;
    for (double r : row_mean) grand += r;
    grand /= static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) p.dcenter[j * n + k] += grand - row_mean[j] - row_mean[k];
    }
    p.dself = dcov_from_centered(p, p);
    return p;
}

double dcov_from_centered(const PreparedColumn& u, const PreparedColumn& v) {
    require_same_length(u.n, v.n, "dcov_sq");
    const std::size_t nn = u.n * u.n;
    const double* a = u.dcenter.data();
    const double* b = v.dcenter.data();
    double s = 0.0;
    for (std::size_t i = 0; i < nn; ++i) s += a[i] * b[i];
    const double n = static_cast<double>(u.n);
    return std::max(0.0, s / (n * n));
}

double dcor_from_centered(const PreparedColumn& u, const PreparedColumn& v) {
    if (!(u.dself > 0.0) || !(v.dself > 0.0)) return 0.0;
    const double r = dcov_from_centered(u, v) / std::sqrt(u.dself * v.dself);
    return std::clamp(r, 0.0, 1.0);
}

double dcov_sq(std::span<const double> u, std::span<const double> v) {
    require_same_length(u.size(), v.size(), "dcov_sq");
    require_min_length(u.size(), 2, "dcov_sq");
    return dcov_from_centered(distance_center_column(u), distance_center_column(v));
}

double dcor_sq(std::span<const double> u, std::span<const double> v) {
    require_same_length(u.size(), v.size(), "dcor_sq");
    require_min_length(u.size(), 2, "dcor_sq");
    return dcor_from_centered(distance_center_column(u), distance_center_column(v));
}

std::string_view measure_name(MeasureKind kind) noexcept {
    switch (kind) {
        case MeasureKind::C: return "C";
        case MeasureKind::MI: return "MI";
        case MeasureKind::FC: return "FC";
        case MeasureKind::V: return "V";
        case MeasureKind::R: return "R";
    }
    return "?";
}

MeasureKind measure_kind_from_name(std::string_view name) {
    if (name == "C") return MeasureKind::C;
    if (name == "MI") return MeasureKind::MI;
    if (name == "FC") return MeasureKind::FC;
    if (name == "V") return MeasureKind::V;
    if (name == "R") return MeasureKind::R;
    throw ConfigError("unknown association measure '" + std::string(name) + "' (expected C, MI, FC, V or R)");
}

AssociationMeasure measure_from_name(std::string_view name) {
    return AssociationMeasure(measure_kind_from_name(name));
}

std::string_view AssociationMeasure::name() const noexcept { return measure_name(kind_); }

double AssociationMeasure::relevance(std::span<const double> x, std::span<const Label> y) const {
    require_same_length(x.size(), y.size(), "relevance");
    require_both_classes(y, "relevance");
    const auto yr = labels_as_real(y);
    switch (kind_) {
        case MeasureKind::C: return abs_pearson(x, yr);
        case MeasureKind::MI: return mutual_information(x, yr, true);
        case MeasureKind::FC: return f_statistic(x, y);
        case MeasureKind::V: return dcov_sq(x, yr);
        case MeasureKind::R: return dcor_sq(x, yr);
    }
    return 0.0;
}

PreparedColumn AssociationMeasure::prepare(std::span<const double> u) const {
    require_min_length(u.size(), 2, "prepare");
    switch (kind_) {
        case MeasureKind::C:
        case MeasureKind::FC: return center_column(u);
        case MeasureKind::MI: {
            PreparedColumn p;
            p.n = u.size();
            p.bins = discretize3(u);
            return p;
        }
        case MeasureKind::V:
        case MeasureKind::R: return distance_center_column(u);
    }
    return {};
}

double AssociationMeasure::redundancy(const PreparedColumn& u, const PreparedColumn& v) const {
    switch (kind_) {
        case MeasureKind::C:
        case MeasureKind::FC: return pearson_from_centered(u, v);
        case MeasureKind::MI: return mutual_information_categorical(u.bins, v.bins);
        case MeasureKind::V: return dcov_from_centered(u, v);
        case MeasureKind::R: return dcor_from_centered(u, v);
    }
    return 0.0;
}

double AssociationMeasure::redundancy(std::span<const double> u, std::span<const double> v) const {
    require_same_length(u.size(), v.size(), "redundancy");
    return redundancy(prepare(u), prepare(v));
}

std::size_t AssociationMeasure::prepared_footprint(std::size_t n) const noexcept {
    switch (kind_) {
        case MeasureKind::V:
        case MeasureKind::R: return n * n;
        default: return n;
    }
}

}  // namespace fmrmr
