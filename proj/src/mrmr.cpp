#include "fmrmr/mrmr.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "fmrmr/error.hpp"

namespace fmrmr {

Criterion criterion_from_name(std::string_view name) {
    if (name == "D") return Criterion::Difference;
    if (name == "Q") return Criterion::Quotient;
    throw ConfigError("unknown criterion '" + std::string(name) + "' (expected D or Q)");
}

std::string_view criterion_name(Criterion c) noexcept { return c == Criterion::Difference ? "D" : "Q"; }

RelevanceCache::RelevanceCache(const FunctionalDataset& dataset, AssociationMeasure measure,
                               std::size_t prepared_budget)
    : dataset_(dataset),
      measure_(measure),
      red_rows_(dataset.n_points()),
      prepared_(dataset.n_points()) {
    require_both_classes(dataset.labels(), "relevance");
    const std::size_t N = dataset.n_points();
    rel_.resize(N);
    for (std::size_t j = 0; j < N; ++j) rel_[j] = measure_.relevance(dataset.values().column(j), dataset.labels());
    cache_all_prepared_ = N * measure_.prepared_footprint(dataset.n_samples()) <= prepared_budget;
}

double RelevanceCache::rel(std::size_t j) const {
    if (j < 1 || j > rel_.size()) throw IndexError("grid index " + std::to_string(j) + " out of range");
    return rel_[j - 1];
}

const PreparedColumn& RelevanceCache::prepared(std::size_t j0, PreparedColumn& scratch) {
    if (prepared_[j0]) return *prepared_[j0];
    if (cache_all_prepared_ || red_rows_[j0]) {
        prepared_[j0] = measure_.prepare(dataset_.values().column(j0));
        return *prepared_[j0];
    }
    scratch = measure_.prepare(dataset_.values().column(j0));
    return scratch;
}

const std::vector<double>& RelevanceCache::row(std::size_t i0) {
    if (red_rows_[i0]) return *red_rows_[i0];
    const std::size_t N = rel_.size();
    std::vector<double> out(N);
    // Row owners stay resident so later rows can reuse their preparation.
    red_rows_[i0].emplace();
    PreparedColumn scratch_i, scratch_j;
    const PreparedColumn& pi = prepared(i0, scratch_i);
    for (std::size_t j0 = 0; j0 < N; ++j0) {
        if (red_rows_[j0] && j0 != i0 && !red_rows_[j0]->empty()) {
            out[j0] = (*red_rows_[j0])[i0];
            continue;
        }
        out[j0] = measure_.redundancy(pi, prepared(j0, scratch_j));
    }
    red_rows_[i0] = std::move(out);
    return *red_rows_[i0];
}

double RelevanceCache::red(std::size_t i, std::size_t j) {
    const std::size_t N = rel_.size();
    if (i < 1 || i > N || j < 1 || j > N) throw IndexError("grid index out of range");
    if (!red_rows_[i - 1] && red_rows_[j - 1]) return row(j - 1)[i - 1];
    return row(i - 1)[j - 1];
}

std::size_t RelevanceCache::filled_rows() const noexcept {
    return static_cast<std::size_t>(std::count_if(red_rows_.begin(), red_rows_.end(),
                                                  [](const auto& r) { return r.has_value(); }));
}

double relevance_of_set(const RelevanceCache& cache, std::span<const std::size_t> set) {
    if (set.empty()) throw EmptySetError("Rel(S) of an empty set");
    double s = 0.0;
    for (std::size_t t : set) s += cache.rel(t);
    return s / static_cast<double>(set.size());
}

double redundancy_of_set(RelevanceCache& cache, std::span<const std::size_t> set) {
    if (set.empty()) throw EmptySetError("Red(S) of an empty set");
    double s = 0.0;
    for (std::size_t a : set)
        for (std::size_t b : set) s += cache.red(a, b);
    const double c = static_cast<double>(set.size());
    return s / (c * c);
}

namespace {

void check_k(std::size_t k_max, std::size_t N) {
    if (k_max < 1) throw ConfigError("k_max must be at least 1");
    if (k_max > N) {
        throw ConfigError("k_max = " + std::to_string(k_max) + " exceeds the number of variables " +
                          std::to_string(N));
    }
}

std::size_t most_relevant(const std::vector<double>& rel) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < rel.size(); ++j)
        if (rel[j] > rel[best]) best = j;
    return best;
}

}  // namespace

SelectionResult select(const FunctionalDataset& dataset, const AssociationMeasure& measure, Criterion criterion,
                       std::size_t k_max) {
    const std::size_t N = dataset.n_points();
    check_k(k_max, N);
    RelevanceCache cache(dataset, measure);
    const auto& rel = cache.relevance();

    SelectionResult result;
    result.measure_name = std::string(measure.name());
    result.criterion = criterion;

    std::vector<bool> chosen(N, false);
    std::vector<double> red_sum(N, 0.0);
    std::size_t last = most_relevant(rel);
    chosen[last] = true;
    result.indices.push_back(last + 1);
    result.step_scores.push_back(rel[last]);

    constexpr double kInf = std::numeric_limits<double>::infinity();
    while (result.indices.size() < k_max) {
        const double card = static_cast<double>(result.indices.size());
        std::size_t best = N;
        bool best_unbounded = false;
        double best_score = -kInf;
        double best_rel = -kInf;
        for (std::size_t j = 0; j < N; ++j) {
            if (chosen[j]) continue;
            red_sum[j] += cache.red(last + 1, j + 1);
            const double mean_red = red_sum[j] / card;
            if (criterion == Criterion::Difference) {
                const double score = rel[j] - mean_red;
                if (best == N || score > best_score) {
                    best = j;
                    best_score = score;
                }
            } else if (mean_red <= 0.0) {
                if (best == N || !best_unbounded || rel[j] > best_rel) {
                    best = j;
                    best_unbounded = true;
                    best_rel = rel[j];
                    best_score = kInf;
                }
            } else if (!best_unbounded) {
                const double score = rel[j] / mean_red;
                if (best == N || score > best_score) {
                    best = j;
                    best_score = score;
                }
            }
        }
        chosen[best] = true;
        last = best;
        result.indices.push_back(best + 1);
        result.step_scores.push_back(best_score);
    }
    return result;
}

SelectionResult select_by_max_relevance(const FunctionalDataset& dataset, const AssociationMeasure& measure,
                                        std::size_t k_max) {
    const std::size_t N = dataset.n_points();
    check_k(k_max, N);
    require_both_classes(dataset.labels(), "relevance");
    std::vector<double> rel(N);
    for (std::size_t j = 0; j < N; ++j) rel[j] = measure.relevance(dataset.values().column(j), dataset.labels());
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rel[a] > rel[b]; });

    SelectionResult result;
    result.measure_name = std::string(measure.name());
    result.criterion = Criterion::Difference;
    for (std::size_t k = 0; k < k_max; ++k) {
        result.indices.push_back(order[k] + 1);
        result.step_scores.push_back(rel[order[k]]);
    }
    return result;
}

}  // namespace fmrmr
