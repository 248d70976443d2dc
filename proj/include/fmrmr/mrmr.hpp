#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fmrmr/core.hpp"
#include "fmrmr/measures.hpp"

namespace fmrmr {

/// "D" | "Q".
Criterion criterion_from_name(std::string_view name);
std::string_view criterion_name(Criterion c) noexcept;

/// Relevance of every variable plus a lazily filled, symmetric redundancy
/// table. Confined to a single selection run; not thread-safe.
///
/// All indices are 1-based grid indices.
class RelevanceCache {
public:
    /// Doubles of prepared per-variable state kept resident before falling
    /// back to re-preparing candidates on every step.
    static constexpr std::size_t kDefaultPreparedBudget = std::size_t{1} << 24;

    RelevanceCache(const FunctionalDataset& dataset, AssociationMeasure measure,
                   std::size_t prepared_budget = kDefaultPreparedBudget);

    std::size_t n_points() const noexcept { return rel_.size(); }
    const AssociationMeasure& measure() const noexcept { return measure_; }

    double rel(std::size_t j) const;
    const std::vector<double>& relevance() const noexcept { return rel_; }

    /// I(X_i, X_j). Fills row i on first use unless row j is already present.
    double red(std::size_t i, std::size_t j);

    /// Number of redundancy rows computed so far.
    std::size_t filled_rows() const noexcept;

private:
    const std::vector<double>& row(std::size_t i0);
    const PreparedColumn& prepared(std::size_t j0, PreparedColumn& scratch);

    const FunctionalDataset& dataset_;
    AssociationMeasure measure_;
    std::vector<double> rel_;
    std::vector<std::optional<std::vector<double>>> red_rows_;
    std::vector<std::optional<PreparedColumn>> prepared_;
    bool cache_all_prepared_;
};

/// Rel(S): mean relevance over S.
double relevance_of_set(const RelevanceCache& cache, std::span<const std::size_t> set);

/// Red(S): (1/|S|^2) * sum over all ordered pairs of S, diagonal included.
double redundancy_of_set(RelevanceCache& cache, std::span<const std::size_t> set);

/// Greedy mRMR with the incremental criterion: first the most relevant
/// variable, then repeatedly the unselected j maximizing
///   rel[j] - mean_{i in S} red[j, i]      (Difference)
///   rel[j] / mean_{i in S} red[j, i]      (Quotient)
/// Ties go to the smallest index. A zero mean redundancy under Quotient ranks
/// above every finite ratio, ordered by relevance; its step score is +inf.
SelectionResult select(const FunctionalDataset& dataset, const AssociationMeasure& measure, Criterion criterion,
                       std::size_t k_max);

/// Top-k variables by relevance alone.
SelectionResult select_by_max_relevance(const FunctionalDataset& dataset, const AssociationMeasure& measure,
                                        std::size_t k_max);

}  // namespace fmrmr
