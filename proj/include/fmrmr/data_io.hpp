#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fmrmr/core.hpp"
#include "fmrmr/harness.hpp"

namespace fmrmr {

/// Reads a curve file: header of grid times (or ordinal column names) plus a
/// trailing "label" column, then one trajectory per row.
///
/// Header cells that are all numeric, strictly increasing and inside (0, 1]
/// become the grid. Anything else (1..N, "x1", ...) maps to the i/N grid.
FunctionalDataset load_csv(const std::string& path);
FunctionalDataset parse_csv(std::string_view text);

/// Header carries the grid times; values use %.17g so they read back exactly.
std::string to_csv(const FunctionalDataset& dataset);
void write_csv(const std::string& path, const FunctionalDataset& dataset);

/// Finite-difference derivative of every trajectory on the dataset's grid.
/// Three-point stencils: centered inside, one-sided at the two ends (exact
/// for quadratics on any grid). Order 1 with N == 2 falls back to the slope.
FunctionalDataset differentiate(const FunctionalDataset& dataset, int order);

struct CVPlan {
    enum class Kind { LeaveOneOut, KFold };
    Kind kind = Kind::LeaveOneOut;
    std::size_t k = 0;
    std::uint64_t seed = 0;

    static CVPlan leave_one_out() { return {}; }
    static CVPlan kfold(std::size_t k, std::uint64_t seed) { return {Kind::KFold, k, seed}; }
};

/// Held-out index sets (0-based). K-fold shuffles with the seed and deals
/// positions round-robin, so sizes differ by at most one.
std::vector<std::vector<std::size_t>> cv_folds(std::size_t n, const CVPlan& plan);

struct CVResult {
    double accuracy = 0.0;   // pooled over the scored held-out points
    double mean_dim = 0.0;   // over scored folds
    std::size_t folds = 0;
    std::size_t fits = 0;    // scored folds
    std::vector<std::size_t> skipped_folds;  // training fold held one class
};

/// For each fold: split the training part 80/20 (stratified, seeded), select
/// on the 80 %, tune (dim, hyperparameter) on the 20 %, then select again on
/// the whole training part, refit and score the held-out fold.
CVResult cross_validate(const FunctionalDataset& dataset, const CVPlan& plan, std::string_view method,
                        std::string_view classifier, const ExperimentConfig& config, unsigned threads = 1);

}  // namespace fmrmr
