#pragma once

#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <random>
#include <vector>

#include "fmrmr/core.hpp"

namespace testutil {

inline std::vector<double> normal_vector(std::mt19937_64& rng, std::size_t n, double sd = 1.0) {
    std::normal_distribution<double> d(0.0, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

// Labels with both classes present.
inline fmrmr::Labels random_labels(std::mt19937_64& rng, std::size_t n) {
    std::bernoulli_distribution coin(0.5);
    fmrmr::Labels y(n);
    do {
        for (auto& l : y) l = coin(rng) ? 1 : 0;
    } while (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), 0) == 0);
    return y;
}

// n x N dataset whose first `informative` columns shift with the label.
inline fmrmr::FunctionalDataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t N,
                                               std::size_t informative = 2) {
    fmrmr::Labels y = random_labels(rng, n);
    fmrmr::Matrix X(n, N);
    std::normal_distribution<double> d(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < N; ++j) X(i, j) = d(rng) + (j < informative ? 1.5 * y[i] / (j + 1.0) : 0.0);
    return fmrmr::FunctionalDataset(fmrmr::make_ordinal_grid(N), std::move(X), std::move(y));
}

}  // namespace testutil
