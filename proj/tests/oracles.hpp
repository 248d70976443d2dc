#pragma once

// Reference implementations used by both the unit tests and the acceptance
// binary. They recompute everything from raw columns on every step.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "fmrmr/classifiers.hpp"
#include "fmrmr/core.hpp"
#include "fmrmr/measures.hpp"

namespace oracle {

// Greedy mRMR recomputed from scratch at every step.
inline std::vector<std::size_t> brute_force_select(const fmrmr::FunctionalDataset& ds,
                                                   const fmrmr::AssociationMeasure& m, fmrmr::Criterion crit,
                                                   std::size_t k) {
    const std::size_t N = ds.n_points();
    std::vector<double> rel(N);
    for (std::size_t j = 0; j < N; ++j) rel[j] = m.relevance(ds.values().column(j), ds.labels());
    std::vector<std::size_t> S;
    std::vector<bool> used(N, false);
    std::size_t first = 0;
    for (std::size_t j = 1; j < N; ++j)
        if (rel[j] > rel[first]) first = j;
    S.push_back(first);
    used[first] = true;
    const double inf = std::numeric_limits<double>::infinity();
    while (S.size() < k) {
        std::size_t best = N;
        double best_key1 = -inf, best_key2 = -inf;  // (score, rel) with unbounded quotients first
        for (std::size_t j = 0; j < N; ++j) {
            if (used[j]) continue;
            double sum = 0.0;
            for (std::size_t i : S) sum += m.redundancy(ds.values().column(j), ds.values().column(i));
            const double mean = sum / static_cast<double>(S.size());
            double key1, key2 = 0.0;
            if (crit == fmrmr::Criterion::Difference) {
                key1 = rel[j] - mean;
            } else if (mean <= 0.0) {
                key1 = inf;
                key2 = rel[j];
            } else {
                key1 = rel[j] / mean;
            }
            if (best == N || key1 > best_key1 || (key1 == inf && best_key1 == inf && key2 > best_key2)) {
                best = j;
                best_key1 = key1;
                best_key2 = key2;
            }
        }
        S.push_back(best);
        used[best] = true;
    }
    for (auto& s : S) ++s;
    return S;
}

using Rows = std::vector<std::vector<double>>;

inline Rows to_rows(const fmrmr::Matrix& X) {
    Rows r(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) r[i].assign(X.row(i).begin(), X.row(i).end());
    return r;
}

inline int knn_predict(const Rows& X, const fmrmr::Labels& y, int k, const std::vector<double>& x) {
    std::vector<std::size_t> idx(X.size());
    std::iota(idx.begin(), idx.end(), 0);
    auto d2 = [&](std::size_t i) {
        double s = 0;
        for (std::size_t c = 0; c < x.size(); ++c) s += (X[i][c] - x[c]) * (X[i][c] - x[c]);
        return s;
    };
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double da = d2(a), db = d2(b);
        return da < db || (da == db && a < b);
    });
    int votes = 0;
    for (int i = 0; i < k; ++i) votes += y[idx[i]] == 1 ? 1 : -1;
    if (votes == 0) return y[idx[0]];
    return votes > 0 ? 1 : 0;
}

// Gauss-Jordan inverse with partial pivoting.
inline Rows invert(Rows a) {
    const std::size_t d = a.size();
    Rows inv(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) inv[i][i] = 1.0;
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < d; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        std::swap(a[c], a[p]);
        std::swap(inv[c], inv[p]);
        const double piv = a[c][c];
        for (std::size_t j = 0; j < d; ++j) {
            a[c][j] /= piv;
            inv[c][j] /= piv;
        }
        for (std::size_t r = 0; r < d; ++r) {
            if (r == c) continue;
            const double f = a[r][c];
            for (std::size_t j = 0; j < d; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

struct ClassStats {
    std::vector<double> mean[2];
    double count[2] = {0, 0};
};

inline ClassStats class_stats(const Rows& X, const fmrmr::Labels& y) {
    const std::size_t d = X[0].size();
    ClassStats s;
    s.mean[0].assign(d, 0.0);
    s.mean[1].assign(d, 0.0);
    for (std::size_t i = 0; i < X.size(); ++i) {
        s.count[y[i]] += 1;
        for (std::size_t c = 0; c < d; ++c) s.mean[y[i]][c] += X[i][c];
    }
    for (int k = 0; k < 2; ++k)
        for (auto& v : s.mean[k]) v /= s.count[k];
    return s;
}

// Mahalanobis-distance form of LDA with the same ridge rule.
struct LdaOracle {
    ClassStats stats;
    Rows inv;

    LdaOracle(const Rows& X, const fmrmr::Labels& y) : stats(class_stats(X, y)) {
        const std::size_t d = X[0].size();
        Rows S(d, std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < X.size(); ++i)
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    S[a][b] += (X[i][a] - stats.mean[y[i]][a]) * (X[i][b] - stats.mean[y[i]][b]);
        double tr = 0;
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) S[a][b] /= static_cast<double>(X.size() - 2);
            tr += S[a][a];
        }
        for (std::size_t a = 0; a < d; ++a) S[a][a] += fmrmr::kLdaRidge * tr / static_cast<double>(d);
        inv = invert(S);
    }

    int predict(const std::vector<double>& x) const {
        double score[2];
        const double n = stats.count[0] + stats.count[1];
        for (int k = 0; k < 2; ++k) {
            double q = 0;
            for (std::size_t a = 0; a < x.size(); ++a)
                for (std::size_t b = 0; b < x.size(); ++b)
                    q += (x[a] - stats.mean[k][a]) * inv[a][b] * (x[b] - stats.mean[k][b]);
            score[k] = -0.5 * q + std::log(stats.count[k] / n);
        }
        return score[1] > score[0] ? 1 : 0;
    }
};

// Gaussian naive Bayes evaluated as a product of densities.
struct NbOracle {
    ClassStats stats;
    std::vector<double> var[2];

    NbOracle(const Rows& X, const fmrmr::Labels& y) : stats(class_stats(X, y)) {
        const std::size_t d = X[0].size();
        for (int k = 0; k < 2; ++k) var[k].assign(d, 0.0);
        for (std::size_t i = 0; i < X.size(); ++i)
            for (std::size_t c = 0; c < d; ++c)
                var[y[i]][c] += (X[i][c] - stats.mean[y[i]][c]) * (X[i][c] - stats.mean[y[i]][c]);
        for (int k = 0; k < 2; ++k)
            for (auto& v : var[k]) v /= stats.count[k] - 1;
    }

    int predict(const std::vector<double>& x) const {
        double p[2];
        const double n = stats.count[0] + stats.count[1];
        for (int k = 0; k < 2; ++k) {
            p[k] = stats.count[k] / n;
            for (std::size_t c = 0; c < x.size(); ++c) {
                const double z = x[c] - stats.mean[k][c];
                p[k] *= std::exp(-z * z / (2 * var[k][c])) / std::sqrt(2 * M_PI * var[k][c]);
            }
        }
        return p[1] > p[0] ? 1 : 0;
    }
};

// L2-loss linear SVM solved in the primal by Newton's method on
// 0.5 |w~|^2 + C sum max(0, 1 - y w~.x~)^2, with x~ = (x, 1).
struct SvmOracle {
    std::vector<double> w;  // last entry is the bias

    SvmOracle(const Rows& X, const fmrmr::Labels& y, double C) {
        const std::size_t d = X[0].size() + 1;
        w.assign(d, 0.0);
        auto xt = [&](std::size_t i, std::size_t c) { return c + 1 == d ? 1.0 : X[i][c]; };
        for (int iter = 0; iter < 100; ++iter) {
            std::vector<double> g(w);
            Rows H(d, std::vector<double>(d, 0.0));
            for (std::size_t a = 0; a < d; ++a) H[a][a] = 1.0;
            for (std::size_t i = 0; i < X.size(); ++i) {
                const double s = y[i] == 1 ? 1.0 : -1.0;
                double m = 0;
                for (std::size_t c = 0; c < d; ++c) m += w[c] * xt(i, c);
                const double slack = 1.0 - s * m;
                if (slack <= 0) continue;
                for (std::size_t a = 0; a < d; ++a) {
                    g[a] -= 2 * C * slack * s * xt(i, a);
                    for (std::size_t b = 0; b < d; ++b) H[a][b] += 2 * C * xt(i, a) * xt(i, b);
                }
            }
            double gn = 0;
            for (double v : g) gn += v * v;
            if (gn < 1e-24) break;
            const Rows Hi = invert(H);
            std::vector<double> step(d, 0.0);
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) step[a] += Hi[a][b] * g[b];
            // Backtracking keeps the iteration monotone across hinge kinks.
            const double f0 = objective(X, y, C);
            double t = 1.0;
            const std::vector<double> w0 = w;
            for (int ls = 0; ls < 50; ++ls) {
                for (std::size_t a = 0; a < d; ++a) w[a] = w0[a] - t * step[a];
                if (objective(X, y, C) <= f0) break;
                t *= 0.5;
            }
        }
    }

    double objective(const Rows& X, const fmrmr::Labels& y, double C) const {
        double f = 0;
        for (double v : w) f += 0.5 * v * v;
        for (std::size_t i = 0; i < X.size(); ++i) {
            double m = w.back();
            for (std::size_t c = 0; c + 1 < w.size(); ++c) m += w[c] * X[i][c];
            const double slack = std::max(0.0, 1.0 - (y[i] == 1 ? 1.0 : -1.0) * m);
            f += C * slack * slack;
        }
        return f;
    }

    int predict(const std::vector<double>& x) const {
        double m = w.back();
        for (std::size_t c = 0; c < x.size(); ++c) m += w[c] * x[c];
        return m > 0 ? 1 : 0;
    }
};

}  // namespace oracle
