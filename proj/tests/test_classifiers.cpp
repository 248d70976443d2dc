#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fmrmr/classifiers.hpp"
#include "fmrmr/error.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace fmrmr;

namespace {

struct Problem {
    Matrix X, Xtest;
    Labels y;
};

Problem random_problem(std::mt19937_64& rng, std::size_t n, std::size_t d, double shift = 1.0) {
    Problem p{Matrix(n, d), Matrix(40, d), testutil::random_labels(rng, n)};
    std::normal_distribution<double> z(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < d; ++c) p.X(i, c) = z(rng) + shift * p.y[i] * (c % 2 ? -1.0 : 1.0);
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t c = 0; c < d; ++c) p.Xtest(i, c) = 1.5 * z(rng);
    return p;
}

}  // namespace

TEST(Knn, MatchesNaiveOracle) {
    std::mt19937_64 rng(201);
    for (int rep = 0; rep < 20; ++rep) {
        const auto p = random_problem(rng, 30, 1 + rep % 5);
        const auto rows = oracle::to_rows(p.X);
        for (int k : {1, 3, 5, 7}) {
            const auto pred = predict(fit(ClassifierKind::knn(k), p.X, p.y), p.Xtest);
            for (std::size_t i = 0; i < p.Xtest.rows(); ++i) {
                const std::vector<double> x(p.Xtest.row(i).begin(), p.Xtest.row(i).end());
                EXPECT_EQ(pred[i], oracle::knn_predict(rows, p.y, k, x));
            }
        }
    }
}

TEST(Knn, OneNeighborRecoversTrainingLabels) {
    std::mt19937_64 rng(202);
    const auto p = random_problem(rng, 25, 3);
    EXPECT_EQ(predict(fit(ClassifierKind::knn(1), p.X, p.y), p.X), p.y);
}

TEST(Knn, DistanceTiesGoToLowerIndex) {
    Matrix X(3, 1, {0.0, 1.0, 1.0});
    const Labels y{0, 1, 0};
    const auto m = fit(ClassifierKind::knn(1), X, y);
    EXPECT_EQ(predict(m, Matrix(1, 1, {0.9}))[0], 1);
    EXPECT_THROW(fit(ClassifierKind::knn(2), X, y), ConfigError);
}

TEST(Knn, VoteTieGoesToNearestNeighbor) {
    // k = 3 with only two training points leaves a 1-1 vote.
    Matrix X(2, 1, {0.0, 1.0});
    const auto m = fit(ClassifierKind::knn(3), X, Labels{0, 1});
    EXPECT_EQ(predict(m, Matrix(2, 1, {0.2, 0.8})), (Labels{0, 1}));
}

TEST(Knn, InvariantToTrainingRowOrder) {
    std::mt19937_64 rng(203);
    const auto p = random_problem(rng, 40, 3);
    std::vector<std::size_t> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Labels yp(40);
    for (std::size_t i = 0; i < 40; ++i) yp[i] = p.y[perm[i]];
    const auto a = predict(fit(ClassifierKind::knn(5), p.X, p.y), p.Xtest);
    const auto b = predict(fit(ClassifierKind::knn(5), p.X.select_rows(perm), yp), p.Xtest);
    EXPECT_EQ(a, b);
}

TEST(Lda, MatchesMahalanobisOracle) {
    std::mt19937_64 rng(204);
    for (int rep = 0; rep < 20; ++rep) {
        const auto p = random_problem(rng, 20 + rep, 1 + rep % 5);
        const oracle::LdaOracle o(oracle::to_rows(p.X), p.y);
        const auto pred = predict(fit(ClassifierKind::lda(), p.X, p.y), p.Xtest);
        for (std::size_t i = 0; i < p.Xtest.rows(); ++i)
            EXPECT_EQ(pred[i], o.predict({p.Xtest.row(i).begin(), p.Xtest.row(i).end()}));
    }
}

TEST(Lda, SymmetricClassesSplitAtMidpoint) {
    Matrix X(4, 1, {-2.0, -1.0, 1.0, 2.0});
    const Labels y{0, 0, 1, 1};
    const auto m = fit(ClassifierKind::lda(), X, y);
    EXPECT_EQ(predict(m, Matrix(2, 1, {-0.01, 0.01})), (Labels{0, 1}));
}

TEST(Lda, InvariantUnderAffineMaps) {
    std::mt19937_64 rng(205);
    const auto p = random_problem(rng, 50, 3);
    // A well-conditioned invertible map plus shift.
    const double A[3][3] = {{2.0, 0.3, 0.0}, {-0.5, 1.5, 0.2}, {0.1, 0.0, 0.8}};
    auto apply = [&](const Matrix& M) {
        Matrix out(M.rows(), 3);
        for (std::size_t i = 0; i < M.rows(); ++i)
            for (int a = 0; a < 3; ++a) {
                out(i, a) = 5.0 - a;
                for (int b = 0; b < 3; ++b) out(i, a) += A[a][b] * M(i, b);
            }
        return out;
    };
    const auto a = predict(fit(ClassifierKind::lda(), p.X, p.y), p.Xtest);
    const auto b = predict(fit(ClassifierKind::lda(), apply(p.X), p.y), apply(p.Xtest));
    EXPECT_EQ(a, b);
}

TEST(NaiveBayes, MatchesDensityProductOracle) {
    std::mt19937_64 rng(206);
    for (int rep = 0; rep < 20; ++rep) {
        const auto p = random_problem(rng, 20 + rep, 1 + rep % 5);
        const oracle::NbOracle o(oracle::to_rows(p.X), p.y);
        const auto pred = predict(fit(ClassifierKind::naive_bayes(), p.X, p.y), p.Xtest);
        for (std::size_t i = 0; i < p.Xtest.rows(); ++i)
            EXPECT_EQ(pred[i], o.predict({p.Xtest.row(i).begin(), p.Xtest.row(i).end()}));
    }
}

TEST(NaiveBayes, ExactTieGoesToClassZero) {
    Matrix X(4, 1, {-1.0, -3.0, 1.0, 3.0});
    const Labels y{0, 0, 1, 1};
    EXPECT_EQ(predict(fit(ClassifierKind::naive_bayes(), X, y), Matrix(1, 1, {0.0}))[0], 0);
}

TEST(NaiveBayes, FarPointsStayFinite) {
    Matrix X(4, 1, {-1.0, -1.2, 1.0, 1.2});
    const Labels y{0, 0, 1, 1};
    const auto m = fit(ClassifierKind::naive_bayes(), X, y);
    // z-scores of about 50 in both classes.
    const auto pred = predict(m, Matrix(2, 1, {-8.0, 8.0}));
    EXPECT_EQ(pred, (Labels{0, 1}));
    const auto& nb = std::get<NaiveBayesModel>(m.params);
    EXPECT_TRUE(std::isfinite(nb.var[0][0]) && nb.var[0][0] > 0);
}

TEST(NaiveBayes, ConstantVariableUsesFloor) {
    Matrix X(4, 2, {0.0, 5.0, 1.0, 5.0, 2.0, 5.0, 3.0, 5.0});
    const Labels y{0, 0, 1, 1};
    const auto m = fit(ClassifierKind::naive_bayes(), X, y);
    EXPECT_EQ(predict(m, Matrix(1, 2, {0.2, 5.0}))[0], 0);
}

TEST(Svm, MatchesPrimalNewtonOracle) {
    std::mt19937_64 rng(207);
    std::size_t agree = 0, total = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const auto p = random_problem(rng, 30, 1 + rep % 5);
        const double C = rep % 2 ? 0.5 : 8.0;
        const auto rows = oracle::to_rows(p.X);
        const oracle::SvmOracle o(rows, p.y, C);
        const auto model = fit(ClassifierKind::linear_svm(C, rep), p.X, p.y);
        const auto& svm = std::get<SvmModel>(model.params);
        const double f = svm_primal_objective(svm, C, p.X, p.y), f_star = o.objective(rows, p.y, C);
        EXPECT_LE(f - f_star, 1e-3 * std::max(1.0, f_star));
        const auto pred = predict(model, p.Xtest);
        for (std::size_t i = 0; i < p.Xtest.rows(); ++i, ++total)
            agree += pred[i] == o.predict({p.Xtest.row(i).begin(), p.Xtest.row(i).end()});
    }
    EXPECT_GE(static_cast<double>(agree) / total, 0.95);
}

TEST(Svm, DualObjectiveNonIncreasingAndConverged) {
    std::mt19937_64 rng(208);
    const auto p = random_problem(rng, 40, 4, 0.3);
    const auto model = fit(ClassifierKind::linear_svm(2.0, 1), p.X, p.y);
    const auto& svm = std::get<SvmModel>(model.params);
    for (std::size_t e = 1; e < svm.dual_objective.size(); ++e)
        EXPECT_LE(svm.dual_objective[e], svm.dual_objective[e - 1] + 1e-12);
    const double primal = svm_primal_objective(svm, 2.0, p.X, p.y);
    EXPECT_LE(svm.duality_gap, kSvmTolerance * std::max(1.0, primal));
}

TEST(Svm, SeparableDataLargeC) {
    Matrix X(6, 2, {0, 0, 0, 1, 1, 0, 3, 3, 3, 4, 4, 3});
    const Labels y{0, 0, 0, 1, 1, 1};
    const auto m = fit(ClassifierKind::linear_svm(32.0), X, y);
    EXPECT_EQ(accuracy(m, X, y), 1.0);
}

TEST(Accuracy, CountsAndErrors) {
    const Labels truth{0, 1, 1, 0, 1, 0, 0, 1, 1, 1};
    const Labels pred{0, 1, 0, 0, 1, 1, 0, 1, 0, 1};
    EXPECT_DOUBLE_EQ(accuracy(pred, truth), 0.7);
    EXPECT_DOUBLE_EQ(accuracy(Labels(4, 0), Labels{0, 1, 0, 1}), 0.5);
    EXPECT_THROW(accuracy(Labels{}, Labels{}), ConfigError);
}

TEST(Classifiers, ShapeAndClassChecks) {
    Matrix X(4, 2, {0, 0, 1, 1, 2, 2, 3, 3});
    const auto m = fit(ClassifierKind::naive_bayes(), X, Labels{0, 0, 1, 1});
    EXPECT_THROW(predict(m, Matrix(1, 3)), ShapeError);
    EXPECT_THROW(fit(ClassifierKind::lda(), X, Labels{1, 1, 1, 1}), DegenerateClassesError);
    EXPECT_THROW(classifier_type_from_name("tree"), ConfigError);
}
