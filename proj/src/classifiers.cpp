#include "fmrmr/classifiers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fmrmr/error.hpp"
#include "fmrmr/rng.hpp"

namespace fmrmr {

ClassifierType classifier_type_from_name(std::string_view name) {
    if (name == "knn") return ClassifierType::KNN;
    if (name == "lda") return ClassifierType::LDA;
    if (name == "nb") return ClassifierType::NaiveBayes;
    if (name == "svm") return ClassifierType::LinearSVM;
    throw ConfigError("unknown classifier '" + std::string(name) + "' (expected knn, lda, nb or svm)");
}

std::string_view classifier_name(ClassifierType type) noexcept {
    switch (type) {
        case ClassifierType::KNN: return "knn";
        case ClassifierType::LDA: return "lda";
        case ClassifierType::NaiveBayes: return "nb";
        case ClassifierType::LinearSVM: return "svm";
    }
    return "?";
}

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_training_set(const Matrix& X, std::span<const Label> y) {
    if (X.cols() < 1) throw ShapeError("classifier needs at least one input variable");
    if (X.rows() != y.size()) throw ShapeError("label count does not match training rows");
    require_both_classes(y, "fit");
}

std::array<std::vector<std::size_t>, 2> split_by_class(std::span<const Label> y) {
    std::array<std::vector<std::size_t>, 2> idx;
    for (std::size_t i = 0; i < y.size(); ++i) idx[y[i] == 1 ? 1 : 0].push_back(i);
    return idx;
}

std::vector<double> class_mean(const Matrix& X, const std::vector<std::size_t>& rows) {
    std::vector<double> m(X.cols(), 0.0);
    for (std::size_t r : rows)
        for (std::size_t c = 0; c < X.cols(); ++c) m[c] += X(r, c);
    for (auto& v : m) v /= static_cast<double>(rows.size());
    return m;
}

KnnModel fit_knn(const ClassifierKind& kind, const Matrix& X, std::span<const Label> y) {
    if (kind.k < 1 || kind.k % 2 == 0) throw ConfigError("k-NN needs an odd k >= 1");
    return {X, Labels(y.begin(), y.end()), kind.k};
}

LdaModel fit_lda(const Matrix& X, std::span<const Label> y) {
    const std::size_t n = X.rows(), d = X.cols();
    const auto idx = split_by_class(y);
    LdaModel m;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < 2; ++k) {
        m.mean[k] = class_mean(X, idx[k]);
        m.log_prior[k] = std::log(static_cast<double>(idx[k].size()) / static_cast<double>(n));
        for (std::size_t r : idx[k]) {
            Eigen::VectorXd dev(d);
            for (std::size_t c = 0; c < d; ++c) dev[c] = X(r, c) - m.mean[k][c];
            S.selfadjointView<Eigen::Lower>().rankUpdate(dev);
        }
    }
    S.triangularView<Eigen::StrictlyUpper>() = S.transpose();
    const double dof = n > 2 ? static_cast<double>(n - 2) : 1.0;
    S /= dof;
    const double ridge = kLdaRidge * S.trace() / static_cast<double>(d);
    S.diagonal().array() += ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (!(ridge > 0.0) || llt.info() != Eigen::Success) {
        throw NumericalError("LDA pooled covariance is singular after regularization");
    }
    for (int k = 0; k < 2; ++k) {
        Eigen::Map<const Eigen::VectorXd> mu(m.mean[k].data(), static_cast<Eigen::Index>(d));
        Eigen::VectorXd sol = llt.solve(mu);
        m.cov_inv_mean[k].assign(sol.data(), sol.data() + d);
    }
    return m;
}

NaiveBayesModel fit_nb(const Matrix& X, std::span<const Label> y) {
    const std::size_t n = X.rows(), d = X.cols();
    const auto idx = split_by_class(y);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    const auto grand = class_mean(X, all);
    std::vector<double> floor(d);
    for (std::size_t c = 0; c < d; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += (X(r, c) - grand[c]) * (X(r, c) - grand[c]);
        floor[c] = std::max(kNbVarianceFloor * s / static_cast<double>(n > 1 ? n - 1 : 1),
                            std::numeric_limits<double>::min());
    }
    NaiveBayesModel m;
    for (int k = 0; k < 2; ++k) {
        m.mean[k] = class_mean(X, idx[k]);
        m.var[k].assign(d, 0.0);
        for (std::size_t r : idx[k])
            for (std::size_t c = 0; c < d; ++c) m.var[k][c] += (X(r, c) - m.mean[k][c]) * (X(r, c) - m.mean[k][c]);
        const double dof = idx[k].size() > 1 ? static_cast<double>(idx[k].size() - 1) : 1.0;
        for (std::size_t c = 0; c < d; ++c) m.var[k][c] = std::max(m.var[k][c] / dof, floor[c]);
        m.log_prior[k] = std::log(static_cast<double>(idx[k].size()) / static_cast<double>(n));
    }
    return m;
}

SvmModel fit_svm(const ClassifierKind& kind, const Matrix& X, std::span<const Label> y) {
    if (!(kind.C > 0.0)) throw ConfigError("SVM cost C must be positive");
    const std::size_t n = X.rows(), d = X.cols();
    const double diag = 0.5 / kind.C;
    std::vector<double> sign(n), qd(n), alpha(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        sign[i] = y[i] == 1 ? 1.0 : -1.0;
        double s = 1.0;  // bias feature
        for (std::size_t c = 0; c < d; ++c) s += X(i, c) * X(i, c);
        qd[i] = s + diag;
    }
    SvmModel m;
    m.w.assign(d, 0.0);
    double b = 0.0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Engine rng(derive_seed(kind.seed, {0x5f3759dfULL}));

    auto margin = [&](std::size_t i) {
        double s = b;
        for (std::size_t c = 0; c < d; ++c) s += m.w[c] * X(i, c);
        return s;
    };

    for (int epoch = 1; epoch <= kSvmMaxEpochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i : order) {
            const double G = sign[i] * margin(i) - 1.0 + diag * alpha[i];
            const double pg = alpha[i] == 0.0 ? std::min(G, 0.0) : G;
            if (pg == 0.0) continue;
            const double old = alpha[i];
            alpha[i] = std::max(old - G / qd[i], 0.0);
            const double step = (alpha[i] - old) * sign[i];
            for (std::size_t c = 0; c < d; ++c) m.w[c] += step * X(i, c);
            b += step;
        }
        double wnorm = b * b, asum = 0.0, asq = 0.0, loss = 0.0;
        for (double v : m.w) wnorm += v * v;
        for (std::size_t i = 0; i < n; ++i) {
            asum += alpha[i];
            asq += alpha[i] * alpha[i];
            const double slack = std::max(0.0, 1.0 - sign[i] * margin(i));
            loss += slack * slack;
        }
        const double dual = 0.5 * wnorm + 0.5 * diag * asq - asum;  // minimized by the solver
        const double primal = 0.5 * wnorm + kind.C * loss;
        m.dual_objective.push_back(dual);
        m.epochs = epoch;
        m.duality_gap = primal + dual;
        if (m.duality_gap <= kSvmTolerance * std::max(1.0, primal)) break;
    }
    m.bias = b;
    return m;
}

Label predict_knn(const KnnModel& m, std::span<const double> x) {
    const std::size_t n = m.X.rows();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        auto row = m.X.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) s += (row[c] - x[c]) * (row[c] - x[c]);
        dist[r] = {s, r};
    }
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(m.k), n);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::size_t ones = 0;
    for (std::size_t i = 0; i < k; ++i) ones += (m.y[dist[i].second] == 1);
    const std::size_t zeros = k - ones;
    if (ones == zeros) return m.y[dist[0].second];
    return ones > zeros ? 1 : 0;
}

Label predict_lda(const LdaModel& m, std::span<const double> x) {
    double score[2];
    for (int k = 0; k < 2; ++k) {
        double a = 0.0, q = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) {
            a += x[c] * m.cov_inv_mean[k][c];
            q += m.mean[k][c] * m.cov_inv_mean[k][c];
        }
        score[k] = a - 0.5 * q + m.log_prior[k];
    }
    return score[1] > score[0] ? 1 : 0;
}

Label predict_nb(const NaiveBayesModel& m, std::span<const double> x) {
    double lp[2];
    for (int k = 0; k < 2; ++k) {
        double s = m.log_prior[k];
        for (std::size_t c = 0; c < x.size(); ++c) {
            const double dev = x[c] - m.mean[k][c];
            s -= 0.5 * std::log(2.0 * kPi * m.var[k][c]) + dev * dev / (2.0 * m.var[k][c]);
        }
        lp[k] = s;
    }
    return lp[1] > lp[0] ? 1 : 0;
}

Label predict_svm(const SvmModel& m, std::span<const double> x) {
    double s = m.bias;
    for (std::size_t c = 0; c < x.size(); ++c) s += m.w[c] * x[c];
    return s > 0.0 ? 1 : 0;
}

}  // namespace

TrainedModel fit(const ClassifierKind& kind, const Matrix& X, std::span<const Label> y) {
    check_training_set(X, y);
    TrainedModel model{kind, X.cols(), KnnModel{}};
    switch (kind.type) {
        case ClassifierType::KNN: model.params = fit_knn(kind, X, y); break;
        case ClassifierType::LDA: model.params = fit_lda(X, y); break;
        case ClassifierType::NaiveBayes: model.params = fit_nb(X, y); break;
        case ClassifierType::LinearSVM: model.params = fit_svm(kind, X, y); break;
    }
    return model;
}

Labels predict(const TrainedModel& model, const Matrix& X_new) {
    if (X_new.cols() != model.dim) {
        throw ShapeError("predict: model expects " + std::to_string(model.dim) + " variables, got " +
                         std::to_string(X_new.cols()));
    }
    Labels out(X_new.rows());
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            for (std::size_t r = 0; r < X_new.rows(); ++r) {
                if constexpr (std::is_same_v<T, KnnModel>) out[r] = predict_knn(p, X_new.row(r));
                else if constexpr (std::is_same_v<T, LdaModel>) out[r] = predict_lda(p, X_new.row(r));
                else if constexpr (std::is_same_v<T, NaiveBayesModel>) out[r] = predict_nb(p, X_new.row(r));
                else out[r] = predict_svm(p, X_new.row(r));
            }
        },
        model.params);
    return out;
}

double accuracy(std::span<const Label> predicted, std::span<const Label> truth) {
    if (truth.empty()) throw ConfigError("accuracy of an empty test set");
    if (predicted.size() != truth.size()) throw ShapeError("prediction count does not match labels");
    std::size_t hit = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hit += (predicted[i] == truth[i]);
    return static_cast<double>(hit) / static_cast<double>(truth.size());
}

double accuracy(const TrainedModel& model, const Matrix& X_test, std::span<const Label> y_test) {
    if (y_test.empty()) throw ConfigError("accuracy of an empty test set");
    return accuracy(predict(model, X_test), y_test);
}

double svm_primal_objective(const SvmModel& model, double C, const Matrix& X, std::span<const Label> y) {
    double obj = 0.5 * model.bias * model.bias;
    for (double v : model.w) obj += 0.5 * v * v;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        double s = model.bias;
        for (std::size_t c = 0; c < X.cols(); ++c) s += model.w[c] * X(i, c);
        const double slack = std::max(0.0, 1.0 - (y[i] == 1 ? 1.0 : -1.0) * s);
        obj += C * slack * slack;
    }
    return obj;
}

}  // namespace fmrmr
