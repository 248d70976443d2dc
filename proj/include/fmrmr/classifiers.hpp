#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "fmrmr/core.hpp"

namespace fmrmr {

enum class ClassifierType { KNN, LDA, NaiveBayes, LinearSVM };

/// "knn" | "lda" | "nb" | "svm".
ClassifierType classifier_type_from_name(std::string_view name);
std::string_view classifier_name(ClassifierType type) noexcept;

struct ClassifierKind {
    ClassifierType type = ClassifierType::KNN;
    int k = 1;                 // KNN: odd, >= 1
    double C = 1.0;            // LinearSVM: > 0
    std::uint64_t seed = 0;    // LinearSVM coordinate order

    static ClassifierKind knn(int k) { return {ClassifierType::KNN, k}; }
    static ClassifierKind lda() { return {ClassifierType::LDA}; }
    static ClassifierKind naive_bayes() { return {ClassifierType::NaiveBayes}; }
    static ClassifierKind linear_svm(double C, std::uint64_t seed = 0) {
        return {ClassifierType::LinearSVM, 1, C, seed};
    }
};

inline constexpr double kLdaRidge = 1e-6;          // times trace(S) / d
inline constexpr double kNbVarianceFloor = 1e-9;   // times the variable's pooled variance
inline constexpr double kSvmTolerance = 1e-4;      // relative duality gap
inline constexpr int kSvmMaxEpochs = 1000;

struct KnnModel {
    Matrix X;
    Labels y;
    int k = 1;
};

struct LdaModel {
    std::vector<double> mean[2];
    std::vector<double> cov_inv_mean[2];  // S^-1 mu_k
    double log_prior[2] = {0.0, 0.0};
};

struct NaiveBayesModel {
    std::vector<double> mean[2];
    std::vector<double> var[2];
    double log_prior[2] = {0.0, 0.0};
};

struct SvmModel {
    std::vector<double> w;
    double bias = 0.0;
    int epochs = 0;
    double duality_gap = 0.0;
    std::vector<double> dual_objective;  // after each epoch; non-increasing
};

struct TrainedModel {
    ClassifierKind kind;
    std::size_t dim = 0;
    std::variant<KnnModel, LdaModel, NaiveBayesModel, SvmModel> params;
};

TrainedModel fit(const ClassifierKind& kind, const Matrix& X, std::span<const Label> y);
Labels predict(const TrainedModel& model, const Matrix& X_new);
double accuracy(const TrainedModel& model, const Matrix& X_test, std::span<const Label> y_test);
/// Fraction of matching labels; ConfigError when empty.
double accuracy(std::span<const Label> predicted, std::span<const Label> truth);

/// Primal objective 0.5 |w|^2 + C sum max(0, 1 - y (w.x + b))^2 with the
/// bias regularized as an appended constant-1 feature.
double svm_primal_objective(const SvmModel& model, double C, const Matrix& X, std::span<const Label> y);

}  // namespace fmrmr
