#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fmrmr/classifiers.hpp"
#include "fmrmr/core.hpp"
#include "fmrmr/measures.hpp"
#include "fmrmr/simulate.hpp"

namespace fmrmr {

/// A selection method as spelled in the result tables: measure + criterion
/// letter ("RD", "MIQ", ...) or "Base" (no selection, full curve).
struct Method {
    bool base = false;
    MeasureKind measure = MeasureKind::R;
    Criterion criterion = Criterion::Difference;

    std::string id() const;
    static Method from_name(std::string_view name);
    friend bool operator==(const Method&, const Method&) = default;
};

/// Table order: MI, FC, R, V, C; D before Q; Base last.
int method_order(std::string_view id);
/// Table order: nb, knn, lda, svm.
int classifier_order(std::string_view id);

struct ExperimentConfig {
    std::vector<std::string> models;
    std::vector<std::size_t> sample_sizes{30, 50, 100, 200};
    std::vector<std::string> measures{"MI", "FC", "R", "V", "C"};
    std::vector<std::string> criteria{"D"};
    bool include_base = true;
    /// Explicit method list; overrides measures x criteria (+ Base) when set.
    std::vector<std::string> methods_override;
    std::vector<std::string> classifiers{"nb", "knn", "lda", "svm"};
    std::size_t runs = 20;
    std::size_t validation_size = 200;
    std::size_t test_size = 200;
    std::vector<std::size_t> dim_candidates = default_dims();
    std::vector<int> k_candidates{1, 3, 5, 7, 9, 11};
    std::vector<double> C_candidates{1.0 / 32, 1.0 / 8, 1.0 / 2, 2.0, 8.0, 32.0};
    std::uint64_t seed = 0;
    SimulationOptions simulation;

    std::vector<std::string> methods() const;
    /// Throws ConfigError on any invalid field.
    void validate() const;

    static std::vector<std::size_t> default_dims();
};

/// Parses a JSON document whose keys mirror the field names above.
ExperimentConfig parse_config(std::string_view json_text);
std::string config_to_json(const ExperimentConfig& config);

struct RunRecord {
    std::string model_id;
    std::size_t n = 0;
    std::string method;
    std::string classifier;
    std::size_t run = 0;
    std::size_t dim = 0;
    double hyperparameter = 0.0;  // k for knn, C for svm, 0 otherwise
    double accuracy = 0.0;
};

/// Held-out data that can only be used to score a finished model.
class SealedTestSet {
public:
    explicit SealedTestSet(FunctionalDataset data) : data_(std::move(data)) {}
    std::size_t size() const noexcept { return data_.n_samples(); }
    /// Accuracy of a model trained on the given 1-based grid indices.
    double score(const TrainedModel& model, std::span<const std::size_t> indices) const;

private:
    FunctionalDataset data_;
};

/// Classifier settings for one hyperparameter value (k for knn, C for svm).
ClassifierKind classifier_kind(ClassifierType type, double hyperparameter, std::uint64_t seed);

struct TunedModel {
    std::size_t dim = 0;
    double hyperparameter = 0.0;
    double validation_accuracy = 0.0;
    std::vector<std::size_t> indices;  // the first `dim` entries of the ranking
    TrainedModel model;
};

/// Picks (dim, hyperparameter) maximizing validation accuracy, ties to the
/// smaller dim and then the smaller hyperparameter. `ranking` holds 1-based
/// grid indices in selection order; only dims <= ranking.size() are tried.
TunedModel tune_classifier(const FunctionalDataset& train, const FunctionalDataset& validation,
                           std::span<const std::size_t> ranking, std::span<const std::size_t> dims,
                           ClassifierType classifier, const ExperimentConfig& config, std::uint64_t seed);

/// Seed shared by every method and classifier of one (model, n, run) cell so
/// that they see the same samples.
std::uint64_t run_seed(std::uint64_t master, std::string_view model_id, std::size_t n, std::size_t run);

RunRecord run_single(std::string_view model_id, std::size_t n, std::string_view method, std::string_view classifier,
                     const ExperimentConfig& config, std::uint64_t run_seed, std::size_t run_index = 0);

struct RunFailure {
    std::string model_id;
    std::size_t n = 0;
    std::string method;
    std::string classifier;
    std::size_t run = 0;
    std::string message;
};

struct ExperimentResult {
    std::vector<RunRecord> records;
    std::vector<RunFailure> failures;
};

/// Runs every (model, n, run) cell on up to `threads` workers. Output order
/// and content do not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 1,
                                const std::function<void(std::size_t, std::size_t)>& progress = {});

struct CellSummary {
    std::string classifier;
    std::size_t n = 0;
    std::string method;
    double mean_accuracy = 0.0;
    double mean_dim = 0.0;
    std::optional<std::size_t> victories;  // empty for Base or when Base is absent
    std::size_t models = 0;
};

struct ModelSummary {
    std::string model_id;
    std::size_t n = 0;
    std::string classifier;
    std::string method;
    double mean_accuracy = 0.0;
    double mean_dim = 0.0;
    std::size_t runs = 0;
};

enum class RankingScheme { Relative, Positional, F1 };
std::string_view ranking_name(RankingScheme s) noexcept;

struct RankingSummary {
    std::string classifier;
    std::size_t n = 0;
    RankingScheme scheme = RankingScheme::Relative;
    std::map<std::string, double> mean_score;  // by method id, over models
};

struct ExperimentReport {
    std::vector<std::string> methods;      // table order
    std::vector<std::string> classifiers;  // table order
    std::vector<std::size_t> sample_sizes;
    std::vector<CellSummary> cells;
    std::vector<ModelSummary> per_model;
    std::vector<RankingSummary> rankings;

    const CellSummary* find(std::string_view classifier, std::size_t n, std::string_view method) const;
};

/// Means over runs, then over models. Rankings cover the non-Base methods.
ExperimentReport aggregate(std::span<const RunRecord> records);

using MethodScores = std::map<std::string, double>;

/// Winner 10, worst 0, 10 (u - w) / (W - w) in between; all 10 when W == w.
MethodScores rank_relative(const MethodScores& accuracy);
/// 10, 9, 8, ... by descending accuracy; ties share the mean of their points.
MethodScores rank_positional(const MethodScores& accuracy);
/// 25, 18, 15, 10, 8, 6, 4, then 0; ties share the mean of their points.
MethodScores rank_f1(const MethodScores& accuracy);

inline constexpr double kF1Points[] = {25, 18, 15, 10, 8, 6, 4};

// CSV output (report_io.cpp).
std::string format_double(double x);
void write_runs_csv(const std::string& path, std::span<const RunRecord> records);
std::vector<RunRecord> read_runs_csv(const std::string& path);
std::string summary_csv(const ExperimentReport& report);
std::string model_summary_csv(const ExperimentReport& report);
std::string rankings_csv(const ExperimentReport& report);
void write_text_file(const std::string& path, const std::string& content);
/// runs.csv, summary.csv, per_model.csv, rankings.csv under `dir`.
void write_report_files(const std::string& dir, std::span<const RunRecord> records, const ExperimentReport& report);

}  // namespace fmrmr
