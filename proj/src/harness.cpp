#include "fmrmr/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <iterator>
#include <limits>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>
#include <tuple>

#include "fmrmr/error.hpp"
#include "fmrmr/mrmr.hpp"
#include "fmrmr/rng.hpp"
#include "parallel.hpp"

namespace fmrmr {

// ---------------------------------------------------------------------------
// Methods and config

std::string Method::id() const {
    if (base) return "Base";
    return std::string(measure_name(measure)) + std::string(criterion_name(criterion));
}

Method Method::from_name(std::string_view name) {
    if (name == "Base") return Method{true};
    if (name.size() < 2) throw ConfigError("unknown method '" + std::string(name) + "'");
    Method m;
    m.criterion = criterion_from_name(name.substr(name.size() - 1));
    m.measure = measure_kind_from_name(name.substr(0, name.size() - 1));
    return m;
}

int method_order(std::string_view id) {
    if (id == "Base") return 1000;
    static const MeasureKind order[] = {MeasureKind::MI, MeasureKind::FC, MeasureKind::R, MeasureKind::V,
                                        MeasureKind::C};
    try {
        const Method m = Method::from_name(id);
        const auto pos = std::find(std::begin(order), std::end(order), m.measure) - std::begin(order);
        return static_cast<int>(pos) + (m.criterion == Criterion::Quotient ? 10 : 0);
    } catch (const Error&) {
        return 500;
    }
}

int classifier_order(std::string_view id) {
    static const char* order[] = {"nb", "knn", "lda", "svm"};
    for (int i = 0; i < 4; ++i)
        if (id == order[i]) return i;
    return 100;
}

std::vector<std::size_t> ExperimentConfig::default_dims() {
    std::vector<std::size_t> d(20);
    std::iota(d.begin(), d.end(), std::size_t{1});
    return d;
}

std::vector<std::string> ExperimentConfig::methods() const {
    if (!methods_override.empty()) return methods_override;
    std::vector<std::string> out;
    for (const auto& m : measures)
        for (const auto& c : criteria) out.push_back(m + c);
    if (include_base) out.push_back("Base");
    return out;
}

void ExperimentConfig::validate() const {
    if (models.empty()) throw ConfigError("config lists no models");
    for (const auto& m : models) find_model(m);
    if (sample_sizes.empty()) throw ConfigError("config lists no sample sizes");
    for (auto n : sample_sizes)
        if (n < 4) throw ConfigError("sample sizes must be at least 4");
    const auto ms = methods();
    if (ms.empty()) throw ConfigError("config lists no methods");
    for (const auto& m : ms) Method::from_name(m);
    if (classifiers.empty()) throw ConfigError("config lists no classifiers");
    for (const auto& c : classifiers) classifier_type_from_name(c);
    if (runs < 1) throw ConfigError("runs must be at least 1");
    if (validation_size < 2 || test_size < 1) throw ConfigError("validation/test sizes too small");
    if (dim_candidates.empty()) throw ConfigError("dim_candidates is empty");
    for (auto d : dim_candidates)
        if (d < 1) throw ConfigError("dim candidates must be >= 1");
    if (k_candidates.empty()) throw ConfigError("k_candidates is empty");
    for (int k : k_candidates)
        if (k < 1 || k % 2 == 0) throw ConfigError("k candidates must be odd and >= 1");
    if (C_candidates.empty()) throw ConfigError("C_candidates is empty");
    for (double c : C_candidates)
        if (!(c > 0.0)) throw ConfigError("C candidates must be positive");
}

namespace {

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known = {
        "models", "sample_sizes", "measures", "criteria", "include_base", "methods", "classifiers", "runs",
        "validation_size", "test_size", "dim_candidates", "k_candidates", "C_candidates", "seed",
        "slope_param_is_variance"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");

    ExperimentConfig c;
    if (j.contains("models") && j["models"] == "all") {
        for (const auto& m : catalog()) c.models.push_back(m.id);
    } else {
        read_field(j, "models", c.models);
    }
    read_field(j, "sample_sizes", c.sample_sizes);
    read_field(j, "measures", c.measures);
    read_field(j, "criteria", c.criteria);
    read_field(j, "include_base", c.include_base);
    read_field(j, "methods", c.methods_override);
    read_field(j, "classifiers", c.classifiers);
    read_field(j, "runs", c.runs);
    read_field(j, "validation_size", c.validation_size);
    read_field(j, "test_size", c.test_size);
    read_field(j, "dim_candidates", c.dim_candidates);
    read_field(j, "k_candidates", c.k_candidates);
    read_field(j, "C_candidates", c.C_candidates);
    read_field(j, "seed", c.seed);
    read_field(j, "slope_param_is_variance", c.simulation.slope_param_is_variance);
    return c;
}

std::string config_to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["models"] = c.models;
    j["sample_sizes"] = c.sample_sizes;
    j["methods"] = c.methods();
    j["classifiers"] = c.classifiers;
    j["runs"] = c.runs;
    j["validation_size"] = c.validation_size;
    j["test_size"] = c.test_size;
    j["dim_candidates"] = c.dim_candidates;
    j["k_candidates"] = c.k_candidates;
    j["C_candidates"] = c.C_candidates;
    j["seed"] = c.seed;
    j["slope_param_is_variance"] = c.simulation.slope_param_is_variance;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Single-run protocol

double SealedTestSet::score(const TrainedModel& model, std::span<const std::size_t> indices) const {
    std::vector<std::size_t> cols(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) cols[i] = indices[i] - 1;
    return accuracy(model, data_.values().select_columns(cols), data_.labels());
}

namespace {

std::vector<double> hyper_grid(ClassifierType type, const ExperimentConfig& config) {
    std::vector<double> h;
    if (type == ClassifierType::KNN) {
        for (int k : config.k_candidates) h.push_back(k);
    } else if (type == ClassifierType::LinearSVM) {
        h = config.C_candidates;
    } else {
        h.push_back(0.0);
    }
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
    return h;
}

}  // namespace

ClassifierKind classifier_kind(ClassifierType type, double hyper, std::uint64_t seed) {
    switch (type) {
        case ClassifierType::KNN: return ClassifierKind::knn(static_cast<int>(hyper));
        case ClassifierType::LDA: return ClassifierKind::lda();
        case ClassifierType::NaiveBayes: return ClassifierKind::naive_bayes();
        case ClassifierType::LinearSVM: return ClassifierKind::linear_svm(hyper, seed);
    }
    return {};
}

TunedModel tune_classifier(const FunctionalDataset& train, const FunctionalDataset& validation,
                           std::span<const std::size_t> ranking, std::span<const std::size_t> dims,
                           ClassifierType classifier, const ExperimentConfig& config, std::uint64_t seed) {
    std::vector<std::size_t> dim_list;
    for (auto d : dims)
        if (d >= 1 && d <= ranking.size()) dim_list.push_back(d);
    std::sort(dim_list.begin(), dim_list.end());
    dim_list.erase(std::unique(dim_list.begin(), dim_list.end()), dim_list.end());
    if (dim_list.empty()) throw ConfigError("no candidate dimension fits the selected ranking");
    const auto hypers = hyper_grid(classifier, config);

    std::optional<TunedModel> best;
    std::string last_error;
    for (std::size_t d : dim_list) {
        std::vector<std::size_t> cols(d);
        for (std::size_t i = 0; i < d; ++i) cols[i] = ranking[i] - 1;
        const Matrix Xtr = train.values().select_columns(cols);
        const Matrix Xva = validation.values().select_columns(cols);
        for (double h : hypers) {
            TrainedModel model;
            try {
                model = fit(classifier_kind(classifier, h, seed), Xtr, train.labels());
            } catch (const NumericalError& e) {
                last_error = e.what();
                continue;
            }
            const double acc = accuracy(model, Xva, validation.labels());
            if (!best || acc > best->validation_accuracy) {
                best = TunedModel{d, h, acc, {ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(d)},
                                  std::move(model)};
            }
        }
    }
    if (!best) throw NumericalError("no (dim, hyperparameter) candidate could be fitted: " + last_error);
    return std::move(*best);
}

std::uint64_t run_seed(std::uint64_t master, std::string_view model_id, std::size_t n, std::size_t run) {
    return derive_seed(master, {hash_tag(model_id), n, run});
}

namespace {

enum : std::uint64_t { kTrainStream = 11, kValidationStream = 12, kTestStream = 13, kFitStream = 14 };

struct CellData {
    FunctionalDataset train;
    FunctionalDataset validation;
    SealedTestSet test;
};

CellData generate_cell(const ModelSpec& spec, std::size_t n, const ExperimentConfig& config, std::uint64_t seed) {
    const Grid grid = make_default_grid();
    return CellData{generate(spec, grid, n, RngSeed{derive_seed(seed, {kTrainStream})}, config.simulation),
                    generate(spec, grid, config.validation_size, RngSeed{derive_seed(seed, {kValidationStream})},
                             config.simulation),
                    SealedTestSet(generate(spec, grid, config.test_size, RngSeed{derive_seed(seed, {kTestStream})},
                                           config.simulation))};
}

std::vector<std::size_t> ranking_for(const Method& method, const FunctionalDataset& train,
                                     const ExperimentConfig& config) {
    const std::size_t N = train.n_points();
    if (method.base) {
        std::vector<std::size_t> all(N);
        std::iota(all.begin(), all.end(), std::size_t{1});
        return all;
    }
    const std::size_t max_dim = *std::max_element(config.dim_candidates.begin(), config.dim_candidates.end());
    return select(train, AssociationMeasure(method.measure), method.criterion, std::min(max_dim, N)).indices;
}

RunRecord evaluate(const CellData& cell, const Method& method, std::span<const std::size_t> ranking,
                   ClassifierType classifier, const ExperimentConfig& config, std::uint64_t seed) {
    const std::size_t N = cell.train.n_points();
    const std::vector<std::size_t> base_dims{N};
    const auto dims = method.base ? std::span<const std::size_t>(base_dims)
                                  : std::span<const std::size_t>(config.dim_candidates);
    const TunedModel tuned = tune_classifier(cell.train, cell.validation, ranking, dims, classifier, config,
                                             derive_seed(seed, {kFitStream}));
    RunRecord r;
    r.method = method.id();
    r.classifier = std::string(classifier_name(classifier));
    r.dim = tuned.dim;
    r.hyperparameter = tuned.hyperparameter;
    r.accuracy = cell.test.score(tuned.model, tuned.indices);
    return r;
}

}  // namespace

RunRecord run_single(std::string_view model_id, std::size_t n, std::string_view method_name,
                     std::string_view classifier, const ExperimentConfig& config, std::uint64_t seed,
                     std::size_t run_index) {
    const ModelSpec& spec = find_model(model_id);
    const Method method = Method::from_name(method_name);
    const ClassifierType type = classifier_type_from_name(classifier);
    if (method.base && type == ClassifierType::LDA) {
        throw ConfigError("Base is not defined for LDA (the full curve is not a feasible LDA input)");
    }
    const CellData cell = generate_cell(spec, n, config, seed);
    const auto ranking = ranking_for(method, cell.train, config);
    RunRecord r = evaluate(cell, method, ranking, type, config, seed);
    r.model_id = spec.id;
    r.n = n;
    r.run = run_index;
    return r;
}


ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads,
                                const std::function<void(std::size_t, std::size_t)>& progress) {
    config.validate();
    std::vector<Method> methods;
    for (const auto& m : config.methods()) methods.push_back(Method::from_name(m));
    std::vector<ClassifierType> classifiers;
    for (const auto& c : config.classifiers) classifiers.push_back(classifier_type_from_name(c));

    struct Task {
        const ModelSpec* spec;
        std::size_t n;
        std::size_t run;
    };
    std::vector<Task> tasks;
    for (const auto& id : config.models)
        for (auto n : config.sample_sizes)
            for (std::size_t r = 0; r < config.runs; ++r) tasks.push_back({&find_model(id), n, r});

    std::vector<ExperimentResult> partial(tasks.size());
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    detail::parallel_for(tasks.size(), threads, [&](std::size_t t) {
        const Task& task = tasks[t];
        const std::uint64_t seed = run_seed(config.seed, task.spec->id, task.n, task.run);
        ExperimentResult& out = partial[t];
        auto fail = [&](const std::string& method, const std::string& classifier, const std::string& msg) {
            out.failures.push_back({task.spec->id, task.n, method, classifier, task.run, msg});
        };
        std::optional<CellData> cell;
        try {
            cell.emplace(generate_cell(*task.spec, task.n, config, seed));
        } catch (const Error& e) {
            fail("*", "*", e.what());
        }
        if (cell) {
            for (const Method& method : methods) {
                std::vector<std::size_t> ranking;
                try {
                    ranking = ranking_for(method, cell->train, config);
                } catch (const Error& e) {
                    fail(method.id(), "*", e.what());
                    continue;
                }
                for (ClassifierType type : classifiers) {
                    if (method.base && type == ClassifierType::LDA) continue;
                    try {
                        RunRecord r = evaluate(*cell, method, ranking, type, config, seed);
                        r.model_id = task.spec->id;
                        r.n = task.n;
                        r.run = task.run;
                        out.records.push_back(std::move(r));
                    } catch (const Error& e) {
                        fail(method.id(), std::string(classifier_name(type)), e.what());
                    }
                }
            }
        }
        const std::size_t finished = ++done;
        if (progress) {
            std::lock_guard lock(progress_mutex);
            progress(finished, tasks.size());
        }
    });

    ExperimentResult result;
    for (auto& p : partial) {
        std::move(p.records.begin(), p.records.end(), std::back_inserter(result.records));
        std::move(p.failures.begin(), p.failures.end(), std::back_inserter(result.failures));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Rankings

std::string_view ranking_name(RankingScheme s) noexcept {
    switch (s) {
        case RankingScheme::Relative: return "Relative";
        case RankingScheme::Positional: return "Positional";
        case RankingScheme::F1: return "F1";
    }
    return "?";
}

MethodScores rank_relative(const MethodScores& accuracy) {
    if (accuracy.empty()) throw ConfigError("ranking needs at least one method");
    double W = -std::numeric_limits<double>::infinity(), w = std::numeric_limits<double>::infinity();
    for (const auto& [m, u] : accuracy) {
        W = std::max(W, u);
        w = std::min(w, u);
    }
    MethodScores out;
    for (const auto& [m, u] : accuracy) out[m] = W > w ? 10.0 * (u - w) / (W - w) : 10.0;
    return out;
}

namespace {

MethodScores rank_by_points(const MethodScores& accuracy, const std::function<double(std::size_t)>& points) {
    if (accuracy.empty()) throw ConfigError("ranking needs at least one method");
    std::vector<std::pair<std::string, double>> v(accuracy.begin(), accuracy.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    MethodScores out;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j].second == v[i].second) ++j;
        double total = 0.0;
        for (std::size_t p = i; p < j; ++p) total += points(p);
        for (std::size_t p = i; p < j; ++p) out[v[p].first] = total / static_cast<double>(j - i);
        i = j;
    }
    return out;
}

}  // namespace

MethodScores rank_positional(const MethodScores& accuracy) {
    return rank_by_points(accuracy, [](std::size_t pos) { return std::max(0.0, 10.0 - static_cast<double>(pos)); });
}

MethodScores rank_f1(const MethodScores& accuracy) {
    return rank_by_points(accuracy, [](std::size_t pos) { return pos < std::size(kF1Points) ? kF1Points[pos] : 0.0; });
}

// ---------------------------------------------------------------------------
// Aggregation

const CellSummary* ExperimentReport::find(std::string_view classifier, std::size_t n, std::string_view method) const {
    for (const auto& c : cells)
        if (c.classifier == classifier && c.n == n && c.method == method) return &c;
    return nullptr;
}

namespace {

std::size_t model_position(const std::string& id) {
    const auto& cat = catalog();
    for (std::size_t i = 0; i < cat.size(); ++i)
        if (cat[i].id == id) return i;
    return cat.size();
}

}  // namespace

ExperimentReport aggregate(std::span<const RunRecord> records) {
    if (records.empty()) throw AggregationError("no run records to aggregate");

    // (classifier, n, method, model) -> per-run values
    using Key = std::tuple<std::string, std::size_t, std::string, std::string>;
    std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
    std::set<std::tuple<std::string, std::size_t, std::string, std::string, std::size_t>> seen;
    std::set<std::string> methods, classifiers, models;
    std::set<std::size_t> sizes;
    for (const auto& r : records) {
        if (!seen.insert({r.model_id, r.n, r.method, r.classifier, r.run}).second) {
            throw AggregationError("duplicate record for " + r.model_id + " n=" + std::to_string(r.n) + " " +
                                   r.method + "/" + r.classifier + " run " + std::to_string(r.run));
        }
        auto& g = groups[{r.classifier, r.n, r.method, r.model_id}];
        g.first.push_back(r.accuracy);
        g.second.push_back(static_cast<double>(r.dim));
        methods.insert(r.method);
        classifiers.insert(r.classifier);
        models.insert(r.model_id);
        sizes.insert(r.n);
    }

    ExperimentReport rep;
    rep.methods.assign(methods.begin(), methods.end());
    std::stable_sort(rep.methods.begin(), rep.methods.end(),
                     [](const auto& a, const auto& b) { return method_order(a) < method_order(b); });
    rep.classifiers.assign(classifiers.begin(), classifiers.end());
    std::stable_sort(rep.classifiers.begin(), rep.classifiers.end(),
                     [](const auto& a, const auto& b) { return classifier_order(a) < classifier_order(b); });
    rep.sample_sizes.assign(sizes.begin(), sizes.end());
    std::vector<std::string> model_list(models.begin(), models.end());
    std::stable_sort(model_list.begin(), model_list.end(),
                     [](const auto& a, const auto& b) { return model_position(a) < model_position(b); });

    auto mean = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };

    for (const auto& clf : rep.classifiers) {
        for (auto n : rep.sample_sizes) {
            // model -> method -> mean accuracy
            std::map<std::string, std::map<std::string, double>> acc_by_model;
            std::optional<std::set<std::string>> model_set;
            for (const auto& method : rep.methods) {
                std::set<std::string> these;
                double acc_sum = 0.0, dim_sum = 0.0;
                for (const auto& model : model_list) {
                    auto it = groups.find({clf, n, method, model});
                    if (it == groups.end()) continue;
                    these.insert(model);
                    const double a = mean(it->second.first), d = mean(it->second.second);
                    acc_by_model[model][method] = a;
                    acc_sum += a;
                    dim_sum += d;
                    rep.per_model.push_back({model, n, clf, method, a, d, it->second.first.size()});
                }
                if (these.empty()) continue;
                if (model_set && *model_set != these) {
                    throw AggregationError("methods cover different model sets for " + clf + " n=" +
                                           std::to_string(n));
                }
                model_set = these;
                const double k = static_cast<double>(these.size());
                rep.cells.push_back({clf, n, method, acc_sum / k, dim_sum / k, std::nullopt, these.size()});
            }

            const bool has_base = std::any_of(acc_by_model.begin(), acc_by_model.end(),
                                              [](const auto& kv) { return kv.second.count("Base") > 0; });
            if (has_base) {
                for (auto& cell : rep.cells) {
                    if (cell.classifier != clf || cell.n != n || cell.method == "Base") continue;
                    std::size_t wins = 0;
                    for (const auto& [model, by_method] : acc_by_model)
                        if (by_method.at(cell.method) > by_method.at("Base")) ++wins;
                    cell.victories = wins;
                }
            }

            std::vector<std::string> ranked;
            for (const auto& m : rep.methods)
                if (m != "Base" && !acc_by_model.empty() && acc_by_model.begin()->second.count(m)) ranked.push_back(m);
            if (ranked.empty()) continue;
            for (RankingScheme scheme : {RankingScheme::Relative, RankingScheme::Positional, RankingScheme::F1}) {
                RankingSummary rs{clf, n, scheme, {}};
                for (const auto& m : ranked) rs.mean_score[m] = 0.0;
                for (const auto& [model, by_method] : acc_by_model) {
                    MethodScores acc;
                    for (const auto& m : ranked) acc[m] = by_method.at(m);
                    const MethodScores s = scheme == RankingScheme::Relative     ? rank_relative(acc)
                                           : scheme == RankingScheme::Positional ? rank_positional(acc)
                                                                                 : rank_f1(acc);
                    for (const auto& [m, v] : s) rs.mean_score[m] += v;
                }
                for (auto& [m, v] : rs.mean_score) v /= static_cast<double>(acc_by_model.size());
                rep.rankings.push_back(std::move(rs));
            }
        }
    }
    return rep;
}

}  // namespace fmrmr
