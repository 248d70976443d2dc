#include "fmrmr/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "fmrmr/error.hpp"
#include "fmrmr/mrmr.hpp"
#include "fmrmr/rng.hpp"
#include "parallel.hpp"

namespace fmrmr {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

Grid grid_from_header(const std::vector<std::string>& cells) {
    std::vector<double> t(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size() && numeric; ++i) numeric = parse_number(cells[i], t[i]);
    if (numeric) {
        bool valid = std::all_of(t.begin(), t.end(), [](double x) { return x > 0.0 && x <= 1.0; });
        for (std::size_t i = 1; i < t.size() && valid; ++i) valid = t[i] > t[i - 1];
        if (valid) return Grid(std::move(t));
    }
    return make_ordinal_grid(cells.size());
}

}  // namespace

FunctionalDataset parse_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
            if (!trim(line).empty()) return true;
        }
        return false;
    };
    if (!next_line()) throw ParseError("missing header row", 1);
    auto header = split(line);
    if (header.size() < 2 || header.back() != "label") {
        throw ParseError("header must end with a 'label' column", line_no);
    }
    header.pop_back();
    const std::size_t N = header.size();
    Grid grid = grid_from_header(header);

    std::vector<double> values;
    Labels labels;
    while (next_line()) {
        const auto cells = split(line);
        if (cells.size() != N + 1) {
            throw ParseError("expected " + std::to_string(N + 1) + " fields, found " + std::to_string(cells.size()),
                             line_no);
        }
        for (std::size_t j = 0; j < N; ++j) {
            double x;
            if (!parse_number(cells[j], x) || !std::isfinite(x)) {
                throw ParseError("non-numeric value '" + cells[j] + "'", line_no);
            }
            values.push_back(x);
        }
        double y;
        if (!parse_number(cells[N], y)) throw ParseError("non-numeric label '" + cells[N] + "'", line_no);
        if (y != 0.0 && y != 1.0) {
            throw LabelError("label '" + cells[N] + "' on line " + std::to_string(line_no) + " is not 0 or 1");
        }
        labels.push_back(static_cast<Label>(y));
    }
    const std::size_t n = labels.size();
    return FunctionalDataset(std::move(grid), Matrix(n, N, std::move(values)), std::move(labels));
}

FunctionalDataset load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

std::string to_csv(const FunctionalDataset& ds) {
    char buf[40];
    std::string s;
    for (double t : ds.grid().points()) {
        std::snprintf(buf, sizeof buf, "%.17g,", t);
        s += buf;
    }
    s += "label\n";
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        for (double x : ds.values().row(i)) {
            std::snprintf(buf, sizeof buf, "%.17g,", x);
            s += buf;
        }
        s += std::to_string(ds.labels()[i]) + '\n';
    }
    return s;
}

void write_csv(const std::string& path, const FunctionalDataset& dataset) {
    write_text_file(path, to_csv(dataset));
}

FunctionalDataset differentiate(const FunctionalDataset& ds, int order) {
    if (order != 1 && order != 2) throw ConfigError("derivative order must be 1 or 2");
    const std::size_t N = ds.n_points();
    if (N < static_cast<std::size_t>(order) + 1) {
        throw ShapeError("derivative of order " + std::to_string(order) + " needs at least " +
                         std::to_string(order + 1) + " grid points");
    }
    const auto& t = ds.grid().points();

    // Weights w[j] over the stencil points a, a+1, a+2 for each output point.
    struct Stencil {
        std::size_t a;
        std::size_t width;
        double w[3];
    };
    std::vector<Stencil> stencils(N);
    for (std::size_t i = 0; i < N; ++i) {
        Stencil& s = stencils[i];
        if (N == 2) {
            s.a = 0;
            s.width = 2;
            s.w[0] = -1.0 / (t[1] - t[0]);
            s.w[1] = 1.0 / (t[1] - t[0]);
            continue;
        }
        s.a = i == 0 ? 0 : (i == N - 1 ? N - 3 : i - 1);
        s.width = 3;
        const double p[3] = {t[s.a], t[s.a + 1], t[s.a + 2]};
        for (int k = 0; k < 3; ++k) {
            const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
            const double denom = (p[k] - p[k1]) * (p[k] - p[k2]);
            s.w[k] = order == 1 ? (2.0 * t[i] - p[k1] - p[k2]) / denom : 2.0 / denom;
        }
    }

    Matrix out(ds.n_samples(), N);
    for (std::size_t r = 0; r < ds.n_samples(); ++r) {
        const auto x = ds.values().row(r);
        for (std::size_t i = 0; i < N; ++i) {
            const Stencil& s = stencils[i];
            double d = 0.0;
            for (std::size_t k = 0; k < s.width; ++k) d += s.w[k] * x[s.a + k];
            out(r, i) = d;
        }
    }
    return FunctionalDataset(ds.grid(), std::move(out), ds.labels());
}

std::vector<std::vector<std::size_t>> cv_folds(std::size_t n, const CVPlan& plan) {
    if (n == 0) throw ConfigError("cannot build folds over an empty dataset");
    if (plan.kind == CVPlan::Kind::LeaveOneOut) {
        std::vector<std::vector<std::size_t>> folds(n);
        for (std::size_t i = 0; i < n; ++i) folds[i] = {i};
        return folds;
    }
    if (plan.k < 2) throw ConfigError("k-fold needs k >= 2");
    if (plan.k > n) throw ConfigError("k-fold needs k <= number of samples");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Engine rng(plan.seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<std::size_t>> folds(plan.k);
    for (std::size_t p = 0; p < n; ++p) folds[p % plan.k].push_back(order[p]);
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

namespace {

struct FoldOutcome {
    bool skipped = false;
    std::size_t correct = 0;
    std::size_t scored = 0;
    std::size_t dim = 0;
};

// Stratified split of `rows` into (train, validation) with ~20 % of each
// class in validation.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> inner_split(const FunctionalDataset& ds,
                                                                          const std::vector<std::size_t>& rows,
                                                                          std::uint64_t seed) {
    Engine rng(seed);
    std::vector<std::size_t> train, val;
    for (Label c : {0, 1}) {
        std::vector<std::size_t> members;
        for (auto r : rows)
            if (ds.labels()[r] == c) members.push_back(r);
        std::shuffle(members.begin(), members.end(), rng);
        std::size_t n_val = static_cast<std::size_t>(std::lround(0.2 * static_cast<double>(members.size())));
        if (members.size() >= 2) n_val = std::clamp<std::size_t>(n_val, 1, members.size() - 1);
        else n_val = 0;
        val.insert(val.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_val));
        train.insert(train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_val), members.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(val.begin(), val.end());
    return {train, val};
}

std::vector<std::size_t> ranking(const FunctionalDataset& train, const Method& method, std::size_t max_dim) {
    if (method.base) {
        std::vector<std::size_t> all(train.n_points());
        std::iota(all.begin(), all.end(), std::size_t{1});
        return all;
    }
    return select(train, AssociationMeasure(method.measure), method.criterion, std::min(max_dim, train.n_points()))
        .indices;
}

}  // namespace

CVResult cross_validate(const FunctionalDataset& ds, const CVPlan& plan, std::string_view method_name,
                        std::string_view classifier, const ExperimentConfig& config, unsigned threads) {
    const Method method = Method::from_name(method_name);
    const ClassifierType type = classifier_type_from_name(classifier);
    if (config.dim_candidates.empty()) throw ConfigError("dim_candidates is empty");
    const auto folds = cv_folds(ds.n_samples(), plan);
    const std::size_t max_dim = *std::max_element(config.dim_candidates.begin(), config.dim_candidates.end());
    const std::vector<std::size_t> base_dims{ds.n_points()};
    const auto dims = method.base ? std::span<const std::size_t>(base_dims)
                                  : std::span<const std::size_t>(config.dim_candidates);

    std::vector<FoldOutcome> outcomes(folds.size());
    detail::parallel_for(folds.size(), threads, [&](std::size_t f) {
        FoldOutcome& out = outcomes[f];
        std::vector<char> held(ds.n_samples(), 0);
        for (auto i : folds[f]) held[i] = 1;
        std::vector<std::size_t> train_rows;
        for (std::size_t i = 0; i < ds.n_samples(); ++i)
            if (!held[i]) train_rows.push_back(i);
        const FunctionalDataset train = ds.subset(train_rows);
        const std::uint64_t fold_seed = derive_seed(config.seed, {plan.seed, f});
        const auto [inner_train_rows, inner_val_rows] = inner_split(ds, train_rows, derive_seed(fold_seed, {1}));
        const FunctionalDataset inner_train = ds.subset(inner_train_rows);
        if (!train.has_both_classes() || !inner_train.has_both_classes() || inner_val_rows.empty()) {
            out.skipped = true;
            return;
        }
        const FunctionalDataset inner_val = ds.subset(inner_val_rows);
        const std::uint64_t fit_seed = derive_seed(fold_seed, {2});

        const auto inner_rank = ranking(inner_train, method, max_dim);
        const TunedModel tuned = tune_classifier(inner_train, inner_val, inner_rank, dims, type, config, fit_seed);

        const auto full_rank = ranking(train, method, tuned.dim);
        std::vector<std::size_t> cols(tuned.dim);
        for (std::size_t i = 0; i < tuned.dim; ++i) cols[i] = full_rank[i] - 1;
        const TrainedModel model =
            fit(classifier_kind(type, tuned.hyperparameter, fit_seed), train.values().select_columns(cols),
                train.labels());
        const FunctionalDataset test = ds.subset(folds[f]);
        const auto pred = predict(model, test.values().select_columns(cols));
        for (std::size_t i = 0; i < pred.size(); ++i) out.correct += pred[i] == test.labels()[i];
        out.scored = pred.size();
        out.dim = tuned.dim;
    });

    CVResult r;
    r.folds = folds.size();
    std::size_t correct = 0, scored = 0, dim_sum = 0;
    for (std::size_t f = 0; f < outcomes.size(); ++f) {
        if (outcomes[f].skipped) {
            r.skipped_folds.push_back(f);
            continue;
        }
        ++r.fits;
        correct += outcomes[f].correct;
        scored += outcomes[f].scored;
        dim_sum += outcomes[f].dim;
    }
    if (r.fits == 0) throw DegenerateClassesError("every training fold held a single class");
    r.accuracy = static_cast<double>(correct) / static_cast<double>(scored);
    r.mean_dim = static_cast<double>(dim_sum) / static_cast<double>(r.fits);
    return r;
}

}  // namespace fmrmr
