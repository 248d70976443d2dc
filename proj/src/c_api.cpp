#include "fmrmr.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "fmrmr/data_io.hpp"
#include "fmrmr/error.hpp"
#include "fmrmr/harness.hpp"
#include "fmrmr/mrmr.hpp"
#include "fmrmr/simulate.hpp"

struct fmrmr_dataset {
    fmrmr::FunctionalDataset data;
};

struct fmrmr_selection {
    fmrmr::SelectionResult result;
};

namespace {

thread_local std::string last_error;

fmrmr_status fail(fmrmr_status status, const char* message) {
    last_error = message;
    return status;
}

// Runs f, mapping library exceptions onto status codes.
template <class F>
fmrmr_status guarded(F&& f) noexcept {
    using namespace fmrmr;
    try {
        f();
        last_error.clear();
        return FMRMR_OK;
    } catch (const IndexError& e) {
        return fail(FMRMR_ERR_INDEX, e.what());
    } catch (const ShapeError& e) {
        return fail(FMRMR_ERR_SHAPE, e.what());
    } catch (const DegenerateClassesError& e) {
        return fail(FMRMR_ERR_DEGENERATE, e.what());
    } catch (const ConfigError& e) {
        return fail(FMRMR_ERR_CONFIG, e.what());
    } catch (const NumericalError& e) {
        return fail(FMRMR_ERR_NUMERICAL, e.what());
    } catch (const CatalogError& e) {
        return fail(FMRMR_ERR_CATALOG, e.what());
    } catch (const ParseError& e) {
        return fail(FMRMR_ERR_PARSE, e.what());
    } catch (const LabelError& e) {
        return fail(FMRMR_ERR_LABEL, e.what());
    } catch (const IoError& e) {
        return fail(FMRMR_ERR_IO, e.what());
    } catch (const AggregationError& e) {
        return fail(FMRMR_ERR_AGGREGATION, e.what());
    } catch (const EmptySetError& e) {
        return fail(FMRMR_ERR_EMPTY_SET, e.what());
    } catch (const std::exception& e) {
        return fail(FMRMR_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FMRMR_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* what) {
    if (!p) throw fmrmr::ConfigError(std::string(what) + " must not be null");
}

void require_capacity(std::size_t capacity, std::size_t needed) {
    if (capacity < needed) {
        throw fmrmr::ShapeError("output buffer holds " + std::to_string(capacity) + " values, " +
                                std::to_string(needed) + " needed");
    }
}

fmrmr_dataset* wrap(fmrmr::FunctionalDataset ds) {
    return new fmrmr_dataset{std::move(ds)};
}

fmrmr::ExperimentConfig config_or_default(const char* json) {
    if (!json || !*json) return {};
    return fmrmr::parse_config(json);
}

}  // namespace

extern "C" {

const char* fmrmr_last_error(void) { return last_error.c_str(); }

const char* fmrmr_status_name(fmrmr_status status) {
    switch (status) {
        case FMRMR_OK: return "ok";
        case FMRMR_ERR_INDEX: return "index error";
        case FMRMR_ERR_SHAPE: return "shape error";
        case FMRMR_ERR_DEGENERATE: return "degenerate classes";
        case FMRMR_ERR_CONFIG: return "config error";
        case FMRMR_ERR_NUMERICAL: return "numerical error";
        case FMRMR_ERR_CATALOG: return "catalog error";
        case FMRMR_ERR_PARSE: return "parse error";
        case FMRMR_ERR_LABEL: return "label error";
        case FMRMR_ERR_IO: return "i/o error";
        case FMRMR_ERR_AGGREGATION: return "aggregation error";
        case FMRMR_ERR_EMPTY_SET: return "empty set";
        case FMRMR_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* fmrmr_version(void) { return "1.0.0"; }

fmrmr_status fmrmr_dataset_create(const double* grid, size_t n_points, const double* values, size_t n_samples,
                                  const int32_t* labels, fmrmr_dataset** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(grid, "grid");
        require(values, "values");
        require(labels, "labels");
        fmrmr::Grid g(std::vector<double>(grid, grid + n_points));
        fmrmr::Matrix m(n_samples, n_points, std::vector<double>(values, values + n_samples * n_points));
        *out = wrap(fmrmr::FunctionalDataset(std::move(g), std::move(m), fmrmr::Labels(labels, labels + n_samples)));
    });
}

fmrmr_status fmrmr_dataset_load_csv(const char* path, fmrmr_dataset** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(path, "path");
        *out = wrap(fmrmr::load_csv(path));
    });
}

fmrmr_status fmrmr_dataset_write_csv(const fmrmr_dataset* dataset, const char* path) {
    return guarded([&] {
        require(dataset, "dataset");
        require(path, "path");
        fmrmr::write_csv(path, dataset->data);
    });
}

fmrmr_status fmrmr_simulate(const char* model_id, size_t n, uint64_t seed, fmrmr_dataset** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(model_id, "model_id");
        const auto& spec = fmrmr::find_model(model_id);
        *out = wrap(fmrmr::generate(spec, fmrmr::make_default_grid(), n, fmrmr::RngSeed{seed}));
    });
}

fmrmr_status fmrmr_differentiate(const fmrmr_dataset* dataset, int order, fmrmr_dataset** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(dataset, "dataset");
        *out = wrap(fmrmr::differentiate(dataset->data, order));
    });
}

void fmrmr_dataset_free(fmrmr_dataset* dataset) { delete dataset; }

size_t fmrmr_dataset_samples(const fmrmr_dataset* dataset) { return dataset ? dataset->data.n_samples() : 0; }

size_t fmrmr_dataset_points(const fmrmr_dataset* dataset) { return dataset ? dataset->data.n_points() : 0; }

fmrmr_status fmrmr_dataset_grid(const fmrmr_dataset* dataset, double* out, size_t capacity) {
    return guarded([&] {
        require(dataset, "dataset");
        require(out, "out");
        const auto& t = dataset->data.grid().points();
        require_capacity(capacity, t.size());
        std::copy(t.begin(), t.end(), out);
    });
}

fmrmr_status fmrmr_dataset_labels(const fmrmr_dataset* dataset, int32_t* out, size_t capacity) {
    return guarded([&] {
        require(dataset, "dataset");
        require(out, "out");
        const auto& y = dataset->data.labels();
        require_capacity(capacity, y.size());
        std::copy(y.begin(), y.end(), out);
    });
}

fmrmr_status fmrmr_dataset_column(const fmrmr_dataset* dataset, size_t j, double* out, size_t capacity) {
    return guarded([&] {
        require(dataset, "dataset");
        require(out, "out");
        const auto col = fmrmr::column(dataset->data, j);
        require_capacity(capacity, col.size());
        std::copy(col.begin(), col.end(), out);
    });
}

fmrmr_status fmrmr_relevance(const char* measure, const double* x, const int32_t* labels, size_t n, double* out) {
    return guarded([&] {
        require(measure, "measure");
        require(x, "x");
        require(labels, "labels");
        require(out, "out");
        *out = fmrmr::measure_from_name(measure).relevance({x, n}, {labels, n});
    });
}

fmrmr_status fmrmr_redundancy(const char* measure, const double* u, const double* v, size_t n, double* out) {
    return guarded([&] {
        require(measure, "measure");
        require(u, "u");
        require(v, "v");
        require(out, "out");
        *out = fmrmr::measure_from_name(measure).redundancy({u, n}, {v, n});
    });
}

fmrmr_status fmrmr_select(const fmrmr_dataset* dataset, const char* measure, const char* criterion, size_t k,
                          fmrmr_selection** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(dataset, "dataset");
        require(measure, "measure");
        require(criterion, "criterion");
        auto r = fmrmr::select(dataset->data, fmrmr::measure_from_name(measure),
                               fmrmr::criterion_from_name(criterion), k);
        *out = new fmrmr_selection{std::move(r)};
    });
}

fmrmr_status fmrmr_select_max_relevance(const fmrmr_dataset* dataset, const char* measure, size_t k,
                                        fmrmr_selection** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(dataset, "dataset");
        require(measure, "measure");
        auto r = fmrmr::select_by_max_relevance(dataset->data, fmrmr::measure_from_name(measure), k);
        *out = new fmrmr_selection{std::move(r)};
    });
}

size_t fmrmr_selection_size(const fmrmr_selection* selection) {
    return selection ? selection->result.indices.size() : 0;
}

fmrmr_status fmrmr_selection_get(const fmrmr_selection* selection, size_t step, size_t* index, double* score) {
    return guarded([&] {
        require(selection, "selection");
        const auto& r = selection->result;
        if (step >= r.indices.size()) {
            throw fmrmr::IndexError("step " + std::to_string(step) + " out of range (size " +
                                    std::to_string(r.indices.size()) + ")");
        }
        if (index) *index = r.indices[step];
        if (score) *score = r.step_scores[step];
    });
}

void fmrmr_selection_free(fmrmr_selection* selection) { delete selection; }

size_t fmrmr_catalog_size(void) { return fmrmr::catalog().size(); }

fmrmr_status fmrmr_catalog_entry(size_t position, const char** id, const char** description) {
    static const std::vector<std::string> descriptions = [] {
        std::vector<std::string> d;
        for (const auto& m : fmrmr::catalog()) d.push_back(m.describe());
        return d;
    }();
    return guarded([&] {
        const auto& cat = fmrmr::catalog();
        if (position >= cat.size()) {
            throw fmrmr::IndexError("catalog position " + std::to_string(position) + " out of range");
        }
        if (id) *id = cat[position].id.c_str();
        if (description) *description = descriptions[position].c_str();
    });
}

fmrmr_status fmrmr_config_resolve(const char* config_json, char** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        const auto config = config_or_default(config_json);
        config.validate();
        const std::string s = fmrmr::config_to_json(config);
        char* buf = static_cast<char*>(std::malloc(s.size() + 1));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, s.c_str(), s.size() + 1);
        *out = buf;
    });
}

void fmrmr_string_free(char* s) { std::free(s); }

fmrmr_status fmrmr_bench(const char* config_json, const char* out_dir, unsigned threads, size_t* failed_runs) {
    return guarded([&] {
        require(config_json, "config_json");
        require(out_dir, "out_dir");
        if (failed_runs) *failed_runs = 0;
        const auto config = fmrmr::parse_config(config_json);
        const auto result = fmrmr::run_experiment(config, threads);
        if (failed_runs) *failed_runs = result.failures.size();
        const auto report = fmrmr::aggregate(result.records);
        fmrmr::write_report_files(out_dir, result.records, report);
    });
}

fmrmr_status fmrmr_rank(const char* runs_csv, const char* out_dir) {
    return guarded([&] {
        require(runs_csv, "runs_csv");
        require(out_dir, "out_dir");
        const auto records = fmrmr::read_runs_csv(runs_csv);
        const auto report = fmrmr::aggregate(records);
        fmrmr::write_report_files(out_dir, records, report);
    });
}

fmrmr_status fmrmr_cross_validate(const fmrmr_dataset* dataset, size_t k_folds, uint64_t seed, const char* method,
                                  const char* classifier, const char* config_json, unsigned threads,
                                  fmrmr_cv_result* out) {
    return guarded([&] {
        require(dataset, "dataset");
        require(method, "method");
        require(classifier, "classifier");
        require(out, "out");
        const auto plan = k_folds == 0 ? fmrmr::CVPlan::leave_one_out() : fmrmr::CVPlan::kfold(k_folds, seed);
        auto config = config_or_default(config_json);
        const auto r = fmrmr::cross_validate(dataset->data, plan, method, classifier, config, threads);
        *out = fmrmr_cv_result{r.accuracy, r.mean_dim, r.folds, r.fits, r.skipped_folds.size()};
    });
}

}  // extern "C"
