#include "fmrmr/simulate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "fmrmr/error.hpp"

namespace fmrmr {

namespace {

std::string fmt_num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

std::string_view process_name(ProcessKind kind) noexcept {
    switch (kind) {
        case ProcessKind::BrownianMotion: return "B";
        case ProcessKind::BrownianBridge: return "BB";
        case ProcessKind::OrnsteinUhlenbeck: return "OU";
        case ProcessKind::SmoothedBrownian: return "sB";
        case ProcessKind::DoublySmoothedBrownian: return "ssB";
    }
    return "?";
}

double peak_function(int m, double k, double t) {
    const double scale = std::ldexp(1.0, m);
    const double a = (2.0 * k - 2.0) / scale;
    const double b = (2.0 * k - 1.0) / scale;
    const double c = 2.0 * k / scale;
    const double h = std::sqrt(std::ldexp(1.0, m - 1));
    return h * ((std::clamp(t, a, b) - a) - (std::clamp(t, b, c) - b));
}

double hillside_function(double t0, double b, double t) { return t >= t0 ? b * (t - t0) : 0.0; }

MeanFunction MeanFunction::operator+(const MeanFunction& other) const {
    MeanFunction out = *this;
    out.terms.insert(out.terms.end(), other.terms.begin(), other.terms.end());
    return out;
}

bool MeanFunction::has_random_slope() const noexcept {
    return std::any_of(terms.begin(), terms.end(),
                       [](const MeanTerm& m) { return m.kind == MeanTerm::Kind::RandomSlope; });
}

double MeanFunction::evaluate(double t, double slope_draw) const {
    double s = 0.0;
    for (const auto& term : terms) {
        switch (term.kind) {
            case MeanTerm::Kind::Linear: s += term.a * t; break;
            case MeanTerm::Kind::RandomSlope: s += slope_draw * t; break;
            case MeanTerm::Kind::Peak: s += term.a * peak_function(static_cast<int>(term.b), term.c, t); break;
            case MeanTerm::Kind::Hillside: s += hillside_function(term.a, term.b, t); break;
        }
    }
    return s;
}

std::string MeanFunction::describe() const {
    std::string out;
    for (const auto& term : terms) {
        std::string piece;
        switch (term.kind) {
            case MeanTerm::Kind::Linear:
                piece = (term.a < 0 ? "- " + fmt_num(-term.a) : "+ " + (term.a == 1.0 ? "" : fmt_num(term.a))) + "t";
                break;
            case MeanTerm::Kind::RandomSlope: piece = "+ theta*t (theta~N(0," + fmt_num(term.a) + "))"; break;
            case MeanTerm::Kind::Peak:
                piece = "+ " + fmt_num(term.a) + "*Phi_{" + fmt_num(term.b) + "," + fmt_num(term.c) + "}(t)";
                break;
            case MeanTerm::Kind::Hillside:
                piece = "+ hillside_{" + fmt_num(term.a) + "," + fmt_num(term.b) + "}(t)";
                break;
        }
        out += " " + piece;
    }
    return out;
}

std::string PathLaw::describe() const { return std::string(process_name(process)) + "(t)" + mean.describe(); }

double logistic_probability(double psi) {
    if (std::isnan(psi)) return 0.5;
    if (psi == std::numeric_limits<double>::infinity()) return 1.0;
    if (psi == -std::numeric_limits<double>::infinity()) return 0.0;
    return 1.0 / (1.0 + std::exp(-psi));
}

double LogisticMechanism::evaluate_psi(std::span<const double> path) const {
    double psi = 0.0;
    for (const auto& term : this->psi) {
        double v = term.coef;
        for (const auto& f : term.factors) {
            if (f.index < 1 || f.index > path.size()) throw IndexError("psi variable index out of range");
            const double x = path[f.index - 1];
            switch (f.transform) {
                case PsiFactor::Transform::Power: v *= std::pow(x, f.power); break;
                case PsiFactor::Transform::Abs: v *= std::abs(x); break;
                case PsiFactor::Transform::Reciprocal: v *= 1.0 / x; break;
                case PsiFactor::Transform::Log:
                    v *= x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
                    break;
            }
        }
        psi += v;
    }
    return psi;
}

std::string LogisticMechanism::describe_psi() const {
    std::string out;
    for (const auto& term : psi) {
        std::string piece = (term.coef < 0 ? "- " : (out.empty() ? "" : "+ ")) + fmt_num(std::abs(term.coef));
        for (const auto& f : term.factors) {
            const std::string x = "X" + std::to_string(f.index);
            switch (f.transform) {
                case PsiFactor::Transform::Power:
                    piece += "*" + x + (f.power == 1 ? "" : "^" + std::to_string(f.power));
                    break;
                case PsiFactor::Transform::Abs: piece += "*|" + x + "|"; break;
                case PsiFactor::Transform::Reciprocal: piece += "/" + x; break;
                case PsiFactor::Transform::Log: piece += "*log(" + x + ")"; break;
            }
        }
        out += (out.empty() ? "" : " ") + piece;
    }
    return out;
}

std::string ModelSpec::describe() const {
    std::string out;
    if (const auto* tc = std::get_if<TwoClassMechanism>(&mechanism)) {
        out = "two-class; mu0: " + tc->class0.describe() + "; mu1: " + tc->class1.describe();
    } else if (const auto* mx = std::get_if<MixtureMechanism>(&mechanism)) {
        auto side = [](const std::vector<MixtureComponent>& comps) {
            std::string s;
            for (const auto& c : comps) s += (s.empty() ? "" : " | ") + c.law.describe() + " w=" + fmt_num(c.weight);
            return s;
        };
        out = "mixture; mu0: " + side(mx->class0) + "; mu1: " + side(mx->class1);
    } else {
        const auto& lg = std::get<LogisticMechanism>(mechanism);
        out = "logistic; X: " + lg.law.describe() + "; psi = " + lg.describe_psi();
    }
    if (!relevant_variables.empty()) {
        out += "; variables {";
        for (std::size_t i = 0; i < relevant_variables.size(); ++i)
            out += (i ? "," : "") + std::string("X") + std::to_string(relevant_variables[i]);
        out += "}";
    }
    if (!note.empty()) out += "; note: " + note;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> kernel_weights(const std::vector<double>& targets, const std::vector<double>& fine, double h) {
    const std::size_t N = targets.size(), M = fine.size();
    std::vector<double> w(N * M);
    for (std::size_t i = 0; i < N; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            const double z = (targets[i] - fine[j]) / h;
            w[i * M + j] = std::exp(-0.5 * z * z);
            total += w[i * M + j];
        }
        for (std::size_t j = 0; j < M; ++j) w[i * M + j] /= total;
    }
    return w;
}

}  // namespace

PathSampler::PathSampler(const Grid& grid) : grid_(grid) {
    const auto& t = grid_.points();
    const std::size_t N = t.size();

    bridge_times_ = t;
    if (t.back() < 1.0) bridge_times_.push_back(1.0);

    Eigen::MatrixXd cov(N, N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) cov(i, j) = std::exp(-std::abs(t[i] - t[j]));
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        Eigen::MatrixXd c = cov;
        c.diagonal().array() += jitter;
        llt.compute(c);
        if (llt.info() == Eigen::Success) break;
        jitter = jitter == 0.0 ? 1e-12 : jitter * 10.0;
    }
    if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization of the OU covariance failed");
    Eigen::MatrixXd L = llt.matrixL();
    ou_factor_.resize(N * N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) ou_factor_[i * N + j] = L(i, j);

    // Fine grid j / M on (0, 1] with three points per smallest grid step.
    double min_step = t.front();
    for (std::size_t i = 1; i < N; ++i) min_step = std::min(min_step, t[i] - t[i - 1]);
    const auto M = static_cast<std::size_t>(3.0 * std::ceil(1.0 / min_step - 1e-9));
    fine_times_.resize(M);
    for (std::size_t j = 1; j <= M; ++j) fine_times_[j - 1] = static_cast<double>(j) / static_cast<double>(M);
    smooth_weights_ = kernel_weights(t, fine_times_, kSmoothBandwidth);
    smooth2_weights_ = kernel_weights(t, fine_times_, kDoublySmoothBandwidth);
}

void PathSampler::sample_brownian_on(std::span<const double> times, Engine& rng, std::span<double> out) const {
    std::normal_distribution<double> z(0.0, 1.0);
    double prev_t = 0.0, b = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        b += std::sqrt(times[i] - prev_t) * z(rng);
        out[i] = b;
        prev_t = times[i];
    }
}

void PathSampler::sample_smoothed(const std::vector<double>& weights, Engine& rng, std::span<double> out) const {
    const std::size_t M = fine_times_.size();
    std::vector<double> fine(M);
    sample_brownian_on(fine_times_, rng, fine);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double* w = weights.data() + i * M;
        double s = 0.0;
        for (std::size_t j = 0; j < M; ++j) s += w[j] * fine[j];
        out[i] = s;
    }
}

void PathSampler::sample(ProcessKind kind, Engine& rng, std::span<double> out) const {
    const std::size_t N = grid_.size();
    if (out.size() != N) throw ShapeError("path buffer does not match grid size");
    switch (kind) {
        case ProcessKind::BrownianMotion: sample_brownian_on(grid_.points(), rng, out); return;
        case ProcessKind::BrownianBridge: {
            std::vector<double> b(bridge_times_.size());
            sample_brownian_on(bridge_times_, rng, b);
            const double b1 = b.back();
            for (std::size_t i = 0; i < N; ++i) out[i] = b[i] - grid_[i] * b1;
            return;
        }
        case ProcessKind::OrnsteinUhlenbeck: {
            std::normal_distribution<double> zd(0.0, 1.0);
            std::vector<double> z(N);
            for (auto& v : z) v = zd(rng);
            for (std::size_t i = 0; i < N; ++i) {
                const double* L = ou_factor_.data() + i * N;
                double s = 0.0;
                for (std::size_t j = 0; j <= i; ++j) s += L[j] * z[j];
                out[i] = s;
            }
            return;
        }
        case ProcessKind::SmoothedBrownian: sample_smoothed(smooth_weights_, rng, out); return;
        case ProcessKind::DoublySmoothedBrownian: sample_smoothed(smooth2_weights_, rng, out); return;
    }
}

// ---------------------------------------------------------------------------

namespace {

Matrix sample_paths(const Grid& grid, std::size_t n, RngSeed seed, ProcessKind kind, const MeanFunction& mean) {
    if (n == 0) throw ConfigError("number of paths must be positive");
    const PathSampler sampler(grid);
    Matrix out(n, grid.size());
    for (std::size_t p = 0; p < n; ++p) {
        Engine rng(derive_seed(seed.value, {p}));
        sampler.sample(kind, rng, out.row(p));
        if (!mean.terms.empty()) {
            for (std::size_t i = 0; i < grid.size(); ++i) out(p, i) += mean.evaluate(grid[i], 0.0);
        }
    }
    return out;
}

double slope_sd(double param, const SimulationOptions& opt) { return opt.slope_param_is_variance ? std::sqrt(param) : param; }

void draw_path(const PathSampler& sampler, const PathLaw& law, Engine& noise, Engine& aux,
               const SimulationOptions& opt, std::span<double> out) {
    double slope = 0.0;
    for (const auto& term : law.mean.terms) {
        if (term.kind == MeanTerm::Kind::RandomSlope) {
            std::normal_distribution<double> d(0.0, slope_sd(term.a, opt));
            slope = d(aux);
        }
    }
    sampler.sample(law.process, noise, out);
    if (!law.mean.terms.empty()) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += law.mean.evaluate(sampler.grid()[i], slope);
    }
}

const PathLaw& pick_component(const std::vector<MixtureComponent>& comps, Engine& rng) {
    if (comps.size() == 1) return comps.front().law;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng);
    double acc = 0.0;
    for (const auto& c : comps) {
        acc += c.weight;
        if (x < acc) return c.law;
    }
    return comps.back().law;
}

// Stream tags for per-path sub-seeds.
enum : std::uint64_t { kLabelStream = 1, kComponentStream = 2, kNoiseStream = 3, kSlopeStream = 4 };

FunctionalDataset generate_once(const ModelSpec& model, const PathSampler& sampler, std::size_t n,
                                std::uint64_t seed, const SimulationOptions& opt) {
    const Grid& grid = sampler.grid();
    Matrix values(n, grid.size());
    Labels labels(n);
    for (std::size_t p = 0; p < n; ++p) {
        Engine label_rng(derive_seed(seed, {kLabelStream, p}));
        Engine comp_rng(derive_seed(seed, {kComponentStream, p}));
        Engine noise_rng(derive_seed(seed, {kNoiseStream, p}));
        Engine slope_rng(derive_seed(seed, {kSlopeStream, p}));
        auto row = values.row(p);
        std::visit(
            [&](const auto& mech) {
                using T = std::decay_t<decltype(mech)>;
                if constexpr (std::is_same_v<T, TwoClassMechanism>) {
                    const Label y = std::bernoulli_distribution(0.5)(label_rng) ? 1 : 0;
                    labels[p] = y;
                    draw_path(sampler, y == 0 ? mech.class0 : mech.class1, noise_rng, slope_rng, opt, row);
                } else if constexpr (std::is_same_v<T, MixtureMechanism>) {
                    const Label y = std::bernoulli_distribution(0.5)(label_rng) ? 1 : 0;
                    labels[p] = y;
                    const PathLaw& law = pick_component(y == 0 ? mech.class0 : mech.class1, comp_rng);
                    draw_path(sampler, law, noise_rng, slope_rng, opt, row);
                } else {
                    draw_path(sampler, mech.law, noise_rng, slope_rng, opt, row);
                    const double eta = logistic_probability(mech.evaluate_psi(row));
                    labels[p] = std::uniform_real_distribution<double>(0.0, 1.0)(label_rng) < eta ? 1 : 0;
                }
            },
            model.mechanism);
    }
    return FunctionalDataset(grid, std::move(values), std::move(labels));
}

}  // namespace

Matrix sample_brownian(const Grid& grid, std::size_t n, RngSeed seed) {
    return sample_paths(grid, n, seed, ProcessKind::BrownianMotion, {});
}

Matrix sample_bridge(const Grid& grid, std::size_t n, RngSeed seed) {
    return sample_paths(grid, n, seed, ProcessKind::BrownianBridge, {});
}

Matrix sample_ou(const Grid& grid, std::size_t n, RngSeed seed, const MeanFunction& mean_fn) {
    if (mean_fn.has_random_slope()) throw ConfigError("sample_ou takes a deterministic mean function");
    return sample_paths(grid, n, seed, ProcessKind::OrnsteinUhlenbeck, mean_fn);
}

Matrix sample_smoothed_brownian(const Grid& grid, std::size_t n, RngSeed seed, int level) {
    if (level != 1 && level != 2) throw ConfigError("smoothing level must be 1 (sB) or 2 (ssB)");
    return sample_paths(grid, n, seed,
                        level == 1 ? ProcessKind::SmoothedBrownian : ProcessKind::DoublySmoothedBrownian, {});
}

FunctionalDataset generate(const ModelSpec& model, const Grid& grid, std::size_t n, RngSeed seed,
                           const SimulationOptions& options) {
    if (n == 0) throw ConfigError("number of paths must be positive");
    if (const auto* lg = std::get_if<LogisticMechanism>(&model.mechanism)) {
        for (const auto& term : lg->psi)
            for (const auto& f : term.factors)
                if (f.index < 1 || f.index > grid.size())
                    throw ConfigError("model " + model.id + " uses X" + std::to_string(f.index) +
                                      " outside the grid");
    }
    const PathSampler sampler(grid);
    for (std::size_t attempt = 0; attempt <= options.max_retries; ++attempt) {
        auto ds = generate_once(model, sampler, n, derive_seed(seed.value, {attempt}), options);
        if (n < 2 || ds.has_both_classes()) return ds;
    }
    throw DegenerateClassesError("model " + model.id + " produced a single-class sample after " +
                                 std::to_string(options.max_retries + 1) + " attempts");
}

}  // namespace fmrmr
