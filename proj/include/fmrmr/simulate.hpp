#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fmrmr/core.hpp"
#include "fmrmr/rng.hpp"

namespace fmrmr {

enum class ProcessKind { BrownianMotion, BrownianBridge, OrnsteinUhlenbeck, SmoothedBrownian, DoublySmoothedBrownian };

/// Gaussian kernel bandwidths used for the sB / ssB processes.
inline constexpr double kSmoothBandwidth = 0.05;
inline constexpr double kDoublySmoothBandwidth = 0.10;

std::string_view process_name(ProcessKind kind) noexcept;

/// Phi_{m,k}(t): integral over [0, t] of the Haar-type bump
/// sqrt(2^(m-1)) * (1 on ((2k-2)/2^m, (2k-1)/2^m) minus 1 on ((2k-1)/2^m, 2k/2^m)).
/// k may be fractional.
double peak_function(int m, double k, double t);

/// b * (t - t0) for t >= t0, else 0.
double hillside_function(double t0, double b, double t);

struct MeanTerm {
    enum class Kind { Linear, RandomSlope, Peak, Hillside };
    Kind kind;
    double a = 0.0;  // Linear: slope; RandomSlope: N(0, a) parameter; Peak: scale; Hillside: t0
    double b = 0.0;  // Peak: m; Hillside: slope
    double c = 0.0;  // Peak: k
};

/// Sum of trend terms; an empty sum is the zero mean.
struct MeanFunction {
    std::vector<MeanTerm> terms;

    static MeanFunction zero() { return {}; }
    static MeanFunction linear(double slope) { return {{{MeanTerm::Kind::Linear, slope}}}; }
    static MeanFunction random_slope(double param) { return {{{MeanTerm::Kind::RandomSlope, param}}}; }
    static MeanFunction peak(int m, double k, double scale) {
        return {{{MeanTerm::Kind::Peak, scale, static_cast<double>(m), k}}};
    }
    static MeanFunction hillside(double t0, double slope) { return {{{MeanTerm::Kind::Hillside, t0, slope}}}; }
    MeanFunction operator+(const MeanFunction& other) const;

    bool has_random_slope() const noexcept;
    /// Mean at t given the path's random slope draw (ignored when unused).
    double evaluate(double t, double slope_draw) const;
    std::string describe() const;
};

struct PathLaw {
    ProcessKind process = ProcessKind::BrownianMotion;
    MeanFunction mean;
    std::string describe() const;
};

struct MixtureComponent {
    PathLaw law;
    double weight = 1.0;
};

/// X | Y = 0 and X | Y = 1 given directly; P(Y = 0) = 1/2.
struct TwoClassMechanism {
    PathLaw class0;
    PathLaw class1;
};

/// Class-conditional laws that are finite mixtures; P(Y = 0) = 1/2.
struct MixtureMechanism {
    std::vector<MixtureComponent> class0;
    std::vector<MixtureComponent> class1;
};

/// One factor f(X_index) of a psi term; index is a 1-based grid index.
struct PsiFactor {
    enum class Transform { Power, Abs, Reciprocal, Log };
    std::size_t index = 1;
    Transform transform = Transform::Power;
    int power = 1;
};

struct PsiTerm {
    double coef = 0.0;
    std::vector<PsiFactor> factors;
};

/// X drawn from a process; Y ~ Bernoulli(1 / (1 + exp(-psi(X)))).
struct LogisticMechanism {
    PathLaw law;
    std::vector<PsiTerm> psi;
    double evaluate_psi(std::span<const double> path) const;
    std::string describe_psi() const;
};

using Mechanism = std::variant<TwoClassMechanism, MixtureMechanism, LogisticMechanism>;

struct ModelSpec {
    std::string id;
    Mechanism mechanism;
    std::vector<std::size_t> relevant_variables;  // 1-based grid indices
    std::string note;                             // transcription repairs, if any
    std::string describe() const;
};

/// P(Y = 1 | psi), with psi = +-inf mapping to 1 / 0 and NaN to 1/2.
double logistic_probability(double psi);

struct SimulationOptions {
    /// Read N(0, s) random-slope parameters as variances (true) or as
    /// standard deviations (false).
    bool slope_param_is_variance = false;
    /// Redraws (with a derived seed) when a sample comes out single-class.
    std::size_t max_retries = 64;
};

/// Grid-dependent precomputation for drawing single paths.
class PathSampler {
public:
    explicit PathSampler(const Grid& grid);

    const Grid& grid() const noexcept { return grid_; }
    /// Zero-mean path of the given process written into out (length N).
    void sample(ProcessKind kind, Engine& rng, std::span<double> out) const;

private:
    void sample_brownian_on(std::span<const double> times, Engine& rng, std::span<double> out) const;
    void sample_smoothed(const std::vector<double>& weights, Engine& rng, std::span<double> out) const;

    Grid grid_;
    std::vector<double> bridge_times_;  // grid plus the endpoint 1
    std::vector<double> ou_factor_;     // lower Cholesky factor of exp(-|s - t|), row-major N x N
    std::vector<double> fine_times_;
    std::vector<double> smooth_weights_;   // N x fine, rows sum to 1
    std::vector<double> smooth2_weights_;
};

Matrix sample_brownian(const Grid& grid, std::size_t n, RngSeed seed);
Matrix sample_bridge(const Grid& grid, std::size_t n, RngSeed seed);
Matrix sample_ou(const Grid& grid, std::size_t n, RngSeed seed, const MeanFunction& mean_fn);
/// level 1 = sB, level 2 = ssB.
Matrix sample_smoothed_brownian(const Grid& grid, std::size_t n, RngSeed seed, int level);

FunctionalDataset generate(const ModelSpec& model, const Grid& grid, std::size_t n, RngSeed seed,
                           const SimulationOptions& options = {});

using ModelCatalog = std::vector<ModelSpec>;

/// The 100 simulation models, in their canonical order.
const ModelCatalog& catalog();
/// Throws CatalogError for unknown ids.
const ModelSpec& find_model(std::string_view id);

}  // namespace fmrmr
