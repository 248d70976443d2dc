#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "fmrmr/error.hpp"
#include "fmrmr/simulate.hpp"

using namespace fmrmr;

namespace {

double column_mean(const Matrix& m, std::size_t j) {
    double s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j);
    return s / static_cast<double>(m.rows());
}

double column_cov(const Matrix& m, std::size_t a, std::size_t b) {
    const double ma = column_mean(m, a), mb = column_mean(m, b);
    double s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += (m(i, a) - ma) * (m(i, b) - mb);
    return s / static_cast<double>(m.rows() - 1);
}

// Standard error of a sample variance of Gaussian data.
double var_se(double var, std::size_t n) { return var * std::sqrt(2.0 / static_cast<double>(n - 1)); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Kolmogorov-Smirnov distance between the column and N(0, var).
double ks_distance(const Matrix& m, std::size_t j, double var) {
    std::vector<double> x = m.column(j);
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = normal_cdf(x[i] / std::sqrt(var));
        d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    return d;
}

double mean_sq_increment(const Matrix& m) {
    double s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 1; j < m.cols(); ++j) s += (m(i, j) - m(i, j - 1)) * (m(i, j) - m(i, j - 1));
    return s / static_cast<double>(m.rows() * (m.cols() - 1));
}

const std::size_t kProbe[] = {0, 24, 49, 74, 99};

}  // namespace

// Several probes per test, so a 4 SE band keeps the family-wise false alarm
// rate low.
constexpr double kVarBand = 4.0;

TEST(Processes, BrownianVarianceAndCovariance) {
    const Grid g = make_default_grid();
    const Matrix m = sample_brownian(g, 20000, RngSeed{1});
    for (auto j : kProbe) EXPECT_NEAR(column_cov(m, j, j), g[j], kVarBand * var_se(g[j], m.rows())) << j;
    EXPECT_NEAR(column_cov(m, 20, 70), g[20], 0.03);
    EXPECT_NEAR(column_cov(m, 90, 10), g[10], 0.03);
}

TEST(Processes, BridgeVarianceAndMean) {
    const Grid g = make_default_grid();
    const Matrix m = sample_bridge(g, 20000, RngSeed{2});
    for (auto j : kProbe) {
        const double v = g[j] * (1 - g[j]);
        EXPECT_NEAR(column_cov(m, j, j), v, kVarBand * var_se(v, m.rows())) << j;
        EXPECT_NEAR(column_mean(m, j), 0.0, 4 * std::sqrt(v / m.rows()));
    }
    // Cov = min(s,t) - st.
    EXPECT_NEAR(column_cov(m, 30, 60), g[30] - g[30] * g[60], 0.02);
}

TEST(Processes, OrnsteinUhlenbeckStationary) {
    const Grid g = make_default_grid();
    const Matrix m = sample_ou(g, 20000, RngSeed{3}, MeanFunction::zero());
    for (auto j : kProbe) EXPECT_NEAR(column_cov(m, j, j), 1.0, kVarBand * var_se(1.0, m.rows())) << j;
    EXPECT_NEAR(column_cov(m, 50, 51), std::exp(-1.0 / 105.0), 0.03);
    const Matrix shifted = sample_ou(g, 20000, RngSeed{3}, MeanFunction::linear(2.0));
    EXPECT_NEAR(column_mean(shifted, 99) - column_mean(m, 99), 2.0 * g[99], 1e-12);
}

TEST(Processes, GaussianMarginalsPassKs) {
    const Grid g = make_default_grid();
    const std::size_t n = 10000;
    const double crit = 1.949 / std::sqrt(static_cast<double>(n));  // alpha = 0.001
    const Matrix b = sample_brownian(g, n, RngSeed{4});
    const Matrix bb = sample_bridge(g, n, RngSeed{5});
    const Matrix ou = sample_ou(g, n, RngSeed{6}, MeanFunction::zero());
    for (std::size_t j : {9, 49, 89}) {
        EXPECT_LT(ks_distance(b, j, g[j]), crit);
        EXPECT_LT(ks_distance(bb, j, g[j] * (1 - g[j])), crit);
        EXPECT_LT(ks_distance(ou, j, 1.0), crit);
    }
}

TEST(Processes, SmoothingIsMonotone) {
    const Grid g = make_default_grid();
    const Matrix b = sample_brownian(g, 20000, RngSeed{7});
    const Matrix s1 = sample_smoothed_brownian(g, 20000, RngSeed{7}, 1);
    const Matrix s2 = sample_smoothed_brownian(g, 20000, RngSeed{7}, 2);
    EXPECT_LT(mean_sq_increment(s1), mean_sq_increment(b));
    EXPECT_LT(mean_sq_increment(s2), mean_sq_increment(s1));
    for (std::size_t j : {20, 60, 99}) EXPECT_LT(column_cov(s1, j, j), g[j]);
}

TEST(Processes, Deterministic) {
    const Grid g = make_default_grid();
    EXPECT_EQ(sample_brownian(g, 5, RngSeed{9}), sample_brownian(g, 5, RngSeed{9}));
    EXPECT_NE(sample_brownian(g, 5, RngSeed{9}), sample_brownian(g, 5, RngSeed{10}));
    EXPECT_EQ(sample_smoothed_brownian(g, 3, RngSeed{9}, 2), sample_smoothed_brownian(g, 3, RngSeed{9}, 2));
    EXPECT_THROW(sample_brownian(g, 0, RngSeed{9}), ConfigError);
}

TEST(MeanFunctions, PeakAndHillside) {
    EXPECT_DOUBLE_EQ(peak_function(1, 1, 0.5), 0.5);
    EXPECT_NEAR(peak_function(1, 1, 1.0), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(peak_function(1, 1, 0.25), 0.25);
    EXPECT_NEAR(peak_function(2, 2, 0.75), std::sqrt(2.0) * 0.25, 1e-15);
    EXPECT_EQ(peak_function(2, 2, 0.4), 0.0);
    EXPECT_NEAR(peak_function(3, 2, 1.0), 0.0, 1e-15);
    EXPECT_EQ(hillside_function(0.5, 4, 0.25), 0.0);
    EXPECT_DOUBLE_EQ(hillside_function(0.5, 4, 0.75), 1.0);
}

TEST(Logistic, ProbabilityConventions) {
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_EQ(logistic_probability(0.0), 0.5);
    EXPECT_EQ(logistic_probability(inf), 1.0);
    EXPECT_EQ(logistic_probability(-inf), 0.0);
    EXPECT_EQ(logistic_probability(std::numeric_limits<double>::quiet_NaN()), 0.5);
    EXPECT_NEAR(logistic_probability(2.0), 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
}

TEST(Catalog, HundredUniqueModels) {
    const auto& cat = catalog();
    ASSERT_EQ(cat.size(), 100u);
    std::set<std::string> ids;
    for (const auto& m : cat) ids.insert(m.id);
    EXPECT_EQ(ids.size(), 100u);
    for (const char* id : {"G1", "G1b", "G3", "M1", "M11", "L1_OU", "L7_OU", "L14_B", "L9_sB", "L1_OUt"})
        EXPECT_TRUE(ids.count(id)) << id;
    EXPECT_THROW(find_model("nope"), CatalogError);
}

TEST(Catalog, TranscribedDefinitions) {
    const auto& g1 = std::get<TwoClassMechanism>(find_model("G1").mechanism);
    ASSERT_EQ(g1.class1.mean.terms.size(), 1u);
    EXPECT_EQ(g1.class1.mean.terms[0].kind, MeanTerm::Kind::RandomSlope);
    EXPECT_EQ(g1.class1.mean.terms[0].a, 3.0);

    const auto& l7 = std::get<LogisticMechanism>(find_model("L7_B").mechanism);
    ASSERT_EQ(l7.psi.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(l7.psi[i].coef, 10.0);
        EXPECT_EQ(l7.psi[i].factors.at(0).index, 10 * (i + 1));
    }
    EXPECT_EQ(find_model("G2").relevant_variables, (std::vector<std::size_t>{100}));
    EXPECT_FALSE(find_model("L4_B").note.empty());
}

TEST(Generate, TwoClassMeans) {
    const Grid g = make_default_grid();
    const auto ds = generate(find_model("G2"), g, 4000, RngSeed{11});
    double s0 = 0, c0 = 0, s1 = 0, c1 = 0;
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        (ds.labels()[i] == 0 ? s0 : s1) += ds.values()(i, 99);
        (ds.labels()[i] == 0 ? c0 : c1) += 1;
    }
    EXPECT_NEAR(s0 / c0, g[99], 4 * std::sqrt(g[99] / c0));
    EXPECT_NEAR(s1 / c1, 0.0, 4 * std::sqrt(g[99] / c1));
    EXPECT_NEAR(c0 / 4000.0, 0.5, 0.03);
}

TEST(Generate, MixtureMeans) {
    const Grid g = make_default_grid();
    const auto ds = generate(find_model("M1"), g, 8000, RngSeed{12});
    double s0 = 0, c0 = 0;
    for (std::size_t i = 0; i < ds.n_samples(); ++i)
        if (ds.labels()[i] == 0) {
            s0 += ds.values()(i, 99);
            c0 += 1;
        }
    // Mixture of B + 3t and B - 2t: mean 0.5 t, variance t + 6.25 t^2.
    const double t = g[99];
    EXPECT_NEAR(s0 / c0, 0.5 * t, 4 * std::sqrt((t + 6.25 * t * t) / c0));
}

TEST(Generate, LogisticHalfAtZero) {
    const Grid g = make_default_grid();
    const auto ds = generate(find_model("L1_B"), g, 40000, RngSeed{13});
    double ones = 0, count = 0;
    for (std::size_t i = 0; i < ds.n_samples(); ++i)
        if (std::abs(ds.values()(i, 64)) < 0.02) {
            ones += ds.labels()[i];
            count += 1;
        }
    ASSERT_GT(count, 200);
    EXPECT_NEAR(ones / count, 0.5, 4 * std::sqrt(0.25 / count) + 0.05);
}

TEST(Generate, AllModelsProduceValidData) {
    const Grid g = make_default_grid();
    for (const auto& m : catalog()) {
        const auto ds = generate(m, g, 30, RngSeed{14});
        EXPECT_EQ(ds.n_samples(), 30u) << m.id;
        EXPECT_TRUE(ds.has_both_classes()) << m.id;
        EXPECT_EQ(ds, generate(m, g, 30, RngSeed{14})) << m.id;
    }
}

TEST(Generate, RandomSlopeScaleSwitch) {
    const Grid g = make_default_grid();
    SimulationOptions sd, var;
    var.slope_param_is_variance = true;
    auto class1_var = [&](const SimulationOptions& o) {
        const auto ds = generate(find_model("G1b"), g, 6000, RngSeed{15}, o);
        std::vector<double> x;
        for (std::size_t i = 0; i < ds.n_samples(); ++i)
            if (ds.labels()[i] == 1) x.push_back(ds.values()(i, 99));
        double m = 0, s = 0;
        for (double v : x) m += v;
        m /= x.size();
        for (double v : x) s += (v - m) * (v - m);
        return s / (x.size() - 1);
    };
    const double t = g[99];
    EXPECT_NEAR(class1_var(sd), t + 25 * t * t, 0.1 * (t + 25 * t * t));
    EXPECT_NEAR(class1_var(var), t + 5 * t * t, 0.1 * (t + 5 * t * t));
}
