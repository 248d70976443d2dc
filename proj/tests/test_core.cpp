#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fmrmr/core.hpp"
#include "fmrmr/error.hpp"
#include "fmrmr/rng.hpp"

using namespace fmrmr;

TEST(Grid, DefaultGridEndpoints) {
    const Grid g = make_default_grid();
    ASSERT_EQ(g.size(), 100u);
    EXPECT_DOUBLE_EQ(g[0], 5.0 / 105.0);
    EXPECT_DOUBLE_EQ(g[99], 104.0 / 105.0);
    EXPECT_LT(g[99], 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] - g[i - 1], 1.0 / 105.0, 1e-15);
}

TEST(Grid, OrdinalGrid) {
    const Grid g = make_ordinal_grid(4);
    EXPECT_EQ(g.points(), (std::vector<double>{0.25, 0.5, 0.75, 1.0}));
}

TEST(Grid, RejectsBadPoints) {
    EXPECT_THROW(Grid({0.0, 0.5}), ConfigError);
    EXPECT_THROW(Grid({0.5, 0.5}), ConfigError);
    EXPECT_THROW(Grid({0.5, 1.5}), ConfigError);
    EXPECT_THROW(Grid(std::vector<double>{}), ShapeError);
}

TEST(Dataset, Validation) {
    const Grid g = make_ordinal_grid(2);
    EXPECT_THROW(FunctionalDataset(g, Matrix(2, 3), Labels{0, 1}), ShapeError);
    EXPECT_THROW(FunctionalDataset(g, Matrix(2, 2), Labels{0}), ShapeError);
    EXPECT_THROW(FunctionalDataset(g, Matrix(2, 2), Labels{0, 2}), LabelError);
    Matrix bad(2, 2);
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(FunctionalDataset(g, bad, Labels{0, 1}), NumericalError);
}

TEST(Dataset, ColumnIsOneBased) {
    Matrix m(3, 2, {1, 2, 3, 4, 5, 6});
    const FunctionalDataset ds(make_ordinal_grid(2), m, Labels{0, 1, 1});
    EXPECT_EQ(column(ds, 1), (std::vector<double>{1, 3, 5}));
    EXPECT_EQ(column(ds, 2), (std::vector<double>{2, 4, 6}));
    EXPECT_THROW(column(ds, 0), IndexError);
    EXPECT_THROW(column(ds, 3), IndexError);
    EXPECT_EQ(ds.class_counts(), std::make_pair(std::size_t{1}, std::size_t{2}));
}

TEST(Dataset, SubsetKeepsOrder) {
    Matrix m(3, 1, {10, 20, 30});
    const FunctionalDataset ds(make_ordinal_grid(1), m, Labels{0, 1, 0});
    const std::size_t rows[] = {2, 0};
    const auto s = ds.subset(rows);
    EXPECT_EQ(s.values().data(), (std::vector<double>{30, 10}));
    EXPECT_EQ(s.labels(), (Labels{0, 0}));
    EXPECT_FALSE(s.has_both_classes());
}

TEST(Rng, DeriveSeedIsPureAndTagSensitive) {
    EXPECT_EQ(derive_seed(7, {1, 2}), derive_seed(7, {1, 2}));
    EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
    EXPECT_NE(derive_seed(7, {1}), derive_seed(8, {1}));
    EXPECT_NE(hash_tag("G1"), hash_tag("G1b"));
}
