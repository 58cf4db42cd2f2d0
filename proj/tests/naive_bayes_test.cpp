#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "regdev/naive_bayes.hpp"
#include "test_support.hpp"

namespace regdev {
namespace {

TEST(NaiveBayes, SingleClassGivesCertainty) {
  LabeledDataset ds(testing::numeric_header(2, 3));
  for (int i = 0; i < 5; ++i) ds.add({{static_cast<double>(i), 2.0 * i}, 1});
  const auto m = fit_nb(ds);
  const auto p = predict_nb(m, Record{{100.0, -4.0}, {}});
  EXPECT_EQ(p, (std::vector<double>{0.0, 1.0, 0.0}));
}

TEST(NaiveBayes, MirroredClassesAreEvenAtTheMidpoint) {
  LabeledDataset ds(testing::numeric_header(1, 2));
  for (double x : {1.0, 2.0, 3.0}) {
    ds.add({{x}, 0});
    ds.add({{-x}, 1});
  }
  const auto p = predict_nb(fit_nb(ds), Record{{0.0}, {}});
  EXPECT_NEAR(p[0], 0.5, 1e-12);
  EXPECT_NEAR(p[1], 0.5, 1e-12);
}

double gauss(double x, double mean, double var) {
  return std::exp(-(x - mean) * (x - mean) / (2 * var)) / std::sqrt(2 * std::numbers::pi * var);
}

// Eight records, one numeric and one nominal attribute, posterior computed longhand.
TEST(NaiveBayes, MatchesLonghandPosterior) {
  Header h;
  h.attributes = {Attribute::numeric("x"), Attribute::nominal("c", {"u", "v"})};
  h.class_attribute = Attribute::nominal("class", {"A", "B"});
  LabeledDataset ds(h);
  // Class A: x = 1,2,3,4 ; c = u,u,u,v. Class B: x = 5,6,7,8 ; c = v,v,u,v.
  const double xs[] = {1, 2, 3, 4, 5, 6, 7, 8};
  const double cs[] = {0, 0, 0, 1, 1, 1, 0, 1};
  for (int i = 0; i < 8; ++i) ds.add({{xs[i], cs[i]}, static_cast<std::size_t>(i / 4)});

  const auto m = fit_nb(ds);
  EXPECT_DOUBLE_EQ(m.priors[0], 5.0 / 10.0);
  EXPECT_DOUBLE_EQ(m.gaussians[0][0].mean, 2.5);
  EXPECT_DOUBLE_EQ(m.gaussians[0][0].variance, 1.25);  // population variance
  EXPECT_DOUBLE_EQ(m.frequencies[0][1][0], 4.0 / 6.0);
  EXPECT_DOUBLE_EQ(m.frequencies[1][1][0], 2.0 / 6.0);

  const double x = 4.5;
  const double a = 0.5 * gauss(x, 2.5, 1.25) * (2.0 / 6.0);
  const double b = 0.5 * gauss(x, 6.5, 1.25) * (4.0 / 6.0);
  const auto p = predict_nb(m, Record{{x, 1.0}, {}});
  EXPECT_NEAR(p[0], a / (a + b), 1e-12);
  EXPECT_NEAR(p[1], b / (a + b), 1e-12);
}

TEST(NaiveBayes, ConstantAttributeUsesVarianceFloor) {
  LabeledDataset ds(testing::numeric_header(1, 2));
  ds.add({{1.0}, 0});
  ds.add({{1.0}, 0});
  ds.add({{3.0}, 1});
  const auto m = fit_nb(ds);
  EXPECT_EQ(m.gaussians[0][0].variance, kVarianceFloor);
  const auto p = predict_nb(m, Record{{1.0}, {}});
  EXPECT_GT(p[0], 0.99);
}

TEST(NaiveBayes, PriorsAndPosteriorsSumToOne) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ds = testing::random_dataset(rng, 5 + rng.below(30), 3, 2 + rng.below(3));
    const auto m = fit_nb(ds);
    double prior_sum = 0;
    for (double p : m.priors) prior_sum += p;
    EXPECT_NEAR(prior_sum, 1.0, 1e-12);
    for (const auto& r : ds.records()) {
      double s = 0;
      for (double p : predict_nb(m, r)) {
        EXPECT_GE(p, 0.0);
        s += p;
      }
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
  }
}

TEST(NaiveBayes, AbsentClassHasZeroPosterior) {
  LabeledDataset ds(testing::numeric_header(1, 3));
  ds.add({{0.0}, 0});
  ds.add({{1.0}, 2});
  const auto p = predict_nb(fit_nb(ds), Record{{0.5}, {}});
  EXPECT_EQ(p[1], 0.0);
}

TEST(NaiveBayes, Errors) {
  LabeledDataset ds(testing::numeric_header(1, 2));
  EXPECT_THROW(fit_nb(ds), DataError);
  ds.add({{0.0}, 0});
  EXPECT_THROW(predict_nb(fit_nb(ds), Record{{0.0, 1.0}, {}}), DataError);
}

}  // namespace
}  // namespace regdev
