#include <gtest/gtest.h>

#include "regdev/model_io.hpp"
#include "test_support.hpp"

namespace regdev {
namespace {

std::vector<Learner> all_learners() {
  return {Learner(J48Params{}), Learner(J48Params{2, 0.25, false}), Learner(NBTreeParams{}),
          Learner(REPTreeParams{}), Learner(REPTreeParams{3, 9, 2, false})};
}

TEST(ModelIo, RoundTripPredictsIdentically) {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ds = trial % 2 ? testing::threshold_dataset(rng, 90, 3) : testing::random_dataset(rng, 90, 3, 3);
    for (const auto& learner : all_learners()) {
      const Model m{learner, learner.train(ds), {}};
      const auto text = write_model(m);
      const auto back = read_model(text);
      EXPECT_EQ(back.learner, learner);
      EXPECT_EQ(back.tree.header, m.tree.header);
      EXPECT_EQ(write_model(back), text);
      for (const auto& r : ds.records()) {
        const auto p = predict(m.tree, r);
        const auto q = predict(back.tree, r);
        EXPECT_EQ(p.label, q.label);
        EXPECT_EQ(p.probabilities, q.probabilities);
      }
    }
  }
}

TEST(ModelIo, NominalSchemaAndProvenance) {
  Header h;
  h.attributes = {Attribute::nominal("colour", {"red", "green"}), Attribute::numeric("x")};
  h.class_attribute = Attribute::nominal("class", {"A", "B"});
  LabeledDataset ds(h);
  for (int i = 0; i < 40; ++i) ds.add({{static_cast<double>(i % 2), static_cast<double>(i)}, static_cast<std::size_t>(i % 2)});
  const Model m{Learner(NBTreeParams{}), train_nbtree(ds), {{"tool", "test"}}};
  const auto back = read_model(write_model(m));
  EXPECT_EQ(back.tree.header, h);
  EXPECT_EQ(back.provenance["tool"], "test");
  for (const auto& r : ds.records()) EXPECT_EQ(predict(back.tree, r).probabilities, predict(m.tree, r).probabilities);
}

TEST(ModelIo, RejectsMalformedDocuments) {
  Rng rng(1);
  const auto ds = testing::threshold_dataset(rng, 40, 2);
  const auto good = model_to_json(Model{Learner(J48Params{}), train_j48(ds), {}});

  EXPECT_THROW(read_model(""), DataError);
  EXPECT_THROW(read_model("{not json"), DataError);
  EXPECT_THROW(read_model("{}"), DataError);

  auto wrong_version = good;
  wrong_version["format_version"] = 99;
  EXPECT_THROW(read_model(wrong_version.dump()), DataError);

  auto bad_learner = good;
  bad_learner["learner"] = "svm";
  EXPECT_THROW(read_model(bad_learner.dump()), DataError);

  ASSERT_TRUE(good["root"].contains("split"));
  auto bad_attr = good;
  bad_attr["root"]["split"]["attribute"] = 17;
  EXPECT_THROW(read_model(bad_attr.dump()), DataError);

  auto bad_arity = good;
  bad_arity["root"]["children"].erase(0);
  EXPECT_THROW(read_model(bad_arity.dump()), DataError);

  auto bad_dist = good;
  bad_dist["root"]["distribution"] = {1, 2, 3};
  EXPECT_THROW(read_model(bad_dist.dump()), DataError);

  EXPECT_NO_THROW(read_model(good.dump()));
}

TEST(ModelIo, OutputIsDeterministic) {
  Rng rng(2);
  const auto ds = testing::random_dataset(rng, 70, 3, 4);
  for (const auto& learner : all_learners()) {
    EXPECT_EQ(write_model(Model{learner, learner.train(ds), {}}), write_model(Model{learner, learner.train(ds), {}}));
  }
}

}  // namespace
}  // namespace regdev
