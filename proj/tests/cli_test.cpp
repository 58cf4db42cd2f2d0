#include <gtest/gtest.h>

#include "cli_support.hpp"
#include "test_support.hpp"

namespace regdev {
namespace {

using testing::body;
using testing::run_cli;
using testing::ScratchDir;
using testing::slurp;
using testing::spit;

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

// Labels a synthetic panel and returns the path prefix of the outputs.
std::string label_region(const ScratchDir& dir, const std::string& name, std::size_t districts, std::uint64_t seed) {
  spit(dir / (name + ".panel.csv"), klassen::write_panel_csv(testing::synthetic_panel(districts, 9, seed)));
  const auto out = dir / name;
  EXPECT_EQ(run_cli("label --panel-districts " + (dir / (name + ".panel.csv")) + " --years 2006,2007 --out " + out,
                    dir / "label.stdout"),
            0);
  return out;
}

TEST(Cli, LabelProducesOneRowPerDistrictIndicator) {
  ScratchDir dir("label");
  const auto out = label_region(dir, "six", 6, 3);
  const auto labeled = slurp(out + ".labeled.csv");
  EXPECT_EQ(count_lines(body(labeled)), 1u + 54u);
  EXPECT_EQ(parse_csv(labeled).size(), 54u);
  EXPECT_EQ(klassen::parse_rows_csv(slurp(out + ".rows.csv")).size(), 54u);
  EXPECT_NE(slurp(dir / "label.stdout").find("total"), std::string::npos);

  // Same command, same bytes.
  const auto first = slurp(out + ".labeled.csv") + slurp(out + ".rows.csv") + slurp(out + ".distribution.txt");
  label_region(dir, "six", 6, 3);
  EXPECT_EQ(slurp(out + ".labeled.csv") + slurp(out + ".rows.csv") + slurp(out + ".distribution.txt"), first);
}

TEST(Cli, LabelRejectsEmptyPanel) {
  ScratchDir dir("empty");
  spit(dir / "empty.csv", "level,region,indicator,year,value\n");
  EXPECT_EQ(run_cli("label --panel-districts " + (dir / "empty.csv") + " --years 2006,2007 --out " + (dir / "x"),
                    dir / "stdout"),
            3);
  EXPECT_EQ(run_cli("label --panel-districts " + (dir / "missing.csv") + " --years 2006,2007 --out " + (dir / "x"),
                    dir / "stdout"),
            3);
}

TEST(Cli, TrainPureDataGivesOneLeafAndIsRepeatable) {
  ScratchDir dir("train");
  std::string csv = "r_i,r,y_i,y,class\n";
  for (int i = 0; i < 12; ++i) csv += std::to_string(i) + ",1,2,3,K2\n";
  spit(dir / "pure.csv", csv);
  for (const char* learner : {"j48", "nbtree", "reptree"}) {
    const std::string args = std::string("train --data ") + (dir / "pure.csv") + " --learner " + learner + " --out " + (dir / "m");
    ASSERT_EQ(run_cli(args, dir / "stdout"), 0) << learner;
    const auto json = slurp(dir / "m.model.json");
    const auto model = read_model(json);
    EXPECT_EQ(num_leaves(model.tree), 1u);
    EXPECT_EQ(count_lines(body(slurp(dir / "m.tree.txt"))), 1u);
    ASSERT_EQ(run_cli(args, dir / "stdout"), 0);
    EXPECT_EQ(slurp(dir / "m.model.json"), json);
  }
}

TEST(Cli, TrainedModelPredictsLikeTheLibrary) {
  ScratchDir dir("predict");
  const auto region = label_region(dir, "r", 8, 5);
  ASSERT_EQ(run_cli("train --data " + region + ".labeled.csv --learner j48 --out " + (dir / "m"), dir / "stdout"), 0);
  ASSERT_EQ(run_cli("predict --model " + (dir / "m.model.json") + " --data " + region + ".labeled.csv --out " +
                        (dir / "pred.csv"),
                    dir / "stdout"),
            0);
  const auto ds = parse_csv(slurp(region + ".labeled.csv"), CsvOptions{',', "class", klassen::quadrant_labels()});
  const auto tree = train_j48(ds);
  const auto pred = body(slurp(dir / "pred.csv"));
  std::istringstream lines(pred);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "class,p_K1,p_K2,p_K3,p_K4");
  for (const auto& r : ds.records()) {
    ASSERT_TRUE(std::getline(lines, line));
    EXPECT_EQ(line.substr(0, line.find(',')), ds.class_attribute().labels[predict(tree, r).label]);
  }
}

TEST(Cli, PredictEmptyInputAndConstantModel) {
  ScratchDir dir("const");
  std::string csv = "a,b,class\n";
  for (int i = 0; i < 10; ++i) csv += std::to_string(i) + "," + std::to_string(i * i) + ",K3\n";
  spit(dir / "train.csv", csv);
  ASSERT_EQ(run_cli("train --data " + (dir / "train.csv") + " --out " + (dir / "m"), dir / "stdout"), 0);

  spit(dir / "none.csv", "a,b\n");
  ASSERT_EQ(run_cli("predict --model " + (dir / "m.model.json") + " --data " + (dir / "none.csv"), dir / "p0"), 0);
  EXPECT_EQ(body(slurp(dir / "p0")), "class,p_K1,p_K2,p_K3,p_K4\n");

  spit(dir / "some.csv", "b,a\n1,2\n-5,1e6\n3.5,0\n");
  ASSERT_EQ(run_cli("predict --model " + (dir / "m.model.json") + " --data " + (dir / "some.csv"), dir / "p1"), 0);
  EXPECT_EQ(body(slurp(dir / "p1")), "class,p_K1,p_K2,p_K3,p_K4\nK3,0,0,1,0\nK3,0,0,1,0\nK3,0,0,1,0\n");
}

TEST(Cli, CompareHasOneColumnPerLearner) {
  ScratchDir dir("compare");
  const auto region = label_region(dir, "r", 6, 7);
  const std::string args = "compare --data " + region + ".labeled.csv --k 10 --seed 3 --out " + (dir / "cmp");
  ASSERT_EQ(run_cli(args, dir / "stdout"), 0);
  const auto csv = body(slurp(dir / "cmp.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "metric,j48,nbtree,reptree");
  EXPECT_EQ(count_lines(csv), 5u);
  const auto first = slurp(dir / "cmp.txt") + csv + slurp(dir / "cmp.json");
  ASSERT_EQ(run_cli(args, dir / "stdout"), 0);
  EXPECT_EQ(slurp(dir / "cmp.txt") + body(slurp(dir / "cmp.csv")) + slurp(dir / "cmp.json"), first);

  // Leave-one-out on the 54 records.
  ASSERT_EQ(run_cli("compare --data " + region + ".labeled.csv --k 54 --learners j48", dir / "loo"), 0);
  EXPECT_NE(slurp(dir / "loo").find("54 folds"), std::string::npos);
}

TEST(Cli, ExperimentP1) {
  ScratchDir dir("exp");
  const auto a = label_region(dir, "a", 6, 11);
  const auto b = label_region(dir, "b", 5, 12);
  ASSERT_EQ(run_cli("experiment --region-a " + a + ".rows.csv --region-b " + b + ".rows.csv --id P1 --out " + (dir / "p1"),
                    dir / "stdout"),
            0);
  const auto acc = body(slurp(dir / "p1.accuracy.csv"));
  EXPECT_EQ(acc.substr(0, acc.find('\n')), ",P1");
  EXPECT_NE(acc.find("Pruning,"), std::string::npos);
  EXPECT_NE(acc.find("Un-pruned,"), std::string::npos);
  const auto dist = body(slurp(dir / "p1.distribution.csv"));
  EXPECT_NE(dist.find("total,54,54"), std::string::npos);
  EXPECT_NE(slurp(dir / "p1.txt").find("Per-district classes, P1 (test: a.rows"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  ScratchDir dir("usage");
  EXPECT_EQ(run_cli("", dir / "o"), 2);
  EXPECT_EQ(run_cli("bogus", dir / "o"), 2);
  EXPECT_EQ(run_cli("train --data x.csv", dir / "o"), 2);
  EXPECT_EQ(run_cli("train --data x.csv --out y --learner svm", dir / "o"), 2);
  EXPECT_EQ(run_cli("experiment --id P1", dir / "o"), 2);
  EXPECT_EQ(run_cli("--version", dir / "o"), 0);
}

}  // namespace
}  // namespace regdev
