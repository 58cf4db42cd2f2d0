#pragma once

// Umbrella header.

#include "regdev/csv.hpp"
#include "regdev/dataset.hpp"
#include "regdev/error.hpp"
#include "regdev/eval.hpp"
#include "regdev/experiment.hpp"
#include "regdev/folds.hpp"
#include "regdev/impurity.hpp"
#include "regdev/j48.hpp"
#include "regdev/klassen.hpp"
#include "regdev/learner.hpp"
#include "regdev/model_io.hpp"
#include "regdev/naive_bayes.hpp"
#include "regdev/nbtree.hpp"
#include "regdev/random.hpp"
#include "regdev/report.hpp"
#include "regdev/reptree.hpp"
#include "regdev/tree.hpp"

namespace regdev {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace regdev
