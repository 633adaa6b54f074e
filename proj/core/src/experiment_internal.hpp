#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "padicrmt/experiment.hpp"

namespace padicrmt {

class Rng;

// What an experiment measures, in a form both engines can drive.
struct Estimand {
  std::vector<std::string> labels;
  // One Monte Carlo draw; writes labels.size() values, returns false to discard.
  std::function<bool(Rng&, double*)> sample;

  // Exhaustive mode: an item is `digits` residues in Z/p^N.  classify returns
  // a class index, or -1 for items outside the population (e.g. singular
  // matrices in GL mode).  class_values[c][i] bounds component i on class c.
  int digits = 0;
  std::function<int(const std::uint64_t*)> classify;
  std::vector<std::vector<std::pair<Rational, Rational>>> class_values;
};

Estimand make_estimand(const ExperimentSpec& spec);

}  // namespace padicrmt
