#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tcyl {

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

/// Outcome of one structural check.  `values` holds named statistics in a
/// fixed order so serialized reports are deterministic.
struct CheckReport {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  double statistic = 0.0;
  double threshold = 0.0;
  std::vector<std::pair<std::string, double>> values;
  std::string message;

  bool passed() const { return verdict == Verdict::Pass; }
};

}  // namespace tcyl
