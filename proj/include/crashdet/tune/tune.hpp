#pragma once

#include <map>
#include <string>
#include <vector>

#include "crashdet/learn/model.hpp"
#include "crashdet/telemetry/dataset.hpp"

namespace crashdet::tune {

// Harmonic precision/recall mean; degenerate denominators score 0.
inline double f1(long tp, long fp, long fn) {
  if (tp < 0 || fp < 0 || fn < 0) throw ValidationError("f1 counts must be non-negative");
  const double denom = 2.0 * tp + fp + fn;
  return denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
}

// Simulation-grouped cross-validation plan: scenarios, never frames, are
// dealt into folds, stratified by class.
struct CvPlan {
  int k = 20;
  std::map<std::string, int> fold_of;  // scenario id -> fold
};

CvPlan make_folds(const telemetry::SignalDataset& ds, int k, std::uint64_t seed);

// Materialize one fold: training union and held-out validation scenarios.
void fold_datasets(const telemetry::SignalDataset& ds, const CvPlan& plan, int fold,
                   telemetry::SignalDataset& train, telemetry::SignalDataset& val);

struct Grid {
  std::map<std::string, std::vector<double>> candidates;
  int max_rounds = 4;
  double min_improvement = 1e-4;
};

struct CellScore {
  std::map<std::string, double> hyper;
  double mean_f1 = 0.0;
  bool failed = false;
  int round = 0;
};

struct GridSearchResult {
  std::map<std::string, double> best;
  double best_score = 0.0;
  std::vector<CellScore> table;
};

// Exhaustive search over the candidate grid scored by mean fold F1, then
// refinement rounds that re-center each numeric axis between the incumbent's
// grid neighbors until the improvement stalls. Ties prefer the cheaper model.
GridSearchResult grid_search(const learn::ModelSpec& base, const Grid& grid,
                             const telemetry::SignalDataset& train, const CvPlan& plan);

void write_score_table(const GridSearchResult& result, const std::filesystem::path& csv);

}  // namespace crashdet::tune
