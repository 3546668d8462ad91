#pragma once

#include <cstdint>
#include <string>

#include "hierdis/dataset.hpp"

namespace hierdis {

enum class ChopsticksVariant { Intercept, Slope, Both, Either };

ChopsticksVariant chopsticks_variant_from_string(const std::string& s);
std::string to_string(ChopsticksVariant v);

// Piecewise-linear 64D series. Segments start spanning the whole interval;
// at each chop the currently-rightmost active half is split at its midpoint
// and a uniform offset is added to the slope and/or intercept of the new
// right half. Stop-level probabilities are biased so every depth level is
// equally likely.
struct ChopsticksConfig {
  ChopsticksVariant variant = ChopsticksVariant::Both;
  int depth = 2;              // 2..6
  int n_samples = 0;
  double noise_sigma = 0.0;   // additive i.i.d. Gaussian on X
  std::uint64_t seed = 0;

  void validate() const;
};

inline constexpr int kChopsticksSeriesLen = 64;

DimensionHierarchy chopsticks_hierarchy(const ChopsticksConfig& cfg);
LabeledDataset generate_chopsticks(const ChopsticksConfig& cfg);

// Rebuilds the noiseless series from a sample's factor row; with
// noise_sigma == 0 this reproduces X bit-exactly.
Eigen::VectorXf reconstruct_chopsticks_row(
    const ChopsticksConfig& cfg, const HierarchyIndex& idx,
    const Eigen::VectorXd& v_row,
    const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>& active_row,
    const PathAssignment& a);

// Probability of continuing past level k (1-based) so that stop levels are
// uniform over 1..depth.
double chopsticks_continue_prob(int depth, int level);

}  // namespace hierdis
