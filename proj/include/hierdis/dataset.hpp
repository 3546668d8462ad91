#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "hierdis/hierarchy.hpp"

namespace hierdis {

using MatrixXfR = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MaskMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// Raw inputs X, ground-truth factors V (with per-cell activity), path
// assignments A, and the generating hierarchy. Inactive V cells hold NaN and
// must never be read as values.
struct LabeledDataset {
  MatrixXfR X;
  Eigen::MatrixXd V;
  MaskMatrix V_active;
  std::vector<PathAssignment> A;
  DimensionHierarchy hierarchy;
  nlohmann::json meta;

  int n() const { return static_cast<int>(X.rows()); }
  int input_dim() const { return static_cast<int>(X.cols()); }

  // Ground-truth path id per sample (pre-order path ids).
  std::vector<int> path_ids() const;
};

// Directory layout: meta.json, X.bin (uint32 n, uint32 d header + row-major
// little-endian float32), V.csv (inactive cells empty), A.csv (-1 undefined),
// hierarchy.json.
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& dir);
LabeledDataset load_dataset(const std::filesystem::path& dir);

// X.bin only (also used for encodings and other matrices).
void save_matrix(const MatrixXfR& m, const std::filesystem::path& file);
MatrixXfR load_matrix(const std::filesystem::path& file);

}  // namespace hierdis
