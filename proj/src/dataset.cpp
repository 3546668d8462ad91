#include "hierdis/dataset.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hierdis {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDatasetVersion = "hierdis-dataset/1";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<int> LabeledDataset::path_ids() const {
  HierarchyIndex idx(hierarchy);
  auto paths = enumerate_paths(idx);
  std::vector<int> ids(A.size());
  for (size_t i = 0; i < A.size(); ++i)
    ids[i] = path_id_of_assignment(idx, paths, A[i]);
  return ids;
}

void save_matrix(const MatrixXfR& m, const fs::path& file) {
  std::ofstream f(file, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + file.string());
  std::uint32_t n = static_cast<std::uint32_t>(m.rows());
  std::uint32_t d = static_cast<std::uint32_t>(m.cols());
  f.write(reinterpret_cast<const char*>(&n), 4);
  f.write(reinterpret_cast<const char*>(&d), 4);
  f.write(reinterpret_cast<const char*>(m.data()),
          static_cast<std::streamsize>(sizeof(float)) * m.rows() * m.cols());
  if (!f) throw std::runtime_error("write failed: " + file.string());
}

MatrixXfR load_matrix(const fs::path& file) {
  std::ifstream f(file, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + file.string());
  std::uint32_t n = 0, d = 0;
  f.read(reinterpret_cast<char*>(&n), 4);
  f.read(reinterpret_cast<char*>(&d), 4);
  if (!f) throw std::runtime_error("truncated header: " + file.string());
  MatrixXfR m(n, d);
  f.read(reinterpret_cast<char*>(m.data()),
         static_cast<std::streamsize>(sizeof(float)) * n * d);
  if (!f) throw std::runtime_error("truncated data: " + file.string());
  return m;
}

void save_dataset(const LabeledDataset& ds, const fs::path& dir) {
  fs::create_directories(dir);
  save_matrix(ds.X, dir / "X.bin");
  save_hierarchy(ds.hierarchy, (dir / "hierarchy.json").string());

  HierarchyIndex idx(ds.hierarchy);

  {
    std::ofstream f(dir / "V.csv", std::ios::binary);
    for (int j = 0; j < idx.num_dims(); ++j)
      f << (j ? "," : "") << idx.dims()[j].name;
    f << "\n";
    for (int i = 0; i < ds.n(); ++i) {
      for (int j = 0; j < idx.num_dims(); ++j) {
        if (j) f << ",";
        if (ds.V_active(i, j)) f << format_double(ds.V(i, j));
      }
      f << "\n";
    }
  }
  {
    std::ofstream f(dir / "A.csv", std::ios::binary);
    for (int c = 0; c < idx.num_cats(); ++c)
      f << (c ? "," : "") << idx.cats()[c].name;
    f << "\n";
    for (int i = 0; i < ds.n(); ++i) {
      for (int c = 0; c < idx.num_cats(); ++c)
        f << (c ? "," : "") << ds.A[i][c];
      f << "\n";
    }
  }
  {
    json meta = ds.meta;
    meta["version"] = kDatasetVersion;
    meta["n"] = ds.n();
    meta["input_dim"] = ds.input_dim();
    std::ofstream f(dir / "meta.json", std::ios::binary);
    f << meta.dump(2) << "\n";
  }
}

LabeledDataset load_dataset(const fs::path& dir) {
  LabeledDataset ds;
  {
    std::ifstream f(dir / "meta.json", std::ios::binary);
    if (!f) throw std::runtime_error("missing meta.json in " + dir.string());
    ds.meta = json::parse(f);
    if (!ds.meta.contains("version") || ds.meta["version"] != kDatasetVersion)
      throw std::runtime_error("unsupported dataset version in " + dir.string());
  }
  ds.X = load_matrix(dir / "X.bin");
  ds.hierarchy = load_hierarchy((dir / "hierarchy.json").string());
  HierarchyIndex idx(ds.hierarchy);

  int n = ds.n();
  ds.V.resize(n, idx.num_dims());
  ds.V.setConstant(std::numeric_limits<double>::quiet_NaN());
  ds.V_active.setZero(n, idx.num_dims());
  {
    std::ifstream f(dir / "V.csv", std::ios::binary);
    if (!f) throw std::runtime_error("missing V.csv in " + dir.string());
    std::string line;
    std::getline(f, line);  // header
    auto header = split_csv_line(line);
    if (static_cast<int>(header.size()) != idx.num_dims())
      throw std::runtime_error("V.csv header does not match hierarchy dims");
    for (int i = 0; i < n; ++i) {
      if (!std::getline(f, line))
        throw std::runtime_error("V.csv truncated at row " + std::to_string(i));
      auto cells = split_csv_line(line);
      if (static_cast<int>(cells.size()) != idx.num_dims())
        throw std::runtime_error("V.csv bad column count at row " + std::to_string(i));
      for (int j = 0; j < idx.num_dims(); ++j) {
        if (!cells[j].empty()) {
          ds.V(i, j) = std::stod(cells[j]);
          ds.V_active(i, j) = 1;
        }
      }
    }
  }
  {
    std::ifstream f(dir / "A.csv", std::ios::binary);
    if (!f) throw std::runtime_error("missing A.csv in " + dir.string());
    std::string line;
    std::getline(f, line);  // header
    ds.A.assign(n, PathAssignment(idx.num_cats(), -1));
    for (int i = 0; i < n; ++i) {
      if (!std::getline(f, line))
        throw std::runtime_error("A.csv truncated at row " + std::to_string(i));
      if (idx.num_cats() == 0) continue;
      auto cells = split_csv_line(line);
      if (static_cast<int>(cells.size()) != idx.num_cats())
        throw std::runtime_error("A.csv bad column count at row " + std::to_string(i));
      for (int c = 0; c < idx.num_cats(); ++c) ds.A[i][c] = std::stoi(cells[c]);
    }
  }
  return ds;
}

}  // namespace hierdis
