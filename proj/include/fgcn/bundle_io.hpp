#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgcn/graph.hpp"

namespace fgcn {

// Bundle directory layout (UTF-8, LF):
//   edges.tsv     src<TAB>dst<TAB>weight, 0-based node indices
//   features.csv  one row per node, C comma-separated reals
//   labels.csv    header "K=<int>", then one label per line, -1 = unlabeled
//   masks.csv     three comma-separated 0/1 columns: train,val,test

namespace detail {

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::ifstream open_or_throw(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("bundle: missing file " + p.string());
  return in;
}

inline std::vector<double> parse_csv_row(const std::string& line, const std::string& file) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    const std::string tok = line.substr(pos, comma - pos);
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw std::runtime_error(file + ": bad numeric field '" + tok + "'");
    }
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return out;
}

}  // namespace detail

inline void save_bundle(const GraphBundle& b, const std::filesystem::path& dir) {
  validate_bundle(b);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "edges.tsv");
    for (const Edge& e : b.edges)
      out << e.src << '\t' << e.dst << '\t' << detail::fmt17(e.weight) << '\n';
  }
  {
    std::ofstream out(dir / "features.csv");
    for (std::size_t i = 0; i < b.num_nodes; ++i) {
      for (std::size_t j = 0; j < b.features.cols; ++j) {
        if (j) out << ',';
        out << detail::fmt17(b.features(i, j));
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "labels.csv");
    out << "K=" << b.num_classes << '\n';
    for (int l : b.labels) out << l << '\n';
  }
  {
    std::ofstream out(dir / "masks.csv");
    for (std::size_t i = 0; i < b.num_nodes; ++i)
      out << int(b.train_mask[i]) << ',' << int(b.val_mask[i]) << ',' << int(b.test_mask[i])
          << '\n';
  }
}

inline GraphBundle load_bundle(const std::filesystem::path& dir) {
  GraphBundle b;
  {
    auto in = detail::open_or_throw(dir / "features.csv");
    std::string line;
    std::size_t cols = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto row = detail::parse_csv_row(line, "features.csv");
      if (cols == 0) {
        cols = row.size();
        if (cols == 0) throw std::runtime_error("features.csv: empty row");
      } else if (row.size() != cols) {
        throw std::runtime_error("features.csv: ragged row " +
                                 std::to_string(b.features.rows) + " (" +
                                 std::to_string(row.size()) + " fields, expected " +
                                 std::to_string(cols) + ")");
      }
      b.features.data.insert(b.features.data.end(), row.begin(), row.end());
      b.features.rows++;
    }
    b.features.cols = cols;
    b.num_nodes = b.features.rows;
  }
  {
    auto in = detail::open_or_throw(dir / "edges.tsv");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ss(line);
      Edge e;
      if (!(ss >> e.src >> e.dst >> e.weight))
        throw std::runtime_error("edges.tsv: bad line '" + line + "'");
      b.edges.push_back(e);
    }
  }
  {
    auto in = detail::open_or_throw(dir / "labels.csv");
    std::string line;
    if (!std::getline(in, line) || line.rfind("K=", 0) != 0)
      throw std::runtime_error("labels.csv: expected 'K=<int>' header");
    b.num_classes = std::stoi(line.substr(2));
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const int l = std::stoi(line);
      if (l >= b.num_classes)
        throw std::runtime_error("labels.csv: label " + std::to_string(l) +
                                 " out of range for K=" + std::to_string(b.num_classes));
      b.labels.push_back(l);
    }
  }
  {
    auto in = detail::open_or_throw(dir / "masks.csv");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto row = detail::parse_csv_row(line, "masks.csv");
      if (row.size() != 3) throw std::runtime_error("masks.csv: expected 3 columns");
      b.train_mask.push_back(row[0] != 0.0);
      b.val_mask.push_back(row[1] != 0.0);
      b.test_mask.push_back(row[2] != 0.0);
    }
  }
  validate_bundle(b);
  return b;
}

}  // namespace fgcn
