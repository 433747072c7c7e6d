/*  Copyright 2026 the modcs authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.  */

#include "modcs/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "modcs/errors.hpp"

namespace modcs {

namespace {

std::vector<double> parse_csv_line(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    out.push_back(std::stod(cell));
  }
  return out;
}

}  // namespace

Mat read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parameter_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_csv_line(line));
    if (rows.size() > 1 && rows.back().size() != rows.front().size())
      throw parameter_error(path + ": ragged rows");
  }
  if (rows.empty()) throw parameter_error(path + ": empty matrix");
  Mat A(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) A(i, j) = rows[i][j];
  return A;
}

void write_matrix_csv(const std::string& path, const Mat& A) {
  std::ofstream out(path);
  if (!out) throw parameter_error("cannot write " + path);
  out << std::setprecision(17);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) {
      if (j) out << ',';
      out << A(i, j);
    }
    out << '\n';
  }
}

Vec read_vector_csv(const std::string& path) {
  Mat A = read_matrix_csv(path);
  Vec v;
  v.reserve(A.rows * A.cols);
  for (double x : A.a) v.push_back(x);
  return v;
}

void write_vector_csv(const std::string& path, const Vec& v) {
  std::ofstream out(path);
  if (!out) throw parameter_error("cannot write " + path);
  out << std::setprecision(17);
  for (double x : v) out << x << '\n';
}

IndexSet parse_index_list(const std::string& text) {
  IndexSet out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    long v = std::stol(cell);
    if (v < 0) throw parameter_error("negative index in list");
    out.push_back(static_cast<std::size_t>(v));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parameter_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw parameter_error("cannot write " + path);
  out << text;
}

nlohmann::json index_set_to_json(const IndexSet& s) {
  return nlohmann::json(s);
}

IndexSet index_set_from_json(const nlohmann::json& j) {
  IndexSet out = j.get<IndexSet>();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace modcs
