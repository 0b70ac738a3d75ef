// Copyright 2026 The crbpr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "crbpr/features.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace crbpr {
namespace {

constexpr char kMagic[4] = {'C', 'R', 'F', 'T'};
constexpr std::uint32_t kVersion = 1;

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

float parse_float(const std::string& tok, const std::string& context) {
  float v = 0.0f;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw LoadError("bad float value '" + tok + "' " + context);
  }
  return v;
}

std::string shortest_float(float v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::uint32_t read_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw LoadError("truncated binary feature file " + path);
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 |
         std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff),
                              static_cast<unsigned char>((v >> 16) & 0xff),
                              static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

FeatureTable load_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open feature file " + path);
  std::vector<std::string> ids;
  std::vector<std::vector<float>> rows;
  int dim = -1;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto toks = split_tabs(line);
    if (toks.size() < 2) {
      throw LoadError(path + ":" + std::to_string(line_no) +
                      ": expected product_id followed by feature values");
    }
    const int this_dim = int(toks.size()) - 1;
    if (dim < 0) {
      dim = this_dim;
    } else if (this_dim != dim) {
      throw LoadError(path + ":" + std::to_string(line_no) + ": product '" +
                      toks[0] + "' has " + std::to_string(this_dim) +
                      " values, expected " + std::to_string(dim));
    }
    std::vector<float> row(std::size_t(dim));
    for (int d = 0; d < dim; ++d) {
      row[std::size_t(d)] = parse_float(
          toks[std::size_t(d) + 1],
          "at " + path + ":" + std::to_string(line_no));
    }
    ids.push_back(toks[0]);
    rows.push_back(std::move(row));
  }
  if (dim < 0) throw LoadError("feature file " + path + " is empty");
  MatX<float> values(dim, Eigen::Index(ids.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (int d = 0; d < dim; ++d) {
      values(d, Eigen::Index(j)) = rows[j][std::size_t(d)];
    }
  }
  return FeatureTable(std::move(ids), std::move(values));
}

FeatureTable load_binary(const std::string& path) {
  const MatX<float> entity_major = read_crft(path);
  const std::string sidecar = path + ".ids.tsv";
  std::ifstream ids_in(sidecar);
  if (!ids_in) throw LoadError("missing id sidecar " + sidecar);
  std::vector<std::string> ids(std::size_t(entity_major.rows()));
  std::string line;
  long line_no = 0;
  long seen = 0;
  while (std::getline(ids_in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto toks = split_tabs(line);
    if (toks.size() != 2) {
      throw LoadError(sidecar + ":" + std::to_string(line_no) +
                      ": expected row_index\tproduct_id");
    }
    const long row = std::stol(toks[0]);
    if (row < 0 || row >= entity_major.rows()) {
      throw LoadError(sidecar + ":" + std::to_string(line_no) +
                      ": row index out of range");
    }
    ids[std::size_t(row)] = toks[1];
    ++seen;
  }
  if (seen != entity_major.rows()) {
    throw LoadError(sidecar + ": has " + std::to_string(seen) +
                    " rows, binary holds " + std::to_string(entity_major.rows()));
  }
  return FeatureTable(std::move(ids), entity_major.transpose());
}

}  // namespace

FeatureTable::FeatureTable(std::vector<std::string> ids, MatX<float> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (Eigen::Index(ids_.size()) != values_.cols()) {
    throw LoadError("feature table: id count does not match value columns");
  }
  for (std::size_t j = 0; j < ids_.size(); ++j) {
    if (!row_.emplace(ids_[j], int(j)).second) {
      throw LoadError("duplicate product id '" + ids_[j] + "' in feature table");
    }
    if (!values_.col(Eigen::Index(j)).allFinite()) {
      throw LoadError("non-finite feature value for product '" + ids_[j] + "'");
    }
  }
}

Eigen::Ref<const VecX<float>> FeatureTable::of(const std::string& id) const {
  auto it = row_.find(id);
  if (it == row_.end()) {
    throw LookupError("product '" + id + "' has no features");
  }
  return values_.col(it->second);
}

void FeatureStore::validate_against(const Catalog& catalog) const {
  auto check = [this](const std::string& id) {
    if (!visual.has(id)) throw LoadError("product '" + id + "' missing visual features");
    if (!textual.has(id)) throw LoadError("product '" + id + "' missing textual features");
  };
  for (const auto& id : catalog.givens()) check(id);
  for (const auto& id : catalog.matchers()) check(id);
}

FeatureTable load_feature_table(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw LoadError("cannot open feature file " + path);
  char head[4] = {0, 0, 0, 0};
  probe.read(head, 4);
  probe.close();
  if (std::memcmp(head, kMagic, 4) == 0) return load_binary(path);
  return load_tsv(path);
}

FeatureStore load_features(const std::string& visual_path,
                           const std::string& textual_path) {
  return FeatureStore{load_feature_table(visual_path),
                      load_feature_table(textual_path)};
}

void save_feature_table_tsv(const FeatureTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path);
  for (int j = 0; j < table.count(); ++j) {
    out << table.ids()[std::size_t(j)];
    for (int d = 0; d < table.dim(); ++d) {
      out << '\t' << shortest_float(table.values()(d, j));
    }
    out << '\n';
  }
}

void save_feature_table_binary(const FeatureTable& table, const std::string& path) {
  write_crft(path, table.values().transpose());
  std::ofstream ids_out(path + ".ids.tsv");
  if (!ids_out) throw LoadError("cannot write " + path + ".ids.tsv");
  for (int j = 0; j < table.count(); ++j) {
    ids_out << j << '\t' << table.ids()[std::size_t(j)] << '\n';
  }
}

void write_crft(const std::string& path, const MatX<float>& entity_major) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write " + path);
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  write_u32(out, std::uint32_t(entity_major.rows()));
  write_u32(out, std::uint32_t(entity_major.cols()));
  // Row-major entity order, little-endian f32. The build targets
  // little-endian hosts; floats are written verbatim.
  for (Eigen::Index i = 0; i < entity_major.rows(); ++i) {
    for (Eigen::Index j = 0; j < entity_major.cols(); ++j) {
      const float v = entity_major(i, j);
      out.write(reinterpret_cast<const char*>(&v), 4);
    }
  }
  if (!out) throw LoadError("short write to " + path);
}

MatX<float> read_crft(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path);
  char head[4];
  in.read(head, 4);
  if (!in || std::memcmp(head, kMagic, 4) != 0) {
    throw LoadError(path + " is not a CRFT tensor file");
  }
  const std::uint32_t version = read_u32(in, path);
  if (version != kVersion) {
    throw LoadError(path + ": unsupported CRFT version " + std::to_string(version));
  }
  const std::uint32_t count = read_u32(in, path);
  const std::uint32_t dim = read_u32(in, path);
  MatX<float> entity_major(count, dim);
  for (std::uint32_t i = 0; i < count; ++i) {
    for (std::uint32_t j = 0; j < dim; ++j) {
      float v;
      in.read(reinterpret_cast<char*>(&v), 4);
      if (!in) throw LoadError("truncated tensor data in " + path);
      entity_major(Eigen::Index(i), Eigen::Index(j)) = v;
    }
  }
  return entity_major;
}

FeatureMatrices build_feature_matrices(const Catalog& catalog,
                                       const FeatureStore& store) {
  store.validate_against(catalog);
  FeatureMatrices fm;
  fm.visual_given.resize(store.d_v(), catalog.n_givens());
  fm.textual_given.resize(store.d_w(), catalog.n_givens());
  fm.visual_matcher.resize(store.d_v(), catalog.n_matchers());
  fm.textual_matcher.resize(store.d_w(), catalog.n_matchers());
  for (int i = 0; i < catalog.n_givens(); ++i) {
    fm.visual_given.col(i) = store.visual.of(catalog.given_id(i));
    fm.textual_given.col(i) = store.textual.of(catalog.given_id(i));
  }
  for (int i = 0; i < catalog.n_matchers(); ++i) {
    fm.visual_matcher.col(i) = store.visual.of(catalog.matcher_id(i));
    fm.textual_matcher.col(i) = store.textual.of(catalog.matcher_id(i));
  }
  return fm;
}

}  // namespace crbpr
