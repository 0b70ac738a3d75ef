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
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "crbpr/catalog.hpp"
#include "crbpr/types.hpp"

namespace crbpr {

// One modality of pretrained product features: id -> column of a dense
// dim x count matrix. Immutable after load.
class FeatureTable {
 public:
  FeatureTable() = default;
  FeatureTable(std::vector<std::string> ids, MatX<float> values);

  int dim() const { return int(values_.rows()); }
  int count() const { return int(values_.cols()); }
  bool has(const std::string& id) const { return row_.count(id) != 0; }
  Eigen::Ref<const VecX<float>> of(const std::string& id) const;
  const std::vector<std::string>& ids() const { return ids_; }
  const MatX<float>& values() const { return values_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> row_;
  MatX<float> values_;  // dim x count, one column per product
};

// Visual and textual feature tables for the product universe.
struct FeatureStore {
  FeatureTable visual;
  FeatureTable textual;

  int d_v() const { return visual.dim(); }
  int d_w() const { return textual.dim(); }

  // Enforces that every catalog product carries both vectors.
  void validate_against(const Catalog& catalog) const;
};

// Reads one modality from TSV (`product_id\tf1\t...\tfD`) or from the
// binary container (sniffed by magic); binary files need the
// `<path>.ids.tsv` sidecar mapping row_index -> product_id.
FeatureTable load_feature_table(const std::string& path);

FeatureStore load_features(const std::string& visual_path,
                           const std::string& textual_path);

void save_feature_table_tsv(const FeatureTable& table, const std::string& path);
void save_feature_table_binary(const FeatureTable& table, const std::string& path);

// Raw binary tensor container shared by feature files and checkpoints:
// magic "CRFT", u32 version=1, u32 count, u32 dim, count*dim LE f32,
// entity-major.
void write_crft(const std::string& path, const MatX<float>& entity_major);
MatX<float> read_crft(const std::string& path);

// Dense per-entity feature matrices aligned with catalog indices, ready for
// column gathering by the model.
struct FeatureMatrices {
  MatX<float> visual_given;    // d_v x |G|
  MatX<float> textual_given;   // d_w x |G|
  MatX<float> visual_matcher;  // d_v x |R|
  MatX<float> textual_matcher; // d_w x |R|
};

FeatureMatrices build_feature_matrices(const Catalog& catalog,
                                       const FeatureStore& store);

}  // namespace crbpr
