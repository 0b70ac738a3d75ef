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
#include <vector>

#include "crbpr/catalog.hpp"

namespace crbpr {

enum class Split { train, valid, test };

const char* split_name(Split s);
Split split_from_name(const std::string& name);

struct Triplet {
  int user = 0;
  int given = 0;
  int matcher = 0;
  Split split = Split::train;
};

struct TripletSet {
  std::vector<Triplet> records;

  long count(Split s) const;
  TripletSet filtered(Split s) const;
};

// Validating loader against a known catalog. Rows are
// `user_id\tgiven_id\tmatcher_id[\tsplit]`; a missing split column means
// train. Unknown ids and duplicate records raise LoadError with the line
// number.
TripletSet load_triplets(const std::string& path, const Catalog& catalog);

// First-pass loader that also derives the catalog, indices densely assigned
// in row order. min_interactions drops every user with fewer records
// (applied before catalog construction).
struct ParsedTriplets {
  Catalog catalog;
  TripletSet triplets;
};
ParsedTriplets load_triplet_file(const std::string& path,
                                 int min_interactions = 1);

void save_triplets(const TripletSet& triplets, const Catalog& catalog,
                   const std::string& path);

// Per-user stratified random split. Existing split labels are discarded;
// every user with >= 3 records keeps at least one train record; per-user
// split sizes stay within one record of the exact proportion.
TripletSet split_triplets(const TripletSet& triplets, double train_ratio,
                          double valid_ratio, double test_ratio,
                          std::uint64_t seed);

}  // namespace crbpr
