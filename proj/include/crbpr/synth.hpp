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

#include "crbpr/features.hpp"
#include "crbpr/triplets.hpp"

namespace crbpr {

struct SynthConfig {
  int n_users = 50;
  int n_givens = 200;
  int n_matchers = 200;
  int n_triplets = 2000;
  int latent_dim = 8;
  double noise_std = 0.05;
  int persona_clusters = 5;
  std::uint64_t seed = 1;

  void validate() const;
};

// Synthetic dataset with planted structure: clustered user styles, product
// latents observed through noisy random mixing maps, and interactions that
// maximize a user-preference plus product-matching score over a random
// candidate pool. The planted latents stay available as an oracle.
struct SynthData {
  Catalog catalog;
  FeatureStore features;
  TripletSet triplets;  // all records marked train; split downstream

  MatX<double> user_style;      // latent_dim x n_users
  MatX<double> given_latent;    // latent_dim x n_givens
  MatX<double> matcher_latent;  // latent_dim x n_matchers
  MatX<double> match_map;       // latent_dim x latent_dim
  std::vector<double> chosen_scores;  // oracle score of each record

  double oracle_score(int user, int given, int matcher) const;
};

SynthData generate_synthetic(const SynthConfig& cfg);

}  // namespace crbpr
