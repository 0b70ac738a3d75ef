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
#include "crbpr/synth.hpp"

#include <cmath>
#include <random>
#include <set>

namespace crbpr {
namespace {

// The two modalities are emitted at deliberately different scales so that
// multi-source scale imbalance is present in the data.
constexpr double kVisualScale = 3.0;
constexpr double kTextualScale = 0.5;
constexpr double kClusterJitter = 0.1;
constexpr int kCandidatePool = 20;
constexpr int kMaxRetries = 64;

MatX<double> gaussian(std::mt19937_64& rng, Eigen::Index rows,
                      Eigen::Index cols, double scale) {
  std::normal_distribution<double> dist(0.0, 1.0);
  MatX<double> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = dist(rng) * scale;
    }
  }
  return m;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_users <= 0 || n_givens <= 0 || n_matchers <= 0 || n_triplets <= 0) {
    throw ConfigError("synthetic config: all counts must be positive");
  }
  if (latent_dim <= 0) throw ConfigError("synthetic config: latent_dim must be positive");
  if (noise_std < 0) throw ConfigError("synthetic config: noise_std must be >= 0");
  if (persona_clusters <= 0) {
    throw ConfigError("synthetic config: persona_clusters must be positive");
  }
}

double SynthData::oracle_score(int user, int given, int matcher) const {
  const auto s = user_style.col(user);
  const auto zg = given_latent.col(given);
  const auto zr = matcher_latent.col(matcher);
  return s.dot(zr) + zg.dot(match_map * zr);
}

SynthData generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SynthData data;
  const int L = cfg.latent_dim;
  const int d_v = 2 * L;
  const int d_w = L;

  const MatX<double> centers = gaussian(rng, L, cfg.persona_clusters, 1.0);
  data.user_style.resize(L, cfg.n_users);
  for (int u = 0; u < cfg.n_users; ++u) {
    const int k = u % cfg.persona_clusters;
    for (int i = 0; i < L; ++i) {
      data.user_style(i, u) = centers(i, k) + kClusterJitter * gauss(rng);
    }
  }
  data.given_latent = gaussian(rng, L, cfg.n_givens, 1.0);
  data.matcher_latent = gaussian(rng, L, cfg.n_matchers, 1.0);
  data.match_map = gaussian(rng, L, L, 1.0 / std::sqrt(double(L)));

  const MatX<double> mix_v = gaussian(rng, d_v, L, kVisualScale / std::sqrt(double(L)));
  const MatX<double> mix_w = gaussian(rng, d_w, L, kTextualScale / std::sqrt(double(L)));

  const int n_products = cfg.n_givens + cfg.n_matchers;
  std::vector<std::string> product_ids;
  product_ids.reserve(std::size_t(n_products));
  MatX<float> visual(d_v, n_products);
  MatX<float> textual(d_w, n_products);
  auto emit_product = [&](const MatX<double>& latents, int col, const std::string& id) {
    product_ids.push_back(id);
    const Eigen::Index out = Eigen::Index(product_ids.size()) - 1;
    VecX<double> fv = mix_v * latents.col(col);
    VecX<double> fw = mix_w * latents.col(col);
    for (int i = 0; i < d_v; ++i) visual(i, out) = float(fv[i] + cfg.noise_std * gauss(rng));
    for (int i = 0; i < d_w; ++i) textual(i, out) = float(fw[i] + cfg.noise_std * gauss(rng));
  };

  for (int u = 0; u < cfg.n_users; ++u) data.catalog.add_user("u" + std::to_string(u));
  for (int g = 0; g < cfg.n_givens; ++g) {
    const std::string id = "g" + std::to_string(g);
    data.catalog.add_given(id);
    emit_product(data.given_latent, g, id);
  }
  for (int r = 0; r < cfg.n_matchers; ++r) {
    const std::string id = "r" + std::to_string(r);
    data.catalog.add_matcher(id);
    emit_product(data.matcher_latent, r, id);
  }
  data.features.visual = FeatureTable(product_ids, visual);
  data.features.textual = FeatureTable(product_ids, textual);

  std::uniform_int_distribution<int> pick_given(0, cfg.n_givens - 1);
  std::uniform_int_distribution<int> pick_matcher(0, cfg.n_matchers - 1);
  std::set<std::uint64_t> seen;
  for (int t = 0; t < cfg.n_triplets; ++t) {
    const int u = t % cfg.n_users;
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxRetries && !accepted; ++attempt) {
      const int g = pick_given(rng);
      int best = pick_matcher(rng);
      double best_score = data.oracle_score(u, g, best);
      for (int c = 1; c < kCandidatePool; ++c) {
        const int cand = pick_matcher(rng);
        const double score = data.oracle_score(u, g, cand);
        if (score > best_score) {
          best = cand;
          best_score = score;
        }
      }
      const std::uint64_t key = (std::uint64_t(std::uint32_t(u)) << 42) ^
                                (std::uint64_t(std::uint32_t(g)) << 21) ^
                                std::uint64_t(std::uint32_t(best));
      if (seen.insert(key).second) {
        data.triplets.records.push_back({u, g, best, Split::train});
        data.chosen_scores.push_back(best_score);
        accepted = true;
      }
    }
    if (!accepted) {
      throw ConfigError(
          "synthetic generation could not place all interactions; "
          "increase product counts or reduce n_triplets");
    }
  }
  return data;
}

}  // namespace crbpr
