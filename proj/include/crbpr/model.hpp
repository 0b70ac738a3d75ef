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

#include <array>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "crbpr/features.hpp"
#include "crbpr/param.hpp"
#include "crbpr/tensor_ops.hpp"

namespace crbpr {

// How representations are scaled before score prediction. Training uses
// batch statistics; corpus mode fixes the denominators from corpus-wide row
// norms for deterministic single-pair scoring; identity disables scaling.
enum class NormMode { batch, corpus, identity };

const char* norm_mode_name(NormMode m);
NormMode norm_mode_from_name(const std::string& name);

enum class Branch { pref = 0, match = 1, ucons = 2, gcons = 3 };
enum class Modality { visual = 0, textual = 1 };
enum class EntityKind { given, matcher };

struct Hyperparams {
  double eta = 0.5;      // visual vs textual in user preference
  double pi = 0.5;       // visual vs textual in matching/consistency
  double mu = 0.5;       // matching vs user preference
  double phi_gc = 1.0;   // matching-consistency weight
  double phi_uc = 1.0;   // preference-consistency weight
  double lambda = 1e-5;  // weight decay
  int history_n = 2;
  int d_e = 16;
  int d_star_v = 16;
  int d_star_w = 16;
  int layers = 1;
  double learning_rate = 0.01;
  int batch_size = 128;
  int max_epochs = 80;
  int patience = 8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct BranchToggles {
  bool use_u = true;
  bool use_g = true;
  bool use_uc = true;
  bool use_gc = true;
  bool use_visual = true;
  bool use_textual = true;
  bool use_latent = true;

  void validate() const;
};

struct ModelDims {
  int users = 0;
  int givens = 0;
  int matchers = 0;
  int d_v = 0;
  int d_w = 0;
  int d_e = 16;
  int d_star_v = 16;
  int d_star_w = 16;
  int layers = 1;
  bool feature_deltas = false;
};

// A scoring batch: column j pairs users[j], givens[j], matchers[j]. For
// consistency branches the history lists are history_n x width, column-
// aligned with the batch. Training batches are [positives | negatives]
// halves sharing users/givens.
struct ScoreBatch {
  std::vector<int> users;
  std::vector<int> givens;
  std::vector<int> matchers;
  MatXi ur_lists;
  MatXi gr_lists;

  int width() const { return int(matchers.size()); }
};

// All learnable parameters plus the fixed computation graph of the four
// branch scores and their fusion, with reverse-mode gradients for every
// parameter. Pretrained features are frozen inputs; optional per-product
// feature deltas can be enabled for experimentation.
template <class S>
class CrbprModel {
 public:
  struct MlpStack {
    std::vector<Param<S>> weights;
    std::vector<Param<S>> biases;
  };

  CrbprModel(const ModelDims& dims, const FeatureMatrices& features,
             std::uint64_t seed);

  const ModelDims& dims() const { return dims_; }

  // --- parameter access ---
  std::vector<Param<S>*> params();
  std::vector<const Param<S>*> params() const;
  // Parameters trained and regularized under the given toggles; disabled
  // branches are excluded entirely.
  std::vector<Param<S>*> enabled_params(const BranchToggles& toggles);
  Param<S>* find_param(const std::string& name);
  void zero_grads();
  void init_params(std::uint64_t seed);

  Param<S> e_user;        // d_e x |U|
  Param<S> e_item;        // d_e x (|G|+|R|); matcher r lives in column |G|+r
  Param<S> v_user;        // d*_v x |U|
  Param<S> w_user;        // d*_w x |U|
  Param<S> beta_user;     // |U| x 1
  Param<S> beta_matcher;  // |R| x 1
  Param<S> alpha;         // 1 x 1
  std::array<std::array<MlpStack, 2>, 4> mlps;  // [branch][modality]
  std::array<Param<S>, 4> feature_delta;  // given.v, given.w, matcher.v, matcher.w

  // --- scoring ---
  // Branch representation of a product batch: branch MLP then feature
  // scaling over the supplied batch (norm_mode batch), corpus-wide norms
  // (corpus), or no scaling (identity).
  MatX<S> represent(std::span<const int> ids, EntityKind kind, Branch branch,
                    Modality modality, NormMode mode) const;
  // Scaled embedding-table lookups (the "barred" latent vectors).
  MatX<S> user_latent(std::span<const int> users, NormMode mode) const;
  MatX<S> matcher_latent(std::span<const int> matchers, NormMode mode) const;
  MatX<S> user_visual(std::span<const int> users, NormMode mode) const;
  MatX<S> user_textual(std::span<const int> users, NormMode mode) const;

  VecX<S> score_user_pref(std::span<const int> users,
                          std::span<const int> matchers, double eta,
                          NormMode mode,
                          const BranchToggles& toggles = {}) const;
  VecX<S> score_matching(std::span<const int> givens,
                         std::span<const int> matchers, double pi,
                         NormMode mode,
                         const BranchToggles& toggles = {}) const;
  VecX<S> score_uc(std::span<const int> users, std::span<const int> matchers,
                   const MatXi& ur_lists, double pi, NormMode mode,
                   const BranchToggles& toggles = {}) const;
  VecX<S> score_gc(std::span<const int> givens, std::span<const int> matchers,
                   const MatXi& gr_lists, double pi, NormMode mode,
                   const BranchToggles& toggles = {}) const;

  struct Breakdown {
    VecX<S> s_ur, s_gr, s_uc, s_gc, total;
  };
  Breakdown score_breakdown(const ScoreBatch& batch, const Hyperparams& hp,
                            const BranchToggles& toggles, NormMode mode) const;
  VecX<S> score_overall(const ScoreBatch& batch, const Hyperparams& hp,
                        const BranchToggles& toggles, NormMode mode) const;

  // --- training ---
  // Loss of a [pos | neg] batch: sum of -ln sigmoid(p+ - p-) plus
  // (lambda/2) * ||enabled params||^2. Positives and negatives are scored
  // in one shared normalization context.
  double bpr_loss_value(const ScoreBatch& wide, const Hyperparams& hp,
                        const BranchToggles& toggles, NormMode mode) const;
  // Same loss with gradients accumulated into every enabled parameter.
  // Supported in batch and identity modes (training never uses corpus
  // statistics).
  double bpr_forward_backward(const ScoreBatch& wide, const Hyperparams& hp,
                              const BranchToggles& toggles, NormMode mode);

  // Corpus-wide row norms backing corpus-mode scoring; invalidate after any
  // parameter mutation, refresh before concurrent corpus-mode use.
  void invalidate_corpus_norms() const;
  void refresh_corpus_norms() const;

  const MatX<S>& feature_matrix(EntityKind kind, Modality mo) const;

 private:
  struct TableCache {
    MatX<S> raw;
    VecX<S> norms;
    MatX<S> scaled;
  };
  struct MlpCache {
    std::vector<MatX<S>> acts;  // acts[0] = input, acts[k] = layer k output
    int block_width = 0;        // scaling context width; blocks = 1 + history
    std::vector<VecX<S>> block_norms;
    MatX<S> scaled;
  };
  struct PrefCaches {
    TableCache eu, er, vu, wu;
    MlpCache rv, rw;
    VecX<S> lat, vis, tex, total;
  };
  struct MatchCaches {
    MlpCache gv, gw, rv, rw;
    VecX<S> vis, tex, total;
  };
  struct ConsCaches {
    MlpCache v, w;  // blocks: [target | member_1 | ... | member_N]
    MatX<S> mean_v, mean_w;
    VecX<S> vis, tex, total;
  };

  struct CorpusNorms {
    bool fresh = false;
    VecX<S> e_user, e_matcher, v_user, w_user;
    std::array<std::array<VecX<S>, 2>, 4> rep_matcher;
    std::array<VecX<S>, 2> rep_given;  // match branch anchors
  };

  void check_users(std::span<const int> ids) const;
  void check_givens(std::span<const int> ids) const;
  void check_matchers(std::span<const int> ids) const;
  void check_lists(const MatXi& lists, int width, const char* which) const;

  MatX<S> gather_features(EntityKind kind, Modality mo,
                          std::span<const int> ids) const;
  void mlp_forward(const MlpStack& stack, MatX<S> input,
                   std::vector<MatX<S>>& acts) const;
  // Accumulates stack gradients; returns d(input) only when requested.
  MatX<S> mlp_backward(MlpStack& stack, const std::vector<MatX<S>>& acts,
                       MatX<S> d_out, bool need_dinput);

  void table_rep(const Param<S>& table, std::span<const int> cols,
                 NormMode mode, const VecX<S>* corpus_norms,
                 TableCache& cache) const;
  void table_rep_backward(Param<S>& table, std::span<const int> cols,
                          NormMode mode, const TableCache& cache,
                          const MatX<S>& d_scaled);
  void mlp_rep(Branch branch, Modality mo, EntityKind kind,
               std::span<const int> ids, const MatXi* lists, NormMode mode,
               MlpCache& cache) const;
  void mlp_rep_backward(Branch branch, Modality mo, EntityKind kind,
                        std::span<const int> ids, const MatXi* lists,
                        NormMode mode, const MlpCache& cache,
                        const MatX<S>& d_scaled);

  void forward_pref(const ScoreBatch& batch, double eta,
                    const BranchToggles& toggles, NormMode mode,
                    PrefCaches& c) const;
  void forward_match(const ScoreBatch& batch, double pi,
                     const BranchToggles& toggles, NormMode mode,
                     MatchCaches& c) const;
  void forward_cons(Branch branch, const ScoreBatch& batch, double pi,
                    const BranchToggles& toggles, NormMode mode,
                    ConsCaches& c) const;

  const VecX<S>* corpus_norms_for(Branch branch, Modality mo,
                                  EntityKind kind) const;
  void ensure_corpus_norms(NormMode mode) const;

  std::vector<int> offset_matchers(std::span<const int> matchers) const;

  ModelDims dims_;
  MatX<S> fv_given_, fw_given_, fv_matcher_, fw_matcher_;
  mutable CorpusNorms corpus_;
  mutable std::mutex corpus_mu_;
};

using CrbprModelF = CrbprModel<float>;
using CrbprModelD = CrbprModel<double>;

// Loss of one positive/negative score pair, -ln sigmoid(pos - neg),
// computed in a saturation-safe form.
template <class S>
inline S bpr_pair_loss(S pos, S neg) {
  return softplus(neg - pos);
}

}  // namespace crbpr

#include "crbpr/model_impl.hpp"
