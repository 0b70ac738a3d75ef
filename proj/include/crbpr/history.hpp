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

#include <mutex>
#include <unordered_map>
#include <vector>

#include "crbpr/features.hpp"
#include "crbpr/triplets.hpp"

namespace crbpr {

// Per-user and per-given interaction histories, built from train records
// only. Lists are deduplicated in first-seen order; popularity keeps the
// multiset count.
struct HistoryIndex {
  std::vector<std::vector<int>> by_user;   // user index -> matcher indices
  std::vector<std::vector<int>> by_given;  // given index -> matcher indices
  std::vector<long> popularity;            // matcher index -> train count
  std::vector<int> popular_order;          // matchers by (-count, index)
};

HistoryIndex build_index(const TripletSet& triplets, int n_users, int n_givens,
                         int n_matchers);

enum class AnchorKind { user, given };

struct HistoryQuery {
  AnchorKind kind = AnchorKind::user;
  int anchor = 0;
  int target = 0;  // matcher index
  int n = 1;
};

// Filtered history list of exactly q.n matcher indices: the anchor's
// history ranked by cosine similarity to the target over concatenated
// pretrained visual+textual features, ties by ascending index. Short
// histories are filled by repeating the most similar entry; empty ones fall
// back to the globally most popular matchers (target excluded).
std::vector<int> query_list(const HistoryIndex& index, const HistoryQuery& q,
                            const FeatureMatrices& features,
                            bool exclude_target);

// query_list with a thread-safe memo keyed on (kind, anchor, target, n,
// exclude); the hot path for training and ranking loops.
class HistoryQueryEngine {
 public:
  HistoryQueryEngine(const HistoryIndex& index, const FeatureMatrices& features,
                     bool enable_memo = true)
      : index_(index), features_(features), memo_enabled_(enable_memo) {}

  std::vector<int> query(const HistoryQuery& q, bool exclude_target) const;

  const HistoryIndex& index() const { return index_; }

 private:
  const HistoryIndex& index_;
  const FeatureMatrices& features_;
  bool memo_enabled_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, std::vector<int>> memo_;
};

}  // namespace crbpr
