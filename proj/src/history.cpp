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
#include "crbpr/history.hpp"

#include <algorithm>
#include <cmath>

namespace crbpr {
namespace {

// Cosine over concatenated visual+textual matcher features; pairs with a
// zero-norm side score 0.
double concat_cosine(const FeatureMatrices& fm, int a, int b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  const auto& v = fm.visual_matcher;
  const auto& w = fm.textual_matcher;
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    dot += double(v(i, a)) * double(v(i, b));
    na += double(v(i, a)) * double(v(i, a));
    nb += double(v(i, b)) * double(v(i, b));
  }
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    dot += double(w(i, a)) * double(w(i, b));
    na += double(w(i, a)) * double(w(i, a));
    nb += double(w(i, b)) * double(w(i, b));
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

HistoryIndex build_index(const TripletSet& triplets, int n_users, int n_givens,
                         int n_matchers) {
  HistoryIndex index;
  index.by_user.resize(std::size_t(n_users));
  index.by_given.resize(std::size_t(n_givens));
  index.popularity.assign(std::size_t(n_matchers), 0);
  auto push_unique = [](std::vector<int>& list, int v) {
    if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
  };
  for (const auto& t : triplets.records) {
    if (t.split != Split::train) continue;
    push_unique(index.by_user[std::size_t(t.user)], t.matcher);
    push_unique(index.by_given[std::size_t(t.given)], t.matcher);
    index.popularity[std::size_t(t.matcher)] += 1;
  }
  index.popular_order.resize(std::size_t(n_matchers));
  for (int i = 0; i < n_matchers; ++i) index.popular_order[std::size_t(i)] = i;
  std::sort(index.popular_order.begin(), index.popular_order.end(),
            [&index](int a, int b) {
              const long ca = index.popularity[std::size_t(a)];
              const long cb = index.popularity[std::size_t(b)];
              if (ca != cb) return ca > cb;
              return a < b;
            });
  return index;
}

std::vector<int> query_list(const HistoryIndex& index, const HistoryQuery& q,
                            const FeatureMatrices& features,
                            bool exclude_target) {
  if (q.n < 1) throw ConfigError("history query: N must be >= 1");
  const auto& lists =
      q.kind == AnchorKind::user ? index.by_user : index.by_given;

  std::vector<int> candidates;
  if (q.anchor >= 0 && std::size_t(q.anchor) < lists.size()) {
    for (int m : lists[std::size_t(q.anchor)]) {
      if (exclude_target && m == q.target) continue;
      candidates.push_back(m);
    }
  }

  std::vector<int> out;
  out.reserve(std::size_t(q.n));
  if (candidates.empty()) {
    // Popularity fallback, target never included.
    for (int m : index.popular_order) {
      if (m == q.target) continue;
      out.push_back(m);
      if (int(out.size()) == q.n) return out;
    }
    if (out.empty()) {
      throw LookupError("history query: no candidate matchers available");
    }
    while (int(out.size()) < q.n) out.push_back(out.front());
    return out;
  }

  std::vector<std::pair<double, int>> scored;
  scored.reserve(candidates.size());
  for (int m : candidates) {
    scored.emplace_back(concat_cosine(features, m, q.target), m);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (const auto& [sim, m] : scored) {
    out.push_back(m);
    if (int(out.size()) == q.n) return out;
  }
  // Short history: repeat the most similar entry.
  while (int(out.size()) < q.n) out.push_back(scored.front().second);
  return out;
}

std::vector<int> HistoryQueryEngine::query(const HistoryQuery& q,
                                           bool exclude_target) const {
  const bool packable = q.anchor >= 0 && q.anchor < (1 << 25) && q.target >= 0 &&
                        q.target < (1 << 25) && q.n < (1 << 12);
  if (!memo_enabled_ || !packable) {
    return query_list(index_, q, features_, exclude_target);
  }
  const std::uint64_t key = (std::uint64_t(q.kind == AnchorKind::given) << 63) |
                            (std::uint64_t(exclude_target) << 62) |
                            (std::uint64_t(std::uint32_t(q.anchor)) << 37) |
                            (std::uint64_t(std::uint32_t(q.target)) << 12) |
                            std::uint64_t(std::uint32_t(q.n) & 0xfff);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  auto result = query_list(index_, q, features_, exclude_target);
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(key, result);
  return result;
}

}  // namespace crbpr
