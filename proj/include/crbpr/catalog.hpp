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

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "crbpr/types.hpp"

namespace crbpr {

// The three entity sets: users, given products, matching products.
// Indices are dense, assigned 0..n-1 in insertion order.
class Catalog {
 public:
  int add_user(const std::string& id) { return add(users_, user_idx_, id); }
  int add_given(const std::string& id) { return add(givens_, given_idx_, id); }
  int add_matcher(const std::string& id) { return add(matchers_, matcher_idx_, id); }

  std::optional<int> user_index(const std::string& id) const { return find(user_idx_, id); }
  std::optional<int> given_index(const std::string& id) const { return find(given_idx_, id); }
  std::optional<int> matcher_index(const std::string& id) const { return find(matcher_idx_, id); }

  const std::string& user_id(int i) const { return users_.at(std::size_t(i)); }
  const std::string& given_id(int i) const { return givens_.at(std::size_t(i)); }
  const std::string& matcher_id(int i) const { return matchers_.at(std::size_t(i)); }

  int n_users() const { return int(users_.size()); }
  int n_givens() const { return int(givens_.size()); }
  int n_matchers() const { return int(matchers_.size()); }

  const std::vector<std::string>& users() const { return users_; }
  const std::vector<std::string>& givens() const { return givens_; }
  const std::vector<std::string>& matchers() const { return matchers_; }

  // FNV-1a over all id lists; used to verify checkpoint/data alignment.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 1469598103934665603ull;
    auto eat = [&h](const std::string& s) {
      for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
      }
      h ^= 0x1f;
      h *= 1099511628211ull;
    };
    for (const auto& s : users_) eat(s);
    for (const auto& s : givens_) eat(s);
    for (const auto& s : matchers_) eat(s);
    return h;
  }

 private:
  static int add(std::vector<std::string>& list,
                 std::unordered_map<std::string, int>& idx,
                 const std::string& id) {
    auto it = idx.find(id);
    if (it != idx.end()) return it->second;
    const int i = int(list.size());
    list.push_back(id);
    idx.emplace(id, i);
    return i;
  }
  static std::optional<int> find(const std::unordered_map<std::string, int>& idx,
                                 const std::string& id) {
    auto it = idx.find(id);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::string> users_, givens_, matchers_;
  std::unordered_map<std::string, int> user_idx_, given_idx_, matcher_idx_;
};

}  // namespace crbpr
