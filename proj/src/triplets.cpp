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
#include "crbpr/triplets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <unordered_map>

namespace crbpr {
namespace {

struct RawRow {
  std::string user, given, matcher;
  Split split;
  long line;
};

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<RawRow> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open triplet file " + path);
  std::vector<RawRow> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    RawRow row;
    row.line = line_no;
    std::size_t start = 0;
    std::vector<std::string> toks;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        toks.push_back(line.substr(start));
        break;
      }
      toks.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (toks.size() != 3 && toks.size() != 4) {
      throw LoadError(path + ":" + std::to_string(line_no) +
                      ": expected user\\tgiven\\tmatcher[\\tsplit]");
    }
    row.user = toks[0];
    row.given = toks[1];
    row.matcher = toks[2];
    row.split = toks.size() == 4 ? split_from_name(toks[3]) : Split::train;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::uint64_t record_key(int u, int g, int r, Split s) {
  return (std::uint64_t(std::uint32_t(u)) << 42) ^
         (std::uint64_t(std::uint32_t(g)) << 21) ^
         std::uint64_t(std::uint32_t(r)) ^ (std::uint64_t(int(s)) << 62);
}

}  // namespace

const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
  }
  return "train";
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::train;
  if (name == "valid" || name == "validation") return Split::valid;
  if (name == "test") return Split::test;
  throw LoadError("unknown split label '" + name + "'");
}

long TripletSet::count(Split s) const {
  long c = 0;
  for (const auto& t : records) c += t.split == s ? 1 : 0;
  return c;
}

TripletSet TripletSet::filtered(Split s) const {
  TripletSet out;
  for (const auto& t : records) {
    if (t.split == s) out.records.push_back(t);
  }
  return out;
}

TripletSet load_triplets(const std::string& path, const Catalog& catalog) {
  const auto rows = read_rows(path);
  TripletSet out;
  std::set<std::uint64_t> seen;
  for (const auto& row : rows) {
    const auto u = catalog.user_index(row.user);
    if (!u) {
      throw LoadError(path + ":" + std::to_string(row.line) +
                      ": unknown user '" + row.user + "'");
    }
    const auto g = catalog.given_index(row.given);
    if (!g) {
      throw LoadError(path + ":" + std::to_string(row.line) +
                      ": unknown given product '" + row.given + "'");
    }
    const auto r = catalog.matcher_index(row.matcher);
    if (!r) {
      throw LoadError(path + ":" + std::to_string(row.line) +
                      ": unknown matching product '" + row.matcher + "'");
    }
    if (!seen.insert(record_key(*u, *g, *r, row.split)).second) {
      throw LoadError(path + ":" + std::to_string(row.line) +
                      ": duplicate record " + row.user + "/" + row.given + "/" +
                      row.matcher + "/" + split_name(row.split));
    }
    out.records.push_back({*u, *g, *r, row.split});
  }
  return out;
}

ParsedTriplets load_triplet_file(const std::string& path, int min_interactions) {
  auto rows = read_rows(path);
  if (min_interactions > 1) {
    std::unordered_map<std::string, long> per_user;
    for (const auto& row : rows) per_user[row.user] += 1;
    std::vector<RawRow> kept;
    kept.reserve(rows.size());
    for (auto& row : rows) {
      if (per_user[row.user] >= min_interactions) kept.push_back(std::move(row));
    }
    rows = std::move(kept);
  }
  ParsedTriplets out;
  std::set<std::uint64_t> seen;
  for (const auto& row : rows) {
    const int u = out.catalog.add_user(row.user);
    const int g = out.catalog.add_given(row.given);
    const int r = out.catalog.add_matcher(row.matcher);
    if (!seen.insert(record_key(u, g, r, row.split)).second) {
      throw LoadError(path + ":" + std::to_string(row.line) +
                      ": duplicate record " + row.user + "/" + row.given + "/" +
                      row.matcher + "/" + split_name(row.split));
    }
    out.triplets.records.push_back({u, g, r, row.split});
  }
  return out;
}

void save_triplets(const TripletSet& triplets, const Catalog& catalog,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path);
  for (const auto& t : triplets.records) {
    out << catalog.user_id(t.user) << '\t' << catalog.given_id(t.given) << '\t'
        << catalog.matcher_id(t.matcher) << '\t' << split_name(t.split) << '\n';
  }
}

TripletSet split_triplets(const TripletSet& triplets, double train_ratio,
                          double valid_ratio, double test_ratio,
                          std::uint64_t seed) {
  if (triplets.records.empty()) {
    throw ConfigError("split_triplets: empty triplet set");
  }
  if (train_ratio < 0 || valid_ratio < 0 || test_ratio < 0) {
    throw ConfigError("split_triplets: ratios must be non-negative");
  }
  const double sum = train_ratio + valid_ratio + test_ratio;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split_triplets: ratios must sum to 1");
  }

  int max_user = 0;
  for (const auto& t : triplets.records) max_user = std::max(max_user, t.user);
  std::vector<std::vector<std::size_t>> per_user(std::size_t(max_user) + 1);
  for (std::size_t i = 0; i < triplets.records.size(); ++i) {
    per_user[std::size_t(triplets.records[i].user)].push_back(i);
  }

  TripletSet out = triplets;
  const double ratios[3] = {train_ratio, valid_ratio, test_ratio};
  for (std::size_t u = 0; u < per_user.size(); ++u) {
    auto& recs = per_user[u];
    if (recs.empty()) continue;
    std::mt19937_64 rng(derive_seed(seed, std::uint64_t(u)));
    std::shuffle(recs.begin(), recs.end(), rng);

    const long n = long(recs.size());
    long counts[3];
    double fracs[3];
    long assigned = 0;
    for (int s = 0; s < 3; ++s) {
      const double exact = double(n) * ratios[s];
      counts[s] = long(std::floor(exact));
      fracs[s] = exact - double(counts[s]);
      assigned += counts[s];
    }
    // Largest-remainder distribution of the leftover records; ties favor
    // train, then valid.
    while (assigned < n) {
      int best = 0;
      for (int s = 1; s < 3; ++s) {
        if (fracs[s] > fracs[best]) best = s;
      }
      counts[best] += 1;
      fracs[best] = -1.0;
      assigned += 1;
    }
    if (n >= 3 && counts[0] == 0) {
      const int donor = counts[1] >= counts[2] ? 1 : 2;
      counts[donor] -= 1;
      counts[0] += 1;
    }

    std::size_t pos = 0;
    for (int s = 0; s < 3; ++s) {
      for (long c = 0; c < counts[s]; ++c, ++pos) {
        out.records[recs[pos]].split = Split(s);
      }
    }
  }
  return out;
}

}  // namespace crbpr
