#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "netsample/design.hpp"
#include "netsample/graph.hpp"
#include "netsample/random.hpp"
#include "netsample/resample.hpp"

namespace testing {

using Pairs = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

inline Pairs path_edges(std::uint32_t n) {
  Pairs e;
  for (std::uint32_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

/// Forest sample over positions 0..n-1 (ids equal positions); `edges` are
/// recruiter -> recruit and must form a forest.
inline netsample::SampleNetwork forest(std::uint32_t n, const Pairs& edges,
                                       std::vector<std::string> names = {},
                                       std::vector<std::vector<double>> values = {}) {
  std::vector<std::uint32_t> degree(n, 0);
  std::vector<bool> recruited(n, false);
  std::vector<netsample::RecruitmentEdge> rec;
  for (auto [a, b] : edges) {
    ++degree[a];
    ++degree[b];
    recruited[b] = true;
    rec.push_back({a, b});
  }
  std::vector<netsample::SampledNode> nodes;
  for (std::uint32_t i = 0; i < n; ++i) {
    netsample::SampledNode s;
    s.id = i;
    s.entry = recruited[i] ? netsample::EntryKind::Recruit : netsample::EntryKind::Seed;
    s.degree = std::max<std::uint32_t>(1, degree[i]);
    nodes.push_back(s);
  }
  return netsample::SampleNetwork(std::move(nodes), std::move(rec), std::move(names),
                                  std::move(values));
}

/// Random labelled tree on n nodes (each node i > 0 attaches to a uniform
/// earlier node).
inline Pairs random_tree(std::uint32_t n, netsample::Rng& rng) {
  Pairs e;
  for (std::uint32_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::uint32_t> pick(0, i - 1);
    e.emplace_back(pick(rng), i);
  }
  return e;
}

/// Random simple graph: a tree plus extra chords.
inline Pairs random_graph(std::uint32_t n, std::uint32_t extra, netsample::Rng& rng) {
  Pairs e = random_tree(n, rng);
  std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
  for (std::uint32_t k = 0; k < extra; ++k) {
    auto a = pick(rng);
    auto b = pick(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    bool dup = false;
    for (auto [u, v] : e) dup = dup || (std::min(u, v) == a && std::max(u, v) == b);
    if (!dup) e.emplace_back(a, b);
  }
  return e;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("netsample_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
