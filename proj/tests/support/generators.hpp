#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mog/generation.hpp"
#include "mog/kmeans.hpp"

namespace mogtest {

// Groups drawn around far-apart centres; keeps only draws where every
// between-group distance is at least `ratio` times every within-group one.
inline std::vector<mog::Embedding> separated_fixture(std::mt19937_64& rng, std::size_t n, std::size_t k,
                                                     double ratio) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    const std::size_t dim = 1 + rng() % 3;
    std::vector<mog::Embedding> centres(k, mog::Embedding(dim));
    for (auto& c : centres)
      for (auto& x : c) x = 40.0 * u(rng);
    std::vector<std::size_t> group(n);
    for (std::size_t i = 0; i < n; ++i) group[i] = i < k ? i : rng() % k;
    std::shuffle(group.begin(), group.end(), rng);
    std::vector<mog::Embedding> pts(n, mog::Embedding(dim));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < dim; ++d) pts[i][d] = centres[group[i]][d] + u(rng);
    double max_within = 0.0, min_between = 1e300;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dist = std::sqrt(mog::squared_distance(pts[i], pts[j]));
        if (group[i] == group[j]) max_within = std::max(max_within, dist);
        else min_between = std::min(min_between, dist);
      }
    if (k == 1 || min_between >= ratio * max_within) return pts;
  }
}

inline const std::map<std::string, std::string>& golden_urls() {
  static const std::map<std::string, std::string> urls{
      {"dA", "https://example.org/lake-varn"},
      {"dB", "https://example.org/glaciers"},
      {"dC", "https://example.org/protection"},
      {"dD", "https://example.org/festival"},
  };
  return urls;
}

// The article that tests/data/golden_article.md was written for.
inline mog::Article golden_article() {
  auto S = [](std::string text, std::vector<std::string> cites = {}, bool para = false) {
    return mog::Sentence{std::move(text), std::move(cites), std::nullopt, para};
  };
  mog::Article a;
  a.topic = "Lake Varn";
  a.unit_sources = {{"u1", "dA"}, {"u2", "dB"}, {"u3", "dA"}, {"u4", "dC"}, {"u5", "dD"}, {"u6", "dB"}};
  a.lead = {S("Lake Varn is a freshwater lake in the northern uplands.", {"u1"}, true),
            S("Its basin covers 42 square kilometres.", {"u2", "u3"}),
            S("The lake has been protected since 1998.", {"u4"}, true)};
  a.body = mog::Section{"Lake Varn", "Lake Varn", 0, {}, {}};
  mog::Section geo{"Geography", "Lake Varn/Geography", 1, {}, {}};
  geo.children.push_back(mog::Section{"Basin", "Lake Varn/Geography/Basin", 2,
                                      {S("The basin was carved by glaciers.", {"u6"}, true), S("Three rivers feed it.")},
                                      {}});
  geo.children.push_back(mog::Section{"Shoreline", "Lake Varn/Geography/Shoreline", 2,
                                      {S("Dr. Ames mapped the shoreline in 1952.", {"u4", "u1"}, true)}, {}});
  a.body.children.push_back(geo);
  a.body.children.push_back(mog::Section{"Culture", "Lake Varn/Culture", 1,
                                         {S("A summer festival is held at the lake every July.", {"u5"}, true)}, {}});
  mog::number_references(a, golden_urls());
  return a;
}

}  // namespace mogtest
