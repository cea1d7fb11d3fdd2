#pragma once

// Reference implementations written independently of the library, used only
// to check it. Slow and simple on purpose.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace mogtest::oracle {

using Point = std::vector<double>;
using Partition = std::vector<std::vector<std::size_t>>;

inline double wcss(const std::vector<Point>& pts, const Partition& p) {
  double total = 0.0;
  for (const auto& block : p) {
    Point mean(pts[0].size(), 0.0);
    for (auto i : block)
      for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += pts[i][d];
    for (auto& m : mean) m /= static_cast<double>(block.size());
    for (auto i : block)
      for (std::size_t d = 0; d < mean.size(); ++d) total += (pts[i][d] - mean[d]) * (pts[i][d] - mean[d]);
  }
  return total;
}

// Blocks ascending internally, ordered by smallest member.
inline Partition canonical(Partition p) {
  for (auto& b : p) std::sort(b.begin(), b.end());
  std::sort(p.begin(), p.end());
  return p;
}

struct BruteForceResult {
  Partition best;
  double best_wcss = std::numeric_limits<double>::infinity();
  double runner_up_wcss = std::numeric_limits<double>::infinity();
};

// Every partition of the points into exactly k non-empty blocks, enumerated as
// restricted growth strings.
inline BruteForceResult min_wcss_partition(const std::vector<Point>& pts, std::size_t k) {
  const std::size_t n = pts.size();
  BruteForceResult r;
  std::vector<std::size_t> label(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      if (used != k) return;
      Partition p(k);
      for (std::size_t j = 0; j < n; ++j) p[label[j]].push_back(j);
      const double w = wcss(pts, p);
      if (w < r.best_wcss) {
        r.runner_up_wcss = r.best_wcss;
        r.best_wcss = w;
        r.best = canonical(p);
      } else if (w < r.runner_up_wcss) {
        r.runner_up_wcss = w;
      }
      return;
    }
    if (n - i < k - used) return;
    for (std::size_t c = 0; c <= used && c < k; ++c) {
      label[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  rec(0, 0);
  return r;
}

// Lowercase; ASCII letters and digits plus every byte >= 0x80 form words.
inline std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : s) {
    const bool word = c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    if (word) {
      cur.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Top-down memoized LCS.
inline std::size_t lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size() || j == b.size()) return 0;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t v = a[i] == b[j] ? 1 + go(i + 1, j + 1) : std::max(go(i + 1, j), go(i, j + 1));
    memo[key] = v;
    return v;
  };
  return go(0, 0);
}

struct Rouge {
  double r1;
  double rl;
};

inline Rouge rouge_recall(const std::string& candidate, const std::string& reference) {
  const auto c = words(candidate);
  const auto r = words(reference);
  std::map<std::string, int> cc, rc;
  for (const auto& w : c) ++cc[w];
  for (const auto& w : r) ++rc[w];
  double matched = 0;
  for (const auto& [w, n] : rc) matched += std::min(n, cc.count(w) ? cc[w] : 0);
  return {100.0 * matched / static_cast<double>(r.size()),
          100.0 * static_cast<double>(lcs(c, r)) / static_cast<double>(r.size())};
}

// Plain 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Bag-of-buckets cosine for token lists under the hash construction with seed 0.
inline double hashed_cosine(const std::vector<std::string>& a, const std::vector<std::string>& b, std::size_t dim) {
  std::map<std::uint64_t, double> va, vb;
  for (const auto& t : a) va[fnv1a(t) % dim] += 1;
  for (const auto& t : b) vb[fnv1a(t) % dim] += 1;
  double d = 0, na = 0, nb = 0;
  for (auto [k, x] : va) {
    na += x * x;
    if (vb.count(k)) d += x * vb[k];
  }
  for (auto [k, x] : vb) nb += x * x;
  return d / std::sqrt(na * nb);
}

}  // namespace mogtest::oracle
