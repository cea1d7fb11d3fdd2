#include "mog/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "mog/error.hpp"

namespace mog {
namespace {

// [0, 1) from the top 53 bits; avoids the implementation-defined
// std::uniform_real_distribution so runs agree across standard libraries.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t nearest(const Embedding& p, const std::vector<Embedding>& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<Embedding> seed_plus_plus(const std::vector<Embedding>& points, std::size_t k,
                                      std::mt19937_64& rng) {
  const std::size_t n = points.size();
  std::vector<std::size_t> chosen;
  chosen.push_back(static_cast<std::size_t>(rng() % n));
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (chosen.size() < k) {
    const Embedding& last = points[chosen.back()];
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], last));
      total += d2[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = unit_draw(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && acc > target) {
          pick = i;
          break;
        }
      }
      if (pick == n) {  // rounding at the top end
        for (std::size_t i = n; i-- > 0;) {
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // every remaining point coincides with a centre; take unused indices
      for (std::size_t i = 0; i < n && pick == n; ++i) {
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) pick = i;
      }
    }
    chosen.push_back(pick);
  }
  std::vector<Embedding> centroids;
  centroids.reserve(k);
  for (std::size_t i : chosen) centroids.push_back(points[i]);
  return centroids;
}

std::vector<Embedding> means(const std::vector<Embedding>& points,
                             const std::vector<std::size_t>& assignment, std::size_t k,
                             std::vector<std::size_t>& counts) {
  const std::size_t dim = points.front().size();
  std::vector<Embedding> sums(k, Embedding(dim, 0.0));
  counts.assign(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    ++counts[assignment[i]];
    for (std::size_t d = 0; d < dim; ++d) sums[assignment[i]][d] += points[i][d];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    for (double& v : sums[c]) v /= static_cast<double>(counts[c]);
  }
  return sums;
}

KMeansResult run_once(const std::vector<Embedding>& points, std::size_t k, std::mt19937_64& rng,
                      int max_iterations) {
  const std::size_t n = points.size();
  std::vector<Embedding> centroids = seed_plus_plus(points, k, rng);
  std::vector<std::size_t> assignment(n, k);  // k = unassigned
  std::vector<std::size_t> counts;
  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = nearest(points[i], centroids);
      if (c != assignment[i]) {
        assignment[i] = c;
        changed = true;
      }
    }
    centroids = means(points, assignment, k, counts);
    // Reseed emptied clusters one at a time.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assignment[i]] < 2) continue;
        const double d = squared_distance(points[i], centroids[assignment[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far == n) continue;  // cannot happen while k <= n
      assignment[far] = c;
      changed = true;
      centroids = means(points, assignment, k, counts);
    }
    if (!changed) break;
  }
  KMeansResult result;
  result.iterations = iter;
  std::vector<std::vector<std::size_t>> clusters(k);
  for (std::size_t i = 0; i < n; ++i) clusters[assignment[i]].push_back(i);
  std::vector<std::size_t> order(k);
  for (std::size_t c = 0; c < k; ++c) order[c] = c;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return clusters[a].front() < clusters[b].front(); });
  for (std::size_t c : order) {
    result.clusters.push_back(std::move(clusters[c]));
    result.centroids.push_back(std::move(centroids[c]));
  }
  result.wcss = within_cluster_ss(points, result.clusters);
  return result;
}

}  // namespace

double within_cluster_ss(const std::vector<Embedding>& points,
                         const std::vector<std::vector<std::size_t>>& clusters) {
  double total = 0.0;
  for (const auto& cluster : clusters) {
    if (cluster.empty()) continue;
    Embedding mean(points[cluster.front()].size(), 0.0);
    for (std::size_t i : cluster) {
      for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += points[i][d];
    }
    for (double& v : mean) v /= static_cast<double>(cluster.size());
    for (std::size_t i : cluster) total += squared_distance(points[i], mean);
  }
  return total;
}

KMeansResult kmeans(const std::vector<Embedding>& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  if (k == 0) throw Error(ErrorCode::kPrecondition, "k must be at least 1");
  if (k > points.size()) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " exceeds " + std::to_string(points.size()) + " points");
  }
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorCode::kDimensionMismatch, "points differ in dimension");
  }
  std::mt19937_64 rng(seed);
  KMeansResult best;
  bool have = false;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    KMeansResult candidate = run_once(points, k, rng, std::max(1, options.max_iterations));
    if (!have || candidate.wcss < best.wcss) {
      best = std::move(candidate);
      have = true;
    }
  }
  return best;
}

}  // namespace mog
