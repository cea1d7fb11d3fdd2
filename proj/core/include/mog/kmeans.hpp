#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mog/embedding.hpp"

namespace mog {

struct KMeansOptions {
  int restarts = 10;         // independent k-means++ seedings; lowest WCSS wins
  int max_iterations = 100;  // Lloyd iterations per restart
};

// Index-based clustering result. Clusters are non-empty, partition
// [0, points.size()), hold ascending indices, and are ordered by their
// smallest member. centroids[i] is the mean of clusters[i].
struct KMeansResult {
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<Embedding> centroids;
  double wcss = 0.0;
  int iterations = 0;  // of the winning restart
};

// Lloyd's algorithm with k-means++ seeding driven by a 64-bit Mersenne
// Twister seeded with `seed`. Assignment ties go to the lower centroid index.
// A cluster that empties during iteration is reseeded with the point farthest
// from its own centroid among clusters that can spare one.
// Throws Error(kKTooLarge) if k > points.size(), kPrecondition if k == 0,
// kDimensionMismatch if the points disagree on dimension.
KMeansResult kmeans(const std::vector<Embedding>& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

double within_cluster_ss(const std::vector<Embedding>& points,
                         const std::vector<std::vector<std::size_t>>& clusters);

}  // namespace mog
