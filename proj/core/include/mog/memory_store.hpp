#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mog/embedding.hpp"

namespace mog {

// One factoid: a self-contained statement plus its embedding, tagged with the
// outline label it currently belongs to.
struct MemoryUnit {
  std::string id;
  std::string text;
  Embedding embedding;
  std::string label;
  std::string source_doc_id;
  std::uint64_t seq = 0;

  friend bool operator==(const MemoryUnit&, const MemoryUnit&) = default;
};

// In-process vector store: save and recall by label, plus relabeling and
// line-oriented persistence. All member functions are safe to call
// concurrently; persist() takes a shared lock, load() builds a fresh store.
class MemoryStore {
 public:
  MemoryStore(std::string topic, std::size_t dimension);

  MemoryStore(const MemoryStore& other);
  MemoryStore(MemoryStore&& other) noexcept;
  MemoryStore& operator=(MemoryStore other) noexcept;
  ~MemoryStore() = default;

  // Saves a factoid under `label` and returns its id. Saving a text whose
  // normalized form already exists for the same source is a no-op that
  // returns the existing id.
  std::string save(std::string_view text, std::string_view label,
                   std::span<const double> embedding, std::string_view source_doc_id);

  // Units whose label equals `label` exactly, in insertion order.
  std::vector<MemoryUnit> recall(std::string_view label) const;

  void relabel(const std::string& unit_id, std::string_view new_label);

  std::optional<MemoryUnit> find(const std::string& unit_id) const;
  std::vector<MemoryUnit> units() const;

  // Distinct labels in order of first appearance by seq.
  std::vector<std::string> labels() const;

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::string& topic() const noexcept { return topic_; }

  // Writes the store atomically (temp file + rename).
  void persist(const std::filesystem::path& path) const;
  static MemoryStore load(const std::filesystem::path& path);

  friend bool operator==(const MemoryStore& a, const MemoryStore& b);

 private:
  using DedupKey = std::pair<std::string, std::string>;

  std::string topic_;
  std::size_t dimension_;
  mutable std::shared_mutex mu_;
  std::vector<MemoryUnit> units_;                   // seq order
  std::map<std::string, std::size_t> index_by_id_;  // id -> position in units_
  std::map<DedupKey, std::string> dedup_;
  std::uint64_t next_seq_ = 1;

  void insert_locked(MemoryUnit unit);
};

}  // namespace mog
