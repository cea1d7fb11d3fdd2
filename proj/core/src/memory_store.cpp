#include "mog/memory_store.hpp"

#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "mog/error.hpp"
#include "mog/text.hpp"

namespace mog {
namespace {

constexpr std::string_view kFormatName = "mog-memory-store";
constexpr int kFormatVersion = 1;

std::string make_unit_id(std::uint64_t seq) { return "m" + std::to_string(seq); }

}  // namespace

MemoryStore::MemoryStore(std::string topic, std::size_t dimension)
    : topic_(text::normalize_whitespace(topic)), dimension_(dimension) {
  if (topic_.empty()) throw Error(ErrorCode::kEmptyText, "store topic is empty");
  if (dimension_ == 0) throw Error(ErrorCode::kDimensionMismatch, "store dimension must be positive");
}

MemoryStore::MemoryStore(const MemoryStore& other) : dimension_(other.dimension_) {
  std::shared_lock lock(other.mu_);
  topic_ = other.topic_;
  units_ = other.units_;
  index_by_id_ = other.index_by_id_;
  dedup_ = other.dedup_;
  next_seq_ = other.next_seq_;
}

MemoryStore::MemoryStore(MemoryStore&& other) noexcept : dimension_(other.dimension_) {
  std::unique_lock lock(other.mu_);
  topic_ = std::move(other.topic_);
  units_ = std::move(other.units_);
  index_by_id_ = std::move(other.index_by_id_);
  dedup_ = std::move(other.dedup_);
  next_seq_ = other.next_seq_;
}

MemoryStore& MemoryStore::operator=(MemoryStore other) noexcept {
  std::unique_lock lock(mu_);
  topic_ = std::move(other.topic_);
  dimension_ = other.dimension_;
  units_ = std::move(other.units_);
  index_by_id_ = std::move(other.index_by_id_);
  dedup_ = std::move(other.dedup_);
  next_seq_ = other.next_seq_;
  return *this;
}

void MemoryStore::insert_locked(MemoryUnit unit) {
  dedup_.emplace(DedupKey{unit.text, unit.source_doc_id}, unit.id);
  index_by_id_.emplace(unit.id, units_.size());
  if (unit.seq >= next_seq_) next_seq_ = unit.seq + 1;
  units_.push_back(std::move(unit));
}

std::string MemoryStore::save(std::string_view raw_text, std::string_view raw_label,
                              std::span<const double> embedding,
                              std::string_view source_doc_id) {
  std::string normalized = text::normalize_whitespace(raw_text);
  if (normalized.empty()) throw Error(ErrorCode::kEmptyText, "memory unit text is empty");
  std::string label = text::normalize_whitespace(raw_label);
  if (label.empty()) throw Error(ErrorCode::kEmptyText, "memory unit label is empty");
  if (embedding.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding has dimension " + std::to_string(embedding.size()) +
                    ", store expects " + std::to_string(dimension_));
  }

  std::unique_lock lock(mu_);
  if (auto it = dedup_.find(DedupKey{normalized, std::string(source_doc_id)});
      it != dedup_.end()) {
    return it->second;
  }
  MemoryUnit unit;
  unit.seq = next_seq_;
  unit.id = make_unit_id(unit.seq);
  unit.text = std::move(normalized);
  unit.embedding.assign(embedding.begin(), embedding.end());
  unit.label = std::move(label);
  unit.source_doc_id = std::string(source_doc_id);
  std::string id = unit.id;
  insert_locked(std::move(unit));
  return id;
}

std::vector<MemoryUnit> MemoryStore::recall(std::string_view label) const {
  std::shared_lock lock(mu_);
  std::vector<MemoryUnit> out;
  for (const auto& u : units_) {
    if (u.label == label) out.push_back(u);
  }
  return out;
}

void MemoryStore::relabel(const std::string& unit_id, std::string_view new_label) {
  std::string label = text::normalize_whitespace(new_label);
  if (label.empty()) throw Error(ErrorCode::kEmptyText, "new label is empty");
  std::unique_lock lock(mu_);
  auto it = index_by_id_.find(unit_id);
  if (it == index_by_id_.end()) throw Error(ErrorCode::kUnknownUnit, "no unit '" + unit_id + "'");
  units_[it->second].label = std::move(label);
}

std::optional<MemoryUnit> MemoryStore::find(const std::string& unit_id) const {
  std::shared_lock lock(mu_);
  auto it = index_by_id_.find(unit_id);
  if (it == index_by_id_.end()) return std::nullopt;
  return units_[it->second];
}

std::vector<MemoryUnit> MemoryStore::units() const {
  std::shared_lock lock(mu_);
  return units_;
}

std::vector<std::string> MemoryStore::labels() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& u : units_) {
    if (seen.insert(u.label).second) out.push_back(u.label);
  }
  return out;
}

std::size_t MemoryStore::size() const {
  std::shared_lock lock(mu_);
  return units_.size();
}

// Format: a header object on line 1, then one JSON array per unit:
//   ["<id>", <seq>, "<label>", "<source_doc_id>", "<text>", [e0, e1, ...]]
// The header records the unit count so a file cut at a line boundary is
// still detected as truncated.
void MemoryStore::persist(const std::filesystem::path& path) const {
  std::shared_lock lock(mu_);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot open '" + tmp.string() + "' for writing");
    nlohmann::json header = {{"format", kFormatName},
                             {"version", kFormatVersion},
                             {"topic", topic_},
                             {"dimension", dimension_},
                             {"units", units_.size()}};
    out << header.dump() << '\n';
    for (const auto& u : units_) {
      nlohmann::json record = nlohmann::json::array(
          {u.id, u.seq, u.label, u.source_doc_id, u.text, u.embedding});
      out << record.dump() << '\n';
    }
    out.flush();
    if (!out) throw Error(ErrorCode::kIoFailure, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "rename to '" + path.string() + "' failed: " + ec.message());
}

MemoryStore MemoryStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open '" + path.string() + "'");

  auto corrupt = [&](std::size_t line_no, const std::string& why) {
    return Error(ErrorCode::kCorruptRecord,
                 path.string() + ":" + std::to_string(line_no) + ": " + why);
  };

  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw corrupt(line_no, "missing header");
  nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object() || header.value("format", "") != kFormatName) {
    throw corrupt(line_no, "bad header");
  }
  if (header.value("version", 0) != kFormatVersion) throw corrupt(line_no, "unsupported version");

  std::size_t expected = 0;
  std::optional<MemoryStore> store;
  try {
    expected = header.at("units").get<std::size_t>();
    store.emplace(header.at("topic").get<std::string>(), header.at("dimension").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw corrupt(line_no, e.what());
  } catch (const Error& e) {
    throw corrupt(line_no, e.what());
  }

  std::size_t read = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) throw corrupt(line_no, "empty record");
    if (in.eof()) throw corrupt(line_no, "record not newline-terminated (truncated?)");
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_array() || rec.size() != 6) {
      throw corrupt(line_no, "malformed record");
    }
    MemoryUnit unit;
    try {
      unit.id = rec[0].get<std::string>();
      unit.seq = rec[1].get<std::uint64_t>();
      unit.label = rec[2].get<std::string>();
      unit.source_doc_id = rec[3].get<std::string>();
      unit.text = rec[4].get<std::string>();
      unit.embedding = rec[5].get<Embedding>();
    } catch (const nlohmann::json::exception& e) {
      throw corrupt(line_no, e.what());
    }
    if (unit.text.empty() || unit.label.empty()) throw corrupt(line_no, "empty text or label");
    if (unit.embedding.size() != store->dimension_) throw corrupt(line_no, "embedding dimension mismatch");
    if (store->index_by_id_.contains(unit.id)) throw corrupt(line_no, "duplicate id '" + unit.id + "'");
    if (!store->units_.empty() && unit.seq <= store->units_.back().seq) {
      throw corrupt(line_no, "seq not increasing");
    }
    store->insert_locked(std::move(unit));
    ++read;
  }
  if (read != expected) {
    throw corrupt(line_no + 1, "expected " + std::to_string(expected) + " units, found " +
                                   std::to_string(read) + " (truncated?)");
  }
  return std::move(*store);
}

bool operator==(const MemoryStore& a, const MemoryStore& b) {
  if (&a == &b) return true;
  std::shared_lock la(a.mu_, std::defer_lock);
  std::shared_lock lb(b.mu_, std::defer_lock);
  std::lock(la, lb);
  return a.topic_ == b.topic_ && a.dimension_ == b.dimension_ && a.units_ == b.units_;
}

}  // namespace mog
