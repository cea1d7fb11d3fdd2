#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mog/embedding.hpp"
#include "mog/error.hpp"
#include "mog/mock_backend.hpp"
#include "mog/model_gateway.hpp"

namespace mogtest {

inline const std::filesystem::path kFixtureDir{MOG_FIXTURE_DIR};
inline const std::filesystem::path kDataDir{MOG_TEST_DATA_DIR};

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("mogtest-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Embeddings looked up by exact text; anything else falls back to the hash
// backend so unscripted probes still work.
class TableEmbedBackend final : public mog::EmbedBackend {
 public:
  explicit TableEmbedBackend(std::size_t dimension) : fallback_(dimension) {}

  void set(const std::string& text, mog::Embedding e) { table_[text] = std::move(e); }

  std::vector<mog::Embedding> embed(const std::vector<std::string>& texts) override {
    if (texts.empty()) throw mog::Error(mog::ErrorCode::kEmptyInput, "no texts");
    std::vector<mog::Embedding> out;
    for (const auto& t : texts) {
      auto it = table_.find(t);
      out.push_back(it != table_.end() ? it->second : fallback_.embed_text(t));
    }
    return out;
  }
  std::size_t dimension() const override { return fallback_.dimension(); }

 private:
  std::map<std::string, mog::Embedding> table_;
  mog::HashEmbedBackend fallback_;
};

struct MockWorld {
  std::shared_ptr<mog::MockChatBackend> chat;
  std::shared_ptr<mog::EmbedBackend> embed;
  std::unique_ptr<mog::ModelGateway> gateway;
};

inline MockWorld make_world(mog::MockScript script = {}, std::size_t dimension = 64,
                            std::shared_ptr<mog::EmbedBackend> embed = nullptr) {
  MockWorld w;
  w.chat = std::make_shared<mog::MockChatBackend>(std::move(script));
  w.embed = embed ? std::move(embed) : std::make_shared<mog::HashEmbedBackend>(dimension);
  w.gateway = std::make_unique<mog::ModelGateway>(w.chat, w.embed);
  return w;
}

inline mog::Embedding random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  mog::Embedding v(dim);
  for (auto& x : v) x = n(rng);
  return v;
}

template <typename F>
mog::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const mog::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected mog::Error");
}

}  // namespace mogtest
