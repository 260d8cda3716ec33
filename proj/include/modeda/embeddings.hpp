#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "modeda/corpus.hpp"
#include "modeda/errors.hpp"

namespace modeda {

struct NeighborList {
  std::string query;
  std::vector<std::pair<std::string, double>> neighbors;  // cosine desc, ties word asc
};

// Dense word vectors. Rows are stored raw plus L2-normalized (zero rows stay
// zero), so similarity scans are plain dot products. Instances are safe to
// share across threads once populated; most_similar results are memoized
// (the augmenters query the same few hundred words over and over).
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("EmbeddingStore: dim must be positive");
  }

  // The memo mutex is not copyable; everything else is plain data.
  EmbeddingStore(const EmbeddingStore& other)
      : dim_(other.dim_),
        words_(other.words_),
        index_(other.index_),
        data_(other.data_),
        unit_(other.unit_),
        duplicates_(other.duplicates_) {}
  EmbeddingStore(EmbeddingStore&& other) noexcept
      : dim_(other.dim_),
        words_(std::move(other.words_)),
        index_(std::move(other.index_)),
        data_(std::move(other.data_)),
        unit_(std::move(other.unit_)),
        duplicates_(other.duplicates_) {}
  EmbeddingStore& operator=(EmbeddingStore other) noexcept {
    dim_ = other.dim_;
    words_ = std::move(other.words_);
    index_ = std::move(other.index_);
    data_ = std::move(other.data_);
    unit_ = std::move(other.unit_);
    duplicates_ = other.duplicates_;
    std::unique_lock lock(memo_mutex_);
    memo_.clear();
    return *this;
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& vocab() const { return words_; }
  std::size_t duplicates_overwritten() const { return duplicates_; }

  bool contains(const std::string& word) const { return index_.count(word) > 0; }

  void add(const std::string& word, const std::vector<double>& vec) {
    if (dim_ == 0) throw std::invalid_argument("EmbeddingStore: dim not set");
    if (vec.size() != dim_)
      throw std::invalid_argument("EmbeddingStore: vector for \"" + word + "\" has " +
                                  std::to_string(vec.size()) + " entries, want " +
                                  std::to_string(dim_));
    for (double v : vec)
      if (!std::isfinite(v))
        throw std::invalid_argument("EmbeddingStore: non-finite entry for \"" + word + "\"");
    auto it = index_.find(word);
    std::size_t row;
    if (it != index_.end()) {
      row = it->second;
      ++duplicates_;
    } else {
      row = words_.size();
      words_.push_back(word);
      index_.emplace(word, row);
      data_.resize(data_.size() + dim_);
      unit_.resize(unit_.size() + dim_);
    }
    std::copy(vec.begin(), vec.end(), data_.begin() + row * dim_);
    double norm = 0;
    for (double v : vec) norm += v * v;
    norm = std::sqrt(norm);
    for (std::size_t d = 0; d < dim_; ++d)
      unit_[row * dim_ + d] = norm > 0 ? vec[d] / norm : 0.0;
    std::unique_lock lock(memo_mutex_);
    memo_.clear();
  }

  std::optional<NeighborList> memo_get(const std::string& key) const {
    std::shared_lock lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it == memo_.end()) return std::nullopt;
    return it->second;
  }

  void memo_put(const std::string& key, const NeighborList& value) const {
    std::unique_lock lock(memo_mutex_);
    memo_[key] = value;
  }

  std::span<const double> vector(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) throw OovError("word not in vocabulary: " + word);
    return row(it->second);
  }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }

  std::span<const double> unit_row(std::size_t i) const {
    return {unit_.data() + i * dim_, dim_};
  }

  std::size_t index_of(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) throw OovError("word not in vocabulary: " + word);
    return it->second;
  }

  // Text format: `word v1 ... vd`, one word per line, dim fixed by the first
  // line.
  static EmbeddingStore load(const std::string& path) {
    EmbeddingStore store;
    auto lines = detail::read_lines(path);
    std::vector<double> vec;
    for (std::size_t li = 0; li < lines.size(); ++li) {
      std::string_view line = detail::trim(lines[li]);
      if (line.empty()) continue;
      auto sp = line.find(' ');
      if (sp == std::string_view::npos)
        throw ParseError(path, li + 1, "expected `word v1 ... vd`");
      std::string word(line.substr(0, sp));
      vec.clear();
      std::string_view rest = line.substr(sp + 1);
      std::size_t i = 0;
      while (i < rest.size()) {
        while (i < rest.size() && rest[i] == ' ') ++i;
        if (i >= rest.size()) break;
        std::size_t j = i;
        while (j < rest.size() && rest[j] != ' ') ++j;
        double v = 0;
        auto field = rest.substr(i, j - i);
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc{} || ptr != field.data() + field.size())
          throw ParseError(path, li + 1, "bad number: " + std::string(field));
        vec.push_back(v);
        i = j;
      }
      if (vec.empty()) throw ParseError(path, li + 1, "no vector entries");
      if (store.dim_ == 0) store.dim_ = vec.size();
      if (vec.size() != store.dim_)
        throw ParseError(path, li + 1,
                         "dimension mismatch: got " + std::to_string(vec.size()) + ", want " +
                             std::to_string(store.dim_));
      try {
        store.add(word, vec);
      } catch (const std::invalid_argument& e) {
        throw ParseError(path, li + 1, e.what());
      }
    }
    if (store.size() == 0) throw ParseError(path + ": no vectors");
    return store;
  }

  // Fixed 6-decimal output; load(save(s)) preserves vocab exactly and values
  // to ~5e-7.
  void save(const std::string& path) const {
    if (size() == 0) throw std::invalid_argument("EmbeddingStore::save: store is empty");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    char buf[64];
    for (std::size_t i = 0; i < words_.size(); ++i) {
      out << words_[i];
      auto r = row(i);
      for (double v : r) {
        std::snprintf(buf, sizeof(buf), " %.6f", v);
        out << buf;
      }
      out << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failed");
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
  std::vector<double> unit_;
  std::size_t duplicates_ = 0;
  mutable std::unordered_map<std::string, NeighborList> memo_;
  mutable std::shared_mutex memo_mutex_;
};

// Result is clamped to [-1, 1] so collinear vectors compare equal to 1
// exactly. Zero-norm input is a contract violation.
inline double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw std::invalid_argument("cosine_similarity: dimension mismatch");
  if (u.empty()) throw std::invalid_argument("cosine_similarity: empty vectors");
  double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0 || nv == 0)
    throw std::invalid_argument("cosine_similarity: zero-norm vector");
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

// Exact k-nearest scan over the whole vocabulary (query excluded) with a
// bounded heap; zero-norm candidates are skipped. OOV query -> OovError.
// Results are memoized per (word, topn) inside the store.
inline NeighborList most_similar(const EmbeddingStore& store, const std::string& word,
                                 std::size_t topn) {
  if (topn == 0) throw std::invalid_argument("most_similar: topn must be positive");
  const std::size_t q = store.index_of(word);
  const std::string memo_key = word + '\x1f' + std::to_string(topn);
  if (auto hit = store.memo_get(memo_key)) return *std::move(hit);
  auto qrow = store.unit_row(q);
  {
    double norm = 0;
    for (double v : qrow) norm += v * v;
    if (norm == 0) throw std::invalid_argument("most_similar: query vector has zero norm");
  }

  struct Cand {
    double sim;
    std::size_t idx;
  };
  const auto& vocab = store.vocab();
  auto better = [&vocab](const Cand& a, const Cand& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    return vocab[a.idx] < vocab[b.idx];
  };

  // Heap ordered by `better` ("better" sorts as smaller), so the front is the
  // weakest kept candidate and gets displaced first.
  std::vector<Cand> heap;
  heap.reserve(topn + 1);
  const std::size_t n = store.size();
  const std::size_t dim = store.dim();
  for (std::size_t c = 0; c < n; ++c) {
    if (c == q) continue;
    auto crow = store.unit_row(c);
    double sim = 0;
    bool zero = true;
    for (std::size_t d = 0; d < dim; ++d) {
      sim += qrow[d] * crow[d];
      zero = zero && crow[d] == 0.0;
    }
    if (zero) continue;
    sim = std::clamp(sim, -1.0, 1.0);
    Cand cand{sim, c};
    if (heap.size() < topn) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end(), better);
    } else if (better(cand, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), better);
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end(), better);
    }
  }
  std::sort(heap.begin(), heap.end(), better);
  NeighborList out;
  out.query = word;
  out.neighbors.reserve(heap.size());
  for (const auto& c : heap) out.neighbors.emplace_back(vocab[c.idx], c.sim);
  store.memo_put(memo_key, out);
  return out;
}

}  // namespace modeda
