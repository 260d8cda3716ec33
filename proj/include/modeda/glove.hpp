#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "modeda/corpus.hpp"
#include "modeda/embeddings.hpp"
#include "modeda/rng.hpp"

namespace modeda {

struct EmbedTrainConfig {
  std::size_t dim = 50;
  std::size_t window = 5;
  double x_max = 100.0;
  double alpha = 0.75;
  std::size_t epochs = 25;
  double learning_rate = 0.05;
  std::size_t min_count = 2;
  std::uint64_t seed = 0;

  void validate() const {
    if (dim == 0) throw std::invalid_argument("train config: dim must be positive");
    if (window == 0) throw std::invalid_argument("train config: window must be positive");
    if (x_max <= 0) throw std::invalid_argument("train config: x_max must be positive");
    if (alpha <= 0) throw std::invalid_argument("train config: alpha must be positive");
    if (epochs == 0) throw std::invalid_argument("train config: epochs must be positive");
    if (learning_rate <= 0)
      throw std::invalid_argument("train config: learning_rate must be positive");
    if (min_count == 0) throw std::invalid_argument("train config: min_count must be positive");
  }
};

// Symmetric co-occurrence counts with 1/distance weighting. Vocabulary is
// the min_count-filtered token set, sorted; out-of-vocabulary tokens are
// removed from the stream before distances are measured.
struct CoocTable {
  std::vector<std::string> vocab;
  std::unordered_map<std::uint64_t, double> cells;  // key = i * |V| + j, both directions

  std::uint64_t key(std::size_t i, std::size_t j) const {
    return static_cast<std::uint64_t>(i) * vocab.size() + j;
  }

  double at(std::size_t i, std::size_t j) const {
    auto it = cells.find(key(i, j));
    return it == cells.end() ? 0.0 : it->second;
  }
};

inline CoocTable build_cooccurrence(const Corpus& corpus, std::size_t window,
                                    std::size_t min_count) {
  if (window == 0) throw std::invalid_argument("build_cooccurrence: window must be positive");
  std::map<std::string, std::size_t> freq;
  for (const auto& doc : corpus.documents)
    for (const auto& tok : doc.tokens) ++freq[tok];
  CoocTable table;
  for (const auto& [word, count] : freq)
    if (count >= min_count) table.vocab.push_back(word);  // freq map is sorted -> vocab sorted
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < table.vocab.size(); ++i) index.emplace(table.vocab[i], i);

  std::vector<std::size_t> ids;
  for (const auto& doc : corpus.documents) {
    ids.clear();
    for (const auto& tok : doc.tokens) {
      auto it = index.find(tok);
      if (it != index.end()) ids.push_back(it->second);
    }
    for (std::size_t p = 0; p < ids.size(); ++p) {
      std::size_t lo = p > window ? p - window : 0;
      for (std::size_t q = lo; q < p; ++q) {
        double w = 1.0 / static_cast<double>(p - q);
        table.cells[table.key(ids[p], ids[q])] += w;
        table.cells[table.key(ids[q], ids[p])] += w;
      }
    }
  }
  return table;
}

struct EmbedTrainResult {
  EmbeddingStore store;
  std::vector<double> epoch_loss;  // mean 0.5 * f(x) * diff^2 per entry
};

// GloVe with AdaGrad (accumulators start at 1.0, step uses the accumulator
// before the current gradient is added, final vectors are word + context).
// Single-threaded on purpose: results are bitwise reproducible from the seed.
inline EmbedTrainResult train_embeddings(const Corpus& corpus, const EmbedTrainConfig& config) {
  config.validate();
  CoocTable cooc = build_cooccurrence(corpus, config.window, config.min_count);
  const std::size_t v = cooc.vocab.size();
  if (v == 0)
    throw std::invalid_argument(
        "train_embeddings: vocabulary is empty after min_count filtering");
  const std::size_t dim = config.dim;

  struct Entry {
    std::uint64_t key;
    double x;
  };
  std::vector<Entry> entries;
  entries.reserve(cooc.cells.size());
  for (const auto& [key, x] : cooc.cells) entries.push_back({key, x});
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key; });

  Rng rng(config.seed);
  auto init = [&rng, dim]() { return (rng.uniform_real() - 0.5) / static_cast<double>(dim); };
  std::vector<double> w(v * dim), wc(v * dim), b(v), bc(v);
  for (auto& x : w) x = init();
  for (auto& x : wc) x = init();
  for (auto& x : b) x = init();
  for (auto& x : bc) x = init();
  std::vector<double> gw(v * dim, 1.0), gwc(v * dim, 1.0), gb(v, 1.0), gbc(v, 1.0);

  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  EmbedTrainResult result;
  result.epoch_loss.reserve(config.epochs);
  const double lr = config.learning_rate;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double cost = 0;
    for (std::size_t k : order) {
      const Entry& e = entries[k];
      const std::size_t i = static_cast<std::size_t>(e.key / v);
      const std::size_t j = static_cast<std::size_t>(e.key % v);
      const std::size_t io = i * dim, jo = j * dim;
      double dot = 0;
      for (std::size_t d = 0; d < dim; ++d) dot += w[io + d] * wc[jo + d];
      const double diff = dot + b[i] + bc[j] - std::log(e.x);
      const double f = e.x < config.x_max ? std::pow(e.x / config.x_max, config.alpha) : 1.0;
      const double fdiff = f * diff;
      cost += 0.5 * fdiff * diff;
      for (std::size_t d = 0; d < dim; ++d) {
        const double wi = w[io + d];
        const double cj = wc[jo + d];
        const double g1 = fdiff * cj;
        const double g2 = fdiff * wi;
        w[io + d] -= lr * g1 / std::sqrt(gw[io + d]);
        wc[jo + d] -= lr * g2 / std::sqrt(gwc[jo + d]);
        gw[io + d] += g1 * g1;
        gwc[jo + d] += g2 * g2;
      }
      b[i] -= lr * fdiff / std::sqrt(gb[i]);
      gb[i] += fdiff * fdiff;
      bc[j] -= lr * fdiff / std::sqrt(gbc[j]);
      gbc[j] += fdiff * fdiff;
    }
    result.epoch_loss.push_back(entries.empty() ? 0.0 : cost / entries.size());
  }

  result.store = EmbeddingStore(dim);
  std::vector<double> vec(dim);
  for (std::size_t i = 0; i < v; ++i) {
    for (std::size_t d = 0; d < dim; ++d) vec[d] = w[i * dim + d] + wc[i * dim + d];
    result.store.add(cooc.vocab[i], vec);
  }
  return result;
}

}  // namespace modeda
