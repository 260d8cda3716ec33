#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "modeda/corpus.hpp"
#include "modeda/embeddings.hpp"
#include "modeda/keywords.hpp"
#include "modeda/rng.hpp"
#include "modeda/sentiment.hpp"

namespace modeda {

enum class AugMode { none, eda, mod_eda };

inline AugMode parse_aug_mode(std::string_view s) {
  if (s == "none") return AugMode::none;
  if (s == "eda") return AugMode::eda;
  if (s == "mod_eda") return AugMode::mod_eda;
  throw std::invalid_argument("unknown augmentation mode: " + std::string(s));
}

inline const char* to_string(AugMode m) {
  switch (m) {
    case AugMode::none: return "none";
    case AugMode::eda: return "eda";
    case AugMode::mod_eda: return "mod_eda";
  }
  return "?";
}

// One tokenwise edit. Logs carry enough to replay the edit sequence exactly
// and to audit the choice that was made:
//   sub  - candidates = neighbor words scanned, target = source word polarity
//   ins  - candidates = full candidate pool, target = sentence polarity aimed for
//   swap - pos/pos2 are the exchanged positions
//   del  - one op per removed token, emitted in descending position order
struct EditOp {
  enum class Kind { sub, ins, swap, del };
  Kind kind;
  std::size_t pos = 0;
  std::size_t pos2 = 0;
  std::string old_token;
  std::string new_token;
  std::vector<std::string> candidates;
  double target = 0.0;
};

inline const char* kind_tag(EditOp::Kind k) {
  switch (k) {
    case EditOp::Kind::sub: return "sub";
    case EditOp::Kind::ins: return "ins";
    case EditOp::Kind::swap: return "swap";
    case EditOp::Kind::del: return "del";
  }
  return "?";
}

// Replays an edit log against the source tokens. Validates positions and,
// for sub/del, that the recorded old token matches.
inline std::vector<std::string> apply_ops(std::vector<std::string> tokens,
                                          const std::vector<EditOp>& ops) {
  for (const auto& op : ops) {
    switch (op.kind) {
      case EditOp::Kind::sub:
        if (op.pos >= tokens.size()) throw std::invalid_argument("apply_ops: sub out of range");
        if (tokens[op.pos] != op.old_token)
          throw std::invalid_argument("apply_ops: sub old token mismatch");
        tokens[op.pos] = op.new_token;
        break;
      case EditOp::Kind::ins:
        if (op.pos > tokens.size()) throw std::invalid_argument("apply_ops: ins out of range");
        tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(op.pos), op.new_token);
        break;
      case EditOp::Kind::swap:
        if (op.pos >= tokens.size() || op.pos2 >= tokens.size())
          throw std::invalid_argument("apply_ops: swap out of range");
        std::swap(tokens[op.pos], tokens[op.pos2]);
        break;
      case EditOp::Kind::del:
        if (op.pos >= tokens.size()) throw std::invalid_argument("apply_ops: del out of range");
        if (tokens[op.pos] != op.old_token)
          throw std::invalid_argument("apply_ops: del old token mismatch");
        tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(op.pos));
        break;
    }
  }
  return tokens;
}

using SynonymMap = std::unordered_map<std::string, std::vector<std::string>>;

// TSV rows: `word<TAB>syn1,syn2,...`. Duplicate head words merge their lists
// (first occurrence order, duplicates dropped).
inline SynonymMap load_synonyms(const std::string& path) {
  SynonymMap map;
  auto lines = detail::read_lines(path);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string_view line = detail::trim(lines[li]);
    if (line.empty()) continue;
    auto pos = line.find('\t');
    if (pos == std::string_view::npos)
      throw ParseError(path, li + 1, "expected word<TAB>syn1,syn2,...");
    std::string word(detail::trim(line.substr(0, pos)));
    if (word.empty()) throw ParseError(path, li + 1, "empty head word");
    auto& list = map[word];
    std::string_view rest = line.substr(pos + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto comma = rest.find(',', start);
      std::string_view item = comma == std::string_view::npos
                                  ? rest.substr(start)
                                  : rest.substr(start, comma - start);
      item = detail::trim(item);
      if (!item.empty() && std::find(list.begin(), list.end(), item) == list.end())
        list.emplace_back(item);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (list.empty()) throw ParseError(path, li + 1, "no synonyms listed");
  }
  return map;
}

// Replaces up to n_sub tokens (distinct in-vocab positions, bounded
// resampling) by the embedding neighbor whose polarity is closest to the
// replaced word's. Ties fall to the neighbor list order: similarity desc,
// then word asc.
inline std::vector<std::string> modified_substitution(std::vector<std::string> tokens,
                                                      std::size_t n_sub, std::size_t t,
                                                      const EmbeddingStore& store,
                                                      const SentimentLexicon& lexicon, Rng& rng,
                                                      std::vector<EditOp>& log) {
  if (tokens.empty() || n_sub == 0) return tokens;
  std::vector<std::size_t> chosen;
  std::vector<bool> used(tokens.size(), false);
  const std::size_t max_attempts = 10 * n_sub;
  for (std::size_t attempt = 0; attempt < max_attempts && chosen.size() < n_sub; ++attempt) {
    std::size_t p = rng.uniform_index(tokens.size());
    if (used[p]) continue;
    if (!store.contains(tokens[p])) continue;
    used[p] = true;
    chosen.push_back(p);
  }
  for (std::size_t p : chosen) {
    const std::string& word = tokens[p];
    NeighborList nl = most_similar(store, word, t);
    if (nl.neighbors.empty()) continue;
    const Polarity base = word_polarity(lexicon, word);
    std::size_t best = 0;
    double best_delta = std::abs(word_polarity(lexicon, nl.neighbors[0].first) - base);
    for (std::size_t c = 1; c < nl.neighbors.size(); ++c) {
      double delta = std::abs(word_polarity(lexicon, nl.neighbors[c].first) - base);
      if (delta < best_delta) {
        best = c;
        best_delta = delta;
      }
    }
    EditOp op;
    op.kind = EditOp::Kind::sub;
    op.pos = p;
    op.old_token = word;
    op.new_token = nl.neighbors[best].first;
    op.candidates.reserve(nl.neighbors.size());
    for (const auto& [w, sim] : nl.neighbors) op.candidates.push_back(w);
    op.target = base;
    tokens[p] = nl.neighbors[best].first;
    log.push_back(std::move(op));
  }
  return tokens;
}

namespace detail {

struct PoolEntry {
  std::string word;
  double polarity = 0;
  bool is_seed = false;
  double strength = 0;  // seed: class frequency, expansion: cosine similarity
};

// Total order: smallest |polarity - target| first, seeds before expansions,
// then higher strength, then word asc.
inline bool pool_better(const PoolEntry& a, const PoolEntry& b, double target) {
  const double da = std::abs(a.polarity - target);
  const double db = std::abs(b.polarity - target);
  if (da != db) return da < db;
  if (a.is_seed != b.is_seed) return a.is_seed;
  if (a.strength != b.strength) return a.strength > b.strength;
  return a.word < b.word;
}

}  // namespace detail

// Inserts n_ins words drawn from pools of class keywords plus their
// embedding neighbors, each time choosing the pool word whose polarity is
// closest to the *original* sentence's polarity (computed once).
inline std::vector<std::string> modified_insertion(std::vector<std::string> tokens,
                                                   const std::string& label, std::size_t n_ins,
                                                   std::size_t t, const EmbeddingStore& store,
                                                   const SentimentLexicon& lexicon,
                                                   const ClassKeywordTable& keywords, Rng& rng,
                                                   std::vector<EditOp>& log) {
  if (n_ins == 0) return tokens;
  const auto* keys = keywords.find(label);
  if (keys == nullptr)
    throw std::invalid_argument("modified_insertion: label not in keyword table: " + label);
  if (keys->empty()) return tokens;
  const Polarity target = sentence_polarity(lexicon, tokens);
  for (std::size_t r = 0; r < n_ins; ++r) {
    auto seed_idx = rng.sample_indices(keys->size(), t);
    std::vector<detail::PoolEntry> pool;
    std::unordered_map<std::string, std::size_t> where;
    auto add_entry = [&](detail::PoolEntry e) {
      auto it = where.find(e.word);
      if (it == where.end()) {
        where.emplace(e.word, pool.size());
        pool.push_back(std::move(e));
        return;
      }
      detail::PoolEntry& have = pool[it->second];
      if (e.is_seed && !have.is_seed) {
        have = std::move(e);
      } else if (e.is_seed == have.is_seed && e.strength > have.strength) {
        have.strength = e.strength;
      }
    };
    for (std::size_t si : seed_idx) {
      const auto& [seed_word, freq] = (*keys)[si];
      add_entry({seed_word, word_polarity(lexicon, seed_word), true,
                 static_cast<double>(freq)});
      if (store.contains(seed_word)) {
        NeighborList nl = most_similar(store, seed_word, t);
        for (const auto& [w, sim] : nl.neighbors)
          add_entry({w, word_polarity(lexicon, w), false, sim});
      }
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < pool.size(); ++c)
      if (detail::pool_better(pool[c], pool[best], target)) best = c;
    std::size_t at = rng.uniform_index(tokens.size() + 1);
    EditOp op;
    op.kind = EditOp::Kind::ins;
    op.pos = at;
    op.new_token = pool[best].word;
    op.candidates.reserve(pool.size());
    for (const auto& e : pool) op.candidates.push_back(e.word);
    op.target = target;
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), pool[best].word);
    log.push_back(std::move(op));
  }
  return tokens;
}

// n_swap exchanges of two distinct random positions. Fewer than two tokens:
// identity.
inline std::vector<std::string> random_swap(std::vector<std::string> tokens, std::size_t n_swap,
                                            Rng& rng, std::vector<EditOp>& log) {
  if (tokens.size() < 2) return tokens;
  for (std::size_t r = 0; r < n_swap; ++r) {
    std::size_t i = rng.uniform_index(tokens.size());
    std::size_t j = rng.uniform_index(tokens.size() - 1);
    if (j >= i) ++j;
    EditOp op;
    op.kind = EditOp::Kind::swap;
    op.pos = i;
    op.pos2 = j;
    op.old_token = tokens[i];
    op.new_token = tokens[j];
    std::swap(tokens[i], tokens[j]);
    log.push_back(std::move(op));
  }
  return tokens;
}

// Drops each token independently with probability p_del; if everything was
// dropped, one uniformly chosen token is retained instead. Del ops are
// logged in descending position order so the log replays sequentially.
inline std::vector<std::string> random_deletion(std::vector<std::string> tokens, double p_del,
                                                Rng& rng, std::vector<EditOp>& log) {
  if (tokens.empty() || p_del <= 0) return tokens;
  if (p_del >= 1)
    throw std::invalid_argument("random_deletion: p_del must be in [0, 1)");
  std::vector<std::size_t> deleted;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (rng.uniform_real() < p_del)
      deleted.push_back(i);
    else
      kept.push_back(tokens[i]);
  }
  if (kept.empty()) {
    std::size_t keep_at = rng.uniform_index(tokens.size());
    deleted.clear();
    for (std::size_t i = 0; i < tokens.size(); ++i)
      if (i != keep_at) deleted.push_back(i);
    kept.push_back(tokens[keep_at]);
  }
  for (auto it = deleted.rbegin(); it != deleted.rend(); ++it) {
    EditOp op;
    op.kind = EditOp::Kind::del;
    op.pos = *it;
    op.old_token = tokens[*it];
    log.push_back(std::move(op));
  }
  return kept;
}

// Classic EDA synonym replacement: up to n_sub distinct positions with a
// synonym entry (bounded resampling), replacement drawn uniformly from the
// entry's list.
inline std::vector<std::string> eda_synonym_replacement(std::vector<std::string> tokens,
                                                        std::size_t n_sub,
                                                        const SynonymMap& synonyms, Rng& rng,
                                                        std::vector<EditOp>& log) {
  if (tokens.empty() || n_sub == 0 || synonyms.empty()) return tokens;
  std::vector<bool> used(tokens.size(), false);
  const std::size_t max_attempts = 10 * n_sub;
  std::size_t done = 0;
  for (std::size_t attempt = 0; attempt < max_attempts && done < n_sub; ++attempt) {
    std::size_t p = rng.uniform_index(tokens.size());
    if (used[p]) continue;
    auto it = synonyms.find(tokens[p]);
    if (it == synonyms.end() || it->second.empty()) continue;
    used[p] = true;
    ++done;
    const auto& list = it->second;
    std::size_t pick = rng.uniform_index(list.size());
    EditOp op;
    op.kind = EditOp::Kind::sub;
    op.pos = p;
    op.old_token = tokens[p];
    op.new_token = list[pick];
    op.candidates = list;
    tokens[p] = list[pick];
    log.push_back(std::move(op));
  }
  return tokens;
}

// Classic EDA random insertion: n_ins words drawn uniformly from the corpus
// vocabulary, inserted at uniform positions.
inline std::vector<std::string> eda_random_insertion(std::vector<std::string> tokens,
                                                     std::size_t n_ins,
                                                     const std::vector<std::string>& vocabulary,
                                                     Rng& rng, std::vector<EditOp>& log) {
  if (n_ins == 0) return tokens;
  if (vocabulary.empty())
    throw std::invalid_argument("eda_random_insertion: vocabulary is empty");
  for (std::size_t r = 0; r < n_ins; ++r) {
    const std::string& word = vocabulary[rng.uniform_index(vocabulary.size())];
    std::size_t at = rng.uniform_index(tokens.size() + 1);
    EditOp op;
    op.kind = EditOp::Kind::ins;
    op.pos = at;
    op.new_token = word;
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), word);
    log.push_back(std::move(op));
  }
  return tokens;
}

struct AugmentationConfig {
  AugMode mode = AugMode::mod_eda;
  std::size_t t = 5;
  // unset -> max(1, round(0.1 * sentence length)), resolved per sentence
  std::optional<std::size_t> n_sub;
  std::optional<std::size_t> n_ins;
  std::optional<std::size_t> n_swap;
  double p_del = 0.1;
  std::size_t n_aug = 9;
  std::uint64_t seed = 0;

  void validate() const {
    if (t == 0) throw std::invalid_argument("augment config: t must be positive");
    if (n_aug == 0) throw std::invalid_argument("augment config: n_aug must be positive");
    if (p_del < 0 || p_del >= 1)
      throw std::invalid_argument("augment config: p_del must be in [0, 1)");
  }
};

inline std::size_t auto_count(std::size_t sentence_len) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(
                                      std::lround(0.1 * static_cast<double>(sentence_len))));
}

// Borrowed resources for the augmenters. Which ones must be non-null depends
// on the mode; augment_sentence treats an op whose resources are missing as
// disabled.
struct AugmentResources {
  const EmbeddingStore* store = nullptr;
  const SentimentLexicon* lexicon = nullptr;
  const ClassKeywordTable* keywords = nullptr;
  const SynonymMap* synonyms = nullptr;
  const std::vector<std::string>* vocabulary = nullptr;  // eda insertion source
};

struct AugmentedSentence {
  std::vector<std::string> tokens;
  std::string source_id;
  std::string label;
  std::vector<EditOp> ops;
};

// Produces n_aug variants of one document. Each variant applies a uniformly
// random non-empty subset of the enabled operations in the fixed order
// sub, ins, swap, del; effective counts are resolved from the original
// sentence length. mode none returns a single unmodified copy.
inline std::vector<AugmentedSentence> augment_sentence(const Document& doc,
                                                       const AugmentationConfig& config,
                                                       const AugmentResources& res, Rng& rng) {
  config.validate();
  std::vector<AugmentedSentence> out;
  if (config.mode == AugMode::none) {
    out.push_back({doc.tokens, doc.id, doc.label, {}});
    return out;
  }
  if (doc.tokens.empty())
    throw std::invalid_argument("augment_sentence: document has no tokens: " + doc.id);

  const std::size_t len = doc.tokens.size();
  const std::size_t ns = config.n_sub.value_or(auto_count(len));
  const std::size_t ni = config.n_ins.value_or(auto_count(len));
  const std::size_t nsw = config.n_swap.value_or(auto_count(len));

  enum class Op { sub, ins, swap, del };
  std::vector<Op> enabled;
  if (config.mode == AugMode::mod_eda) {
    if (ns > 0 && res.store && res.lexicon) enabled.push_back(Op::sub);
    if (ni > 0 && res.store && res.lexicon && res.keywords) {
      if (!doc.labeled())
        throw std::invalid_argument("augment_sentence: unlabeled document: " + doc.id);
      enabled.push_back(Op::ins);
    }
  } else {
    if (ns > 0 && res.synonyms) enabled.push_back(Op::sub);
    if (ni > 0 && res.vocabulary && !res.vocabulary->empty()) enabled.push_back(Op::ins);
  }
  if (nsw > 0) enabled.push_back(Op::swap);
  if (config.p_del > 0) enabled.push_back(Op::del);

  out.reserve(config.n_aug);
  for (std::size_t a = 0; a < config.n_aug; ++a) {
    AugmentedSentence s;
    s.source_id = doc.id;
    s.label = doc.label;
    if (enabled.empty()) {
      s.tokens = doc.tokens;
      out.push_back(std::move(s));
      continue;
    }
    const std::size_t mask = 1 + rng.uniform_index((std::size_t{1} << enabled.size()) - 1);
    std::vector<std::string> tokens = doc.tokens;
    for (std::size_t b = 0; b < enabled.size(); ++b) {
      if (!(mask & (std::size_t{1} << b))) continue;
      switch (enabled[b]) {
        case Op::sub:
          tokens = config.mode == AugMode::mod_eda
                       ? modified_substitution(std::move(tokens), ns, config.t, *res.store,
                                               *res.lexicon, rng, s.ops)
                       : eda_synonym_replacement(std::move(tokens), ns, *res.synonyms, rng,
                                                 s.ops);
          break;
        case Op::ins:
          tokens = config.mode == AugMode::mod_eda
                       ? modified_insertion(std::move(tokens), doc.label, ni, config.t,
                                            *res.store, *res.lexicon, *res.keywords, rng, s.ops)
                       : eda_random_insertion(std::move(tokens), ni, *res.vocabulary, rng,
                                              s.ops);
          break;
        case Op::swap:
          tokens = random_swap(std::move(tokens), nsw, rng, s.ops);
          break;
        case Op::del:
          tokens = random_deletion(std::move(tokens), config.p_del, rng, s.ops);
          break;
      }
    }
    s.tokens = std::move(tokens);
    out.push_back(std::move(s));
  }
  return out;
}

struct Provenance {
  std::string source_id;
  std::vector<EditOp> ops;
};

struct AugmentOutput {
  Corpus corpus;
  std::vector<Provenance> provenance;  // aligned 1:1 with corpus.documents
};

inline std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) {
    if (!s.empty()) s.push_back(' ');
    s += t;
  }
  return s;
}

// Whole-corpus driver. Output order is originals interleaved with their
// variants (src, src-aug1..src-augN, next src, ...). Each document draws
// from its own RNG seeded by seed ^ fnv1a64(id), so results are identical
// for any worker count. Documents with no tokens pass through as identity
// copies so the count law |out| = |in| * (1 + n_aug) always holds.
inline AugmentOutput augment_corpus(const Corpus& corpus, const AugmentationConfig& config,
                                    const AugmentResources& resources, std::size_t workers = 1) {
  config.validate();
  if (workers == 0) throw std::invalid_argument("augment_corpus: workers must be positive");
  AugmentOutput out;
  if (config.mode == AugMode::none) {
    out.corpus = corpus;
    for (const auto& d : corpus.documents) out.provenance.push_back({d.id, {}});
    return out;
  }

  AugmentResources res = resources;
  std::vector<std::string> eda_vocab;
  const bool ins_wanted = !config.n_ins.has_value() || *config.n_ins > 0;
  if (config.mode == AugMode::eda && ins_wanted && res.vocabulary == nullptr) {
    std::set<std::string> distinct;
    for (const auto& d : corpus.documents)
      for (const auto& t : d.tokens) distinct.insert(t);
    eda_vocab.assign(distinct.begin(), distinct.end());
    res.vocabulary = &eda_vocab;
  }

  // Fail before any work: mod_eda insertion needs a label known to the
  // keyword table on every non-empty document.
  if (config.mode == AugMode::mod_eda && ins_wanted && res.store && res.lexicon &&
      res.keywords) {
    for (const auto& d : corpus.documents) {
      if (d.tokens.empty()) continue;
      if (!d.labeled())
        throw std::invalid_argument("augment_corpus: unlabeled document: " + d.id);
      if (!res.keywords->contains(d.label))
        throw std::invalid_argument("augment_corpus: label not in keyword table: " + d.label +
                                    " (document " + d.id + ")");
    }
  }

  const std::size_t n = corpus.documents.size();
  std::vector<std::vector<AugmentedSentence>> slots(n);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Document& doc = corpus.documents[i];
      Rng rng(derive_seed(config.seed, doc.id));
      if (doc.tokens.empty()) {
        std::vector<AugmentedSentence> copies;
        copies.reserve(config.n_aug);
        for (std::size_t a = 0; a < config.n_aug; ++a)
          copies.push_back({doc.tokens, doc.id, doc.label, {}});
        slots[i] = std::move(copies);
      } else {
        slots[i] = augment_sentence(doc, config, res, rng);
      }
    }
  };

  if (workers == 1 || n < 2) {
    work(0, n);
  } else {
    const std::size_t used = std::min(workers, n);
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(used);
    const std::size_t chunk = (n + used - 1) / used;
    for (std::size_t w = 0; w < used; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      threads.emplace_back([&, w, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Document& src = corpus.documents[i];
    out.corpus.add(src);
    out.provenance.push_back({src.id, {}});
    for (std::size_t a = 0; a < slots[i].size(); ++a) {
      const AugmentedSentence& s = slots[i][a];
      Document d;
      d.id = src.id + "-aug" + std::to_string(a + 1);
      d.tokens = s.tokens;
      d.clean_text = join_tokens(s.tokens);
      d.raw_text = d.clean_text;
      d.label = s.label;
      out.corpus.add(std::move(d));
      out.provenance.push_back({s.source_id, s.ops});
    }
  }
  return out;
}

// Augment output record per document:
//   {"id":..., "label":..., "text":..., "source_id":..., "ops":[...]}
// Op objects carry "op" and "pos" always, "old"/"new" where meaningful, and
// "pos2" for swaps (required to replay them).
inline void save_augmented_jsonl(const AugmentOutput& output, const std::string& path) {
  if (output.corpus.documents.size() != output.provenance.size())
    throw std::invalid_argument("save_augmented_jsonl: provenance misaligned");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  for (std::size_t i = 0; i < output.corpus.documents.size(); ++i) {
    const Document& d = output.corpus.documents[i];
    const Provenance& prov = output.provenance[i];
    nlohmann::json j;
    j["id"] = d.id;
    if (!d.label.empty()) j["label"] = d.label;
    j["text"] = d.clean_text;
    j["source_id"] = prov.source_id;
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& op : prov.ops) {
      nlohmann::json o;
      o["op"] = kind_tag(op.kind);
      o["pos"] = op.pos;
      switch (op.kind) {
        case EditOp::Kind::sub:
          o["old"] = op.old_token;
          o["new"] = op.new_token;
          break;
        case EditOp::Kind::ins:
          o["new"] = op.new_token;
          break;
        case EditOp::Kind::swap:
          o["pos2"] = op.pos2;
          o["old"] = op.old_token;
          o["new"] = op.new_token;
          break;
        case EditOp::Kind::del:
          o["old"] = op.old_token;
          break;
      }
      ops.push_back(std::move(o));
    }
    j["ops"] = std::move(ops);
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace modeda
