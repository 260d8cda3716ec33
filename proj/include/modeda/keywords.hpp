#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "modeda/corpus.hpp"

namespace modeda {

// Per-class keyword list: the top_m most frequent non-stopword tokens of each
// label, ordered by count desc then word asc.
class ClassKeywordTable {
 public:
  using Entry = std::pair<std::string, std::int64_t>;

  void set(const std::string& label, std::vector<Entry> entries) {
    table_[label] = std::move(entries);
  }

  bool contains(const std::string& label) const { return table_.count(label) > 0; }

  const std::vector<Entry>* find(const std::string& label) const {
    auto it = table_.find(label);
    return it == table_.end() ? nullptr : &it->second;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(table_.size());
    for (const auto& [label, entries] : table_) out.push_back(label);
    return out;
  }

  std::size_t size() const { return table_.size(); }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [label, entries] : table_) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& [word, count] : entries) arr.push_back({word, count});
      j[label] = std::move(arr);
    }
    return j;
  }

 private:
  std::map<std::string, std::vector<Entry>> table_;
};

inline ClassKeywordTable build_class_keywords(const Corpus& corpus, const StopwordList& stopwords,
                                              std::size_t top_m = 100) {
  if (top_m == 0) throw std::invalid_argument("build_class_keywords: top_m must be positive");
  std::map<std::string, std::map<std::string, std::int64_t>> counts;
  for (const auto& doc : corpus.documents) {
    if (!doc.labeled()) continue;
    auto& label_counts = counts[doc.label];
    for (const auto& tok : doc.tokens) {
      if (stopwords.contains(tok)) continue;
      ++label_counts[tok];
    }
  }
  if (counts.empty())
    throw std::invalid_argument("build_class_keywords: corpus has no labeled documents");
  ClassKeywordTable table;
  for (auto& [label, label_counts] : counts) {
    std::vector<ClassKeywordTable::Entry> entries(label_counts.begin(), label_counts.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (entries.size() > top_m) entries.resize(top_m);
    table.set(label, std::move(entries));
  }
  return table;
}

}  // namespace modeda
