#pragma once

#include <charconv>
#include <string>
#include <unordered_map>
#include <vector>

#include "modeda/corpus.hpp"
#include "modeda/errors.hpp"

namespace modeda {

using Polarity = double;

// AFINN-style lexicon: word -> integer score in [-5, 5]. Multiword entries
// are skipped at load (the tokenizer never produces them) and counted.
class SentimentLexicon {
 public:
  static SentimentLexicon load(const std::string& path) {
    SentimentLexicon lex;
    auto lines = detail::read_lines(path);
    for (std::size_t li = 0; li < lines.size(); ++li) {
      const std::string& line = lines[li];
      if (detail::trim(line).empty()) continue;
      auto pos = line.find('\t');
      if (pos == std::string::npos)
        throw ParseError(path, li + 1, "expected word<TAB>score");
      std::string word = line.substr(0, pos);
      std::string_view score_field = detail::trim(std::string_view(line).substr(pos + 1));
      int score = 0;
      auto [ptr, ec] = std::from_chars(score_field.data(), score_field.data() + score_field.size(),
                                       score);
      if (ec != std::errc{} || ptr != score_field.data() + score_field.size())
        throw ParseError(path, li + 1, "score is not an integer");
      if (score < -5 || score > 5)
        throw ParseError(path, li + 1, "score out of range [-5, 5]");
      if (word.find(' ') != std::string::npos) {
        ++lex.skipped_multiword_;
        continue;
      }
      lex.scores_[std::move(word)] = score;  // duplicates: last one wins
    }
    if (lex.scores_.empty()) throw ParseError(path + ": no entries");
    return lex;
  }

  void set(std::string word, int score) {
    if (score < -5 || score > 5)
      throw std::invalid_argument("lexicon score out of range [-5, 5]");
    scores_[std::move(word)] = score;
  }

  bool contains(const std::string& word) const { return scores_.count(word) > 0; }
  std::size_t size() const { return scores_.size(); }
  std::size_t skipped_multiword() const { return skipped_multiword_; }

  int score(const std::string& word) const {
    auto it = scores_.find(word);
    return it == scores_.end() ? 0 : it->second;
  }

 private:
  std::unordered_map<std::string, int> scores_;
  std::size_t skipped_multiword_ = 0;
};

// Absent words score 0.
inline Polarity word_polarity(const SentimentLexicon& lexicon, const std::string& word) {
  return static_cast<Polarity>(lexicon.score(word));
}

// Sum of word scores; the empty sentence scores 0.
inline Polarity sentence_polarity(const SentimentLexicon& lexicon,
                                  const std::vector<std::string>& tokens) {
  Polarity sum = 0;
  for (const auto& t : tokens) sum += lexicon.score(t);
  return sum;
}

}  // namespace modeda
