#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "modeda/augment.hpp"
#include "modeda/classify.hpp"
#include "modeda/corpus.hpp"
#include "modeda/embeddings.hpp"
#include "modeda/errors.hpp"
#include "modeda/eval.hpp"
#include "modeda/glove.hpp"
#include "modeda/keywords.hpp"
#include "modeda/rng.hpp"
#include "modeda/sentiment.hpp"
#include "modeda/stopwords_en.hpp"
#include "modeda/version.hpp"

namespace modeda::cli {

// Bad flag combinations that CLI11 cannot express -> exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file for digest");
  std::ostringstream buf;
  buf << in.rdbuf();
  char out[32];
  std::snprintf(out, sizeof(out), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return out;
}

inline std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Written next to every produced file as <out>.manifest.json: enough to
// rerun the command and byte-identical outputs aside, the timestamp.
inline void write_manifest(const std::string& primary_out, const std::string& command,
                           std::uint64_t seed, const std::map<std::string, std::string>& options,
                           const std::vector<std::string>& inputs,
                           const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = std::string(kVersion);
  j["seed"] = seed;
  nlohmann::json opts = nlohmann::json::object();
  for (const auto& [k, v] : options) opts[k] = v;
  j["options"] = std::move(opts);
  nlohmann::json ins = nlohmann::json::object();
  for (const auto& p : inputs) ins[p] = file_digest(p);
  j["inputs"] = std::move(ins);
  j["outputs"] = outputs;
  j["timestamp"] = iso_timestamp();
  const std::string path = primary_out + ".manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline StopwordList stopwords_or_default(const std::string& path) {
  return path.empty() ? default_stopwords() : StopwordList::load(path);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// CLI11 only reads config files registered on the root app, never on a
// subcommand, so --config is handled by hand: the file's keys are appended to
// the arg list as --key=value tokens before parsing. Keys whose option already
// appears on the command line are dropped (flags > config file > defaults),
// and the expanded tokens go through normal parsing, so validators and
// required-option checks still apply.
inline std::vector<std::string> expand_config_args(const CLI::App& app,
                                                   const std::vector<std::string>& args) {
  if (args.empty()) return args;
  const CLI::App* sub = nullptr;
  for (const CLI::App* s : app.get_subcommands(std::function<bool(const CLI::App*)>{}))
    if (s->get_name() == args[0]) sub = s;
  if (sub == nullptr || sub->get_option_no_throw("--config") == nullptr) return args;

  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::vector<CLI::ConfigItem> items;
  try {
    items = sub->get_config_formatter()->from_file(path);
  } catch (const CLI::FileError&) {
    throw std::runtime_error(path + ": cannot open config file");
  } catch (const CLI::ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }

  const auto on_command_line = [&](const std::string& flag) {
    const std::string with_eq = flag + "=";
    for (std::size_t i = 1; i < args.size(); ++i)
      if (args[i] == flag || args[i].rfind(with_eq, 0) == 0) return true;
    return false;
  };

  std::vector<std::string> out = args;
  for (const auto& item : items) {
    if (!item.parents.empty()) {
      // the parser marks "[section]" open/close with pseudo-items named ++/--
      const std::string what = (item.name == "++" || item.name == "--")
                                   ? "section '[" + item.parents.front() + "]'"
                                   : "key '" + item.fullname() + "'";
      throw UsageError(path + ": config keys must be flat (got " + what + ")");
    }
    const std::string flag = "--" + item.name;
    if (sub->get_option_no_throw(flag) == nullptr)
      throw UsageError(path + ": unknown config key '" + item.name + "'");
    if (on_command_line(flag)) continue;
    if (item.inputs.empty()) out.push_back(flag);
    for (const auto& value : item.inputs) out.push_back(flag + "=" + value);
  }
  return out;
}

}  // namespace detail

// Entry point used by the modeda binary and by tests (in-process). args is
// argv without the program name. Exit codes: 0 success, 1 usage error,
// 2 data/processing error.
inline int run(const std::vector<std::string>& args) {
  CLI::App app{"mod-eda: sentiment-aware text augmentation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // ---- augment ----
  struct {
    std::string corpus, format = "tsv", out, mode = "mod_eda";
    std::string vectors, lexicon, synonyms, stopwords;
    bool keep_stopwords = false;
    std::size_t t = 5, n_aug = 9, workers = 1, top_m = 100;
    std::optional<std::int64_t> n_sub, n_ins, n_swap;
    double p_del = 0.1;
    std::uint64_t seed = 0;
  } aug;
  {
    auto* sub = app.add_subcommand("augment", "augment a labeled corpus");
    sub->add_option("--config", "flat key=value config file; command-line flags win");
    sub->add_option("--corpus", aug.corpus, "input corpus path")->required();
    sub->add_option("--format", aug.format, "corpus format")
        ->check(CLI::IsMember({"tsv", "jsonl"}));
    sub->add_option("--out", aug.out, "output jsonl path")->required();
    sub->add_option("--mode", aug.mode, "augmentation mode")
        ->check(CLI::IsMember({"none", "eda", "mod_eda"}));
    sub->add_option("--vectors", aug.vectors, "word vector file (mod_eda)");
    sub->add_option("--lexicon", aug.lexicon, "sentiment lexicon file (mod_eda)");
    sub->add_option("--synonyms", aug.synonyms, "synonym tsv (eda)");
    sub->add_option("--stopwords", aug.stopwords, "stopword file (default: builtin english)");
    sub->add_flag("--keep-stopwords", aug.keep_stopwords, "do not drop stopwords");
    sub->add_option("--t", aug.t, "neighbor/seed count");
    sub->add_option("--n-aug", aug.n_aug, "variants per document");
    sub->add_option("--n-sub", aug.n_sub, "substitutions per variant (default: 10% of length)");
    sub->add_option("--n-ins", aug.n_ins, "insertions per variant (default: 10% of length)");
    sub->add_option("--n-swap", aug.n_swap, "swaps per variant (default: 10% of length)");
    sub->add_option("--p-del", aug.p_del, "per-token deletion probability");
    sub->add_option("--top-m", aug.top_m, "class keyword list size");
    sub->add_option("--seed", aug.seed, "rng seed");
    sub->add_option("--workers", aug.workers, "augmentation worker threads");
    sub->callback([&aug] {
      AugmentationConfig cfg;
      cfg.mode = parse_aug_mode(aug.mode);
      cfg.t = aug.t;
      cfg.n_aug = aug.n_aug;
      cfg.p_del = aug.p_del;
      cfg.seed = aug.seed;
      auto to_count = [](const std::optional<std::int64_t>& v) -> std::optional<std::size_t> {
        if (!v) return std::nullopt;
        if (*v < 0) throw UsageError("edit counts must be non-negative");
        return static_cast<std::size_t>(*v);
      };
      cfg.n_sub = to_count(aug.n_sub);
      cfg.n_ins = to_count(aug.n_ins);
      cfg.n_swap = to_count(aug.n_swap);
      try {
        cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (cfg.mode == AugMode::mod_eda && (aug.vectors.empty() || aug.lexicon.empty()))
        throw UsageError("mod_eda requires --vectors and --lexicon");
      if (cfg.mode == AugMode::eda && aug.synonyms.empty())
        throw UsageError("eda requires --synonyms");

      StopwordList stopwords = detail::stopwords_or_default(aug.stopwords);
      Corpus corpus =
          load_corpus(aug.corpus, parse_corpus_format(aug.format), stopwords, !aug.keep_stopwords);

      std::optional<EmbeddingStore> store;
      std::optional<SentimentLexicon> lexicon;
      std::optional<ClassKeywordTable> table;
      std::optional<SynonymMap> synonyms;
      AugmentResources res;
      std::vector<std::string> inputs{aug.corpus};
      if (cfg.mode == AugMode::mod_eda) {
        store = EmbeddingStore::load(aug.vectors);
        res.store = &*store;
        lexicon = SentimentLexicon::load(aug.lexicon);
        res.lexicon = &*lexicon;
        inputs.push_back(aug.vectors);
        inputs.push_back(aug.lexicon);
        if (!cfg.n_ins || *cfg.n_ins > 0) {
          table = build_class_keywords(corpus, stopwords, aug.top_m);
          res.keywords = &*table;
        }
      } else if (cfg.mode == AugMode::eda) {
        synonyms = load_synonyms(aug.synonyms);
        res.synonyms = &*synonyms;
        inputs.push_back(aug.synonyms);
      }
      if (!aug.stopwords.empty()) inputs.push_back(aug.stopwords);

      AugmentOutput out = augment_corpus(corpus, cfg, res, aug.workers);
      save_augmented_jsonl(out, aug.out);
      std::map<std::string, std::string> options{
          {"mode", aug.mode},
          {"format", aug.format},
          {"t", std::to_string(cfg.t)},
          {"n_aug", std::to_string(cfg.n_aug)},
          {"n_sub", cfg.n_sub ? std::to_string(*cfg.n_sub) : "auto"},
          {"n_ins", cfg.n_ins ? std::to_string(*cfg.n_ins) : "auto"},
          {"n_swap", cfg.n_swap ? std::to_string(*cfg.n_swap) : "auto"},
          {"p_del", detail::fmt_double(cfg.p_del)},
          {"top_m", std::to_string(aug.top_m)},
          {"keep_stopwords", aug.keep_stopwords ? "true" : "false"},
          {"workers", std::to_string(aug.workers)}};
      detail::write_manifest(aug.out, "augment", cfg.seed, options, inputs, {aug.out});
      std::cout << "augmented " << corpus.size() << " documents -> "
                << out.corpus.size() << " records: " << aug.out << "\n";
    });
  }

  // ---- train-embeddings ----
  struct {
    std::string corpus, format = "tsv", out, stopwords;
    bool keep_stopwords = false;
    EmbedTrainConfig cfg;
  } emb;
  {
    auto* sub = app.add_subcommand("train-embeddings", "train glove vectors on a corpus");
    sub->add_option("--config", "flat key=value config file; command-line flags win");
    sub->add_option("--corpus", emb.corpus, "input corpus path")->required();
    sub->add_option("--format", emb.format, "corpus format")
        ->check(CLI::IsMember({"tsv", "jsonl"}));
    sub->add_option("--out", emb.out, "output vector file")->required();
    sub->add_option("--stopwords", emb.stopwords, "stopword file (default: builtin english)");
    sub->add_flag("--keep-stopwords", emb.keep_stopwords, "do not drop stopwords");
    sub->add_option("--dim", emb.cfg.dim, "vector dimension");
    sub->add_option("--window", emb.cfg.window, "co-occurrence window");
    sub->add_option("--x-max", emb.cfg.x_max, "weighting cap");
    sub->add_option("--alpha", emb.cfg.alpha, "weighting exponent");
    sub->add_option("--epochs", emb.cfg.epochs, "training epochs");
    sub->add_option("--lr", emb.cfg.learning_rate, "initial learning rate");
    sub->add_option("--min-count", emb.cfg.min_count, "vocabulary frequency floor");
    sub->add_option("--seed", emb.cfg.seed, "rng seed");
    sub->callback([&emb] {
      try {
        emb.cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      StopwordList stopwords = detail::stopwords_or_default(emb.stopwords);
      Corpus corpus = load_corpus(emb.corpus, parse_corpus_format(emb.format), stopwords,
                                  !emb.keep_stopwords);
      EmbedTrainResult result = train_embeddings(corpus, emb.cfg);
      result.store.save(emb.out);
      std::vector<std::string> inputs{emb.corpus};
      if (!emb.stopwords.empty()) inputs.push_back(emb.stopwords);
      std::map<std::string, std::string> options{
          {"format", emb.format},
          {"dim", std::to_string(emb.cfg.dim)},
          {"window", std::to_string(emb.cfg.window)},
          {"x_max", detail::fmt_double(emb.cfg.x_max)},
          {"alpha", detail::fmt_double(emb.cfg.alpha)},
          {"epochs", std::to_string(emb.cfg.epochs)},
          {"lr", detail::fmt_double(emb.cfg.learning_rate)},
          {"min_count", std::to_string(emb.cfg.min_count)},
          {"keep_stopwords", emb.keep_stopwords ? "true" : "false"}};
      detail::write_manifest(emb.out, "train-embeddings", emb.cfg.seed, options, inputs,
                             {emb.out});
      std::cout << "trained " << result.store.dim() << "-dim vectors for "
                << result.store.size() << " words, final epoch loss "
                << detail::fmt_double(result.epoch_loss.back()) << ": " << emb.out << "\n";
    });
  }

  // ---- neighbors ----
  struct {
    std::string word, vectors;
    std::size_t topn = 10;
  } nb;
  {
    auto* sub = app.add_subcommand("neighbors", "nearest neighbors of a word");
    sub->add_option("word", nb.word, "query word")->required();
    sub->add_option("--vectors", nb.vectors, "word vector file")->required();
    sub->add_option("--topn", nb.topn, "neighbor count");
    sub->callback([&nb] {
      EmbeddingStore store = EmbeddingStore::load(nb.vectors);
      NeighborList list = most_similar(store, nb.word, nb.topn);
      for (const auto& [word, sim] : list.neighbors) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), " %.6f", sim);
        std::cout << word << buf << "\n";
      }
    });
  }

  // ---- sentiment ----
  struct {
    std::string text, lexicon;
  } sent;
  {
    auto* sub = app.add_subcommand("sentiment", "lexicon polarity of a text");
    sub->add_option("text", sent.text, "input text")->required();
    sub->add_option("--lexicon", sent.lexicon, "sentiment lexicon file")->required();
    sub->callback([&sent] {
      SentimentLexicon lexicon = SentimentLexicon::load(sent.lexicon);
      Polarity p = sentence_polarity(lexicon, tokenize(clean_text(sent.text)));
      std::cout << detail::fmt_double(p) << "\n";
    });
  }

  // ---- keywords ----
  struct {
    std::string corpus, format = "tsv", out, stopwords;
    bool keep_stopwords = false;
    std::size_t top_m = 100;
  } kw;
  {
    auto* sub = app.add_subcommand("keywords", "per-class frequent keywords");
    sub->add_option("--config", "flat key=value config file; command-line flags win");
    sub->add_option("--corpus", kw.corpus, "input corpus path")->required();
    sub->add_option("--format", kw.format, "corpus format")
        ->check(CLI::IsMember({"tsv", "jsonl"}));
    sub->add_option("--out", kw.out, "output json path (default: stdout)");
    sub->add_option("--stopwords", kw.stopwords, "stopword file (default: builtin english)");
    sub->add_flag("--keep-stopwords", kw.keep_stopwords, "do not drop stopwords");
    sub->add_option("--top-m", kw.top_m, "keywords per class");
    sub->callback([&kw] {
      StopwordList stopwords = detail::stopwords_or_default(kw.stopwords);
      Corpus corpus =
          load_corpus(kw.corpus, parse_corpus_format(kw.format), stopwords, !kw.keep_stopwords);
      ClassKeywordTable table = build_class_keywords(corpus, stopwords, kw.top_m);
      const std::string text = table.to_json().dump(2) + "\n";
      if (kw.out.empty()) {
        std::cout << text;
      } else {
        detail::write_text(kw.out, text);
        std::vector<std::string> inputs{kw.corpus};
        if (!kw.stopwords.empty()) inputs.push_back(kw.stopwords);
        detail::write_manifest(kw.out, "keywords", 0,
                               {{"format", kw.format},
                                {"top_m", std::to_string(kw.top_m)},
                                {"keep_stopwords", kw.keep_stopwords ? "true" : "false"}},
                               inputs, {kw.out});
        std::cout << "wrote keyword table for " << table.size() << " classes: " << kw.out
                  << "\n";
      }
    });
  }

  // ---- train ----
  struct {
    std::string corpus, format = "tsv", out, vectors, stopwords, features = "avg_embedding";
    bool keep_stopwords = false;
    TrainConfig cfg;
  } tr;
  {
    auto* sub = app.add_subcommand("train", "train the linear classifier");
    sub->add_option("--config", "flat key=value config file; command-line flags win");
    sub->add_option("--corpus", tr.corpus, "training corpus path")->required();
    sub->add_option("--format", tr.format, "corpus format")
        ->check(CLI::IsMember({"tsv", "jsonl"}));
    sub->add_option("--out", tr.out, "output model json")->required();
    sub->add_option("--vectors", tr.vectors, "word vector file (avg_embedding features)");
    sub->add_option("--features", tr.features, "feature mode")
        ->check(CLI::IsMember({"avg_embedding", "bow"}));
    sub->add_option("--stopwords", tr.stopwords, "stopword file (default: builtin english)");
    sub->add_flag("--keep-stopwords", tr.keep_stopwords, "do not drop stopwords");
    sub->add_option("--lr", tr.cfg.learning_rate, "learning rate");
    sub->add_option("--epochs", tr.cfg.epochs, "training epochs");
    sub->add_option("--l2", tr.cfg.l2, "l2 penalty");
    sub->add_option("--batch-size", tr.cfg.batch_size, "minibatch size");
    sub->add_option("--seed", tr.cfg.seed, "rng seed");
    sub->callback([&tr] {
      try {
        tr.cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      FeatureMode mode = parse_feature_mode(tr.features);
      if (mode == FeatureMode::avg_embedding && tr.vectors.empty())
        throw UsageError("avg_embedding features require --vectors");
      StopwordList stopwords = detail::stopwords_or_default(tr.stopwords);
      Corpus corpus =
          load_corpus(tr.corpus, parse_corpus_format(tr.format), stopwords, !tr.keep_stopwords);
      std::optional<EmbeddingStore> store;
      if (!tr.vectors.empty()) store = EmbeddingStore::load(tr.vectors);
      FitResult fit =
          train_classifier(corpus, store ? &*store : nullptr, mode, tr.cfg);
      save_model(fit.model, tr.out);
      std::vector<std::string> inputs{tr.corpus};
      if (!tr.vectors.empty()) inputs.push_back(tr.vectors);
      if (!tr.stopwords.empty()) inputs.push_back(tr.stopwords);
      std::map<std::string, std::string> options{
          {"format", tr.format},
          {"features", tr.features},
          {"lr", detail::fmt_double(tr.cfg.learning_rate)},
          {"epochs", std::to_string(tr.cfg.epochs)},
          {"l2", detail::fmt_double(tr.cfg.l2)},
          {"batch_size", std::to_string(tr.cfg.batch_size)},
          {"keep_stopwords", tr.keep_stopwords ? "true" : "false"}};
      detail::write_manifest(tr.out, "train", tr.cfg.seed, options, inputs, {tr.out});
      std::cout << "trained " << fit.model.class_count() << "-class model (dim "
                << fit.model.dim() << "), final loss "
                << detail::fmt_double(fit.epoch_loss.back()) << ": " << tr.out << "\n";
    });
  }

  // ---- evaluate ----
  struct {
    std::string corpus, format = "tsv", model, out, vectors, stopwords,
                features = "avg_embedding";
    bool keep_stopwords = false;
    std::size_t kfold = 0;
    TrainConfig cfg;
  } ev;
  {
    auto* sub = app.add_subcommand("evaluate", "score a model or cross-validate");
    sub->add_option("--config", "flat key=value config file; command-line flags win");
    sub->add_option("--corpus", ev.corpus, "evaluation corpus path")->required();
    sub->add_option("--format", ev.format, "corpus format")
        ->check(CLI::IsMember({"tsv", "jsonl"}));
    sub->add_option("--model", ev.model, "model json to score");
    sub->add_option("--kfold", ev.kfold, "cross-validate with k folds instead");
    sub->add_option("--out", ev.out, "output json path (default: stdout)");
    sub->add_option("--vectors", ev.vectors, "word vector file (avg_embedding features)");
    sub->add_option("--features", ev.features, "feature mode (kfold)")
        ->check(CLI::IsMember({"avg_embedding", "bow"}));
    sub->add_option("--stopwords", ev.stopwords, "stopword file (default: builtin english)");
    sub->add_flag("--keep-stopwords", ev.keep_stopwords, "do not drop stopwords");
    sub->add_option("--lr", ev.cfg.learning_rate, "learning rate (kfold)");
    sub->add_option("--epochs", ev.cfg.epochs, "training epochs (kfold)");
    sub->add_option("--l2", ev.cfg.l2, "l2 penalty (kfold)");
    sub->add_option("--batch-size", ev.cfg.batch_size, "minibatch size (kfold)");
    sub->add_option("--seed", ev.cfg.seed, "rng seed (kfold)");
    sub->callback([&ev] {
      if (ev.model.empty() == (ev.kfold == 0))
        throw UsageError("evaluate needs exactly one of --model or --kfold");
      StopwordList stopwords = detail::stopwords_or_default(ev.stopwords);
      Corpus corpus =
          load_corpus(ev.corpus, parse_corpus_format(ev.format), stopwords, !ev.keep_stopwords);
      std::optional<EmbeddingStore> store;
      if (!ev.vectors.empty()) store = EmbeddingStore::load(ev.vectors);
      nlohmann::json out_json;
      if (!ev.model.empty()) {
        LinearModel model = load_model(ev.model);
        if (model.feature_spec.mode == FeatureMode::avg_embedding && !store)
          throw UsageError("model uses avg_embedding features: --vectors is required");
        EvalResult result = evaluate_model(model, corpus, store ? &*store : nullptr);
        nlohmann::json confusion = nlohmann::json::array();
        const std::size_t k = result.confusion.classes.size();
        for (std::size_t g = 0; g < k; ++g) {
          nlohmann::json row = nlohmann::json::array();
          for (std::size_t p = 0; p < k; ++p) row.push_back(result.confusion.at(g, p));
          confusion.push_back(std::move(row));
        }
        out_json = {{"classes", result.confusion.classes},
                    {"confusion", confusion},
                    {"metrics", metrics_to_json(result.metrics)}};
      } else {
        try {
          ev.cfg.validate();
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        FeatureMode mode = parse_feature_mode(ev.features);
        if (mode == FeatureMode::avg_embedding && !store)
          throw UsageError("avg_embedding features require --vectors");
        KFoldResult result =
            kfold_evaluate(corpus, store ? &*store : nullptr, mode, ev.cfg, ev.kfold,
                           ev.cfg.seed);
        nlohmann::json folds = nlohmann::json::array();
        for (const auto& m : result.folds) folds.push_back(metrics_to_json(m));
        out_json = {{"k", ev.kfold},
                    {"folds", folds},
                    {"mean_macro_f1", result.mean_macro_f1},
                    {"mean_accuracy", result.mean_accuracy}};
      }
      const std::string text = out_json.dump(2) + "\n";
      if (ev.out.empty()) {
        std::cout << text;
      } else {
        detail::write_text(ev.out, text);
        std::vector<std::string> inputs{ev.corpus};
        if (!ev.model.empty()) inputs.push_back(ev.model);
        if (!ev.vectors.empty()) inputs.push_back(ev.vectors);
        if (!ev.stopwords.empty()) inputs.push_back(ev.stopwords);
        detail::write_manifest(ev.out, "evaluate", ev.cfg.seed,
                               {{"format", ev.format},
                                {"model", ev.model.empty() ? "-" : ev.model},
                                {"kfold", std::to_string(ev.kfold)},
                                {"features", ev.features},
                                {"keep_stopwords", ev.keep_stopwords ? "true" : "false"}},
                               inputs, {ev.out});
        std::cout << "wrote evaluation: " << ev.out << "\n";
      }
    });
  }

  // ---- compare ----
  struct {
    std::string corpus, format = "tsv", heldout, out, vectors, lexicon, synonyms, stopwords;
    std::string split = "strict", features = "avg_embedding";
    bool keep_stopwords = false;
    std::vector<std::string> modes{"none", "eda", "mod_eda"};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::size_t t = 5, n_aug = 9, workers = 1, top_m = 100;
    std::optional<std::int64_t> n_sub, n_ins, n_swap;
    double p_del = 0.1;
    TrainConfig cfg;
  } cp;
  {
    auto* sub = app.add_subcommand("compare", "none/eda/mod_eda comparison protocol");
    sub->add_option("--config", "flat key=value config file; command-line flags win");
    sub->add_option("--corpus", cp.corpus, "corpus path")->required();
    sub->add_option("--format", cp.format, "corpus format")
        ->check(CLI::IsMember({"tsv", "jsonl"}));
    sub->add_option("--heldout", cp.heldout,
                    "external heldout corpus (same format); otherwise 10% is held out");
    sub->add_option("--out", cp.out, "output prefix (.json/.csv/.txt)");
    sub->add_option("--vectors", cp.vectors, "word vector file");
    sub->add_option("--lexicon", cp.lexicon, "sentiment lexicon (mod_eda)");
    sub->add_option("--synonyms", cp.synonyms, "synonym tsv (eda)");
    sub->add_option("--stopwords", cp.stopwords, "stopword file (default: builtin english)");
    sub->add_flag("--keep-stopwords", cp.keep_stopwords, "do not drop stopwords");
    sub->add_option("--modes", cp.modes, "augmentation modes to compare")->delimiter(',');
    sub->add_option("--seeds", cp.seeds, "random seeds to average over")->delimiter(',');
    sub->add_option("--split", cp.split, "augmentation split flavor")
        ->check(CLI::IsMember({"strict", "paper"}));
    sub->add_option("--features", cp.features, "feature mode")
        ->check(CLI::IsMember({"avg_embedding", "bow"}));
    sub->add_option("--t", cp.t, "neighbor/seed count");
    sub->add_option("--n-aug", cp.n_aug, "variants per document");
    sub->add_option("--n-sub", cp.n_sub, "substitutions per variant (default: 10% of length)");
    sub->add_option("--n-ins", cp.n_ins, "insertions per variant (default: 10% of length)");
    sub->add_option("--n-swap", cp.n_swap, "swaps per variant (default: 10% of length)");
    sub->add_option("--p-del", cp.p_del, "per-token deletion probability");
    sub->add_option("--top-m", cp.top_m, "class keyword list size");
    sub->add_option("--lr", cp.cfg.learning_rate, "classifier learning rate");
    sub->add_option("--epochs", cp.cfg.epochs, "classifier epochs");
    sub->add_option("--l2", cp.cfg.l2, "classifier l2 penalty");
    sub->add_option("--batch-size", cp.cfg.batch_size, "classifier minibatch size");
    sub->add_option("--workers", cp.workers, "augmentation worker threads");
    sub->callback([&cp] {
      CompareConfig config;
      config.modes.clear();
      for (const auto& m : cp.modes) config.modes.push_back(parse_aug_mode(m));
      config.seeds = cp.seeds;
      config.split = parse_split_flavor(cp.split);
      config.features = parse_feature_mode(cp.features);
      config.workers = cp.workers;
      config.train = cp.cfg;
      config.aug.t = cp.t;
      config.aug.n_aug = cp.n_aug;
      config.aug.p_del = cp.p_del;
      auto to_count = [](const std::optional<std::int64_t>& v) -> std::optional<std::size_t> {
        if (!v) return std::nullopt;
        if (*v < 0) throw UsageError("edit counts must be non-negative");
        return static_cast<std::size_t>(*v);
      };
      config.aug.n_sub = to_count(cp.n_sub);
      config.aug.n_ins = to_count(cp.n_ins);
      config.aug.n_swap = to_count(cp.n_swap);
      try {
        config.aug.validate();
        config.train.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const bool wants_mod = std::count(config.modes.begin(), config.modes.end(),
                                        AugMode::mod_eda) > 0;
      const bool wants_eda =
          std::count(config.modes.begin(), config.modes.end(), AugMode::eda) > 0;
      if ((wants_mod || config.features == FeatureMode::avg_embedding) && cp.vectors.empty())
        throw UsageError("--vectors is required for mod_eda or avg_embedding features");
      if (wants_mod && cp.lexicon.empty()) throw UsageError("mod_eda requires --lexicon");
      if (wants_eda && cp.synonyms.empty()) throw UsageError("eda requires --synonyms");

      StopwordList stopwords = detail::stopwords_or_default(cp.stopwords);
      CorpusFormat format = parse_corpus_format(cp.format);
      Corpus corpus = load_corpus(cp.corpus, format, stopwords, !cp.keep_stopwords);
      std::optional<Corpus> heldout;
      if (!cp.heldout.empty())
        heldout = load_corpus(cp.heldout, format, stopwords, !cp.keep_stopwords);

      std::optional<EmbeddingStore> store;
      std::optional<SentimentLexicon> lexicon;
      std::optional<ClassKeywordTable> table;
      std::optional<SynonymMap> synonyms;
      AugmentResources res;
      if (!cp.vectors.empty()) {
        store = EmbeddingStore::load(cp.vectors);
        res.store = &*store;
      }
      if (wants_mod) {
        lexicon = SentimentLexicon::load(cp.lexicon);
        res.lexicon = &*lexicon;
        table = build_class_keywords(corpus, stopwords, cp.top_m);
        res.keywords = &*table;
      }
      if (wants_eda) {
        synonyms = load_synonyms(cp.synonyms);
        res.synonyms = &*synonyms;
      }

      ComparisonReport report =
          compare_augmenters(corpus, res, config, heldout ? &*heldout : nullptr);
      std::cout << report_to_table(report);
      if (!cp.out.empty()) {
        detail::write_text(cp.out + ".json", report_to_json(report).dump(2) + "\n");
        detail::write_text(cp.out + ".csv", runs_to_csv(report));
        detail::write_text(cp.out + ".txt", report_to_table(report));
        std::vector<std::string> inputs{cp.corpus};
        if (!cp.heldout.empty()) inputs.push_back(cp.heldout);
        if (!cp.vectors.empty()) inputs.push_back(cp.vectors);
        if (wants_mod) inputs.push_back(cp.lexicon);
        if (wants_eda) inputs.push_back(cp.synonyms);
        if (!cp.stopwords.empty()) inputs.push_back(cp.stopwords);
        std::string modes_str, seeds_str;
        for (const auto& m : cp.modes) modes_str += (modes_str.empty() ? "" : ",") + m;
        for (auto s : cp.seeds)
          seeds_str += (seeds_str.empty() ? "" : ",") + std::to_string(s);
        std::map<std::string, std::string> options{
            {"format", cp.format},
            {"modes", modes_str},
            {"seeds", seeds_str},
            {"split", cp.split},
            {"features", cp.features},
            {"t", std::to_string(cp.t)},
            {"n_aug", std::to_string(cp.n_aug)},
            {"n_sub", config.aug.n_sub ? std::to_string(*config.aug.n_sub) : "auto"},
            {"n_ins", config.aug.n_ins ? std::to_string(*config.aug.n_ins) : "auto"},
            {"n_swap", config.aug.n_swap ? std::to_string(*config.aug.n_swap) : "auto"},
            {"p_del", detail::fmt_double(cp.p_del)},
            {"top_m", std::to_string(cp.top_m)},
            {"lr", detail::fmt_double(cp.cfg.learning_rate)},
            {"epochs", std::to_string(cp.cfg.epochs)},
            {"l2", detail::fmt_double(cp.cfg.l2)},
            {"batch_size", std::to_string(cp.cfg.batch_size)},
            {"keep_stopwords", cp.keep_stopwords ? "true" : "false"},
            {"workers", std::to_string(cp.workers)}};
        detail::write_manifest(cp.out + ".json", "compare", 0, options, inputs,
                               {cp.out + ".json", cp.out + ".csv", cp.out + ".txt"});
        std::cout << "wrote " << cp.out << ".json / .csv / .txt\n";
      }
    });
  }

  try {
    const std::vector<std::string> expanded = detail::expand_config_args(app, args);
    std::vector<const char*> argv;
    argv.reserve(expanded.size() + 1);
    argv.push_back("modeda");
    for (const auto& a : expanded) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace modeda::cli
