#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "modeda/augment.hpp"
#include "modeda/classify.hpp"
#include "modeda/corpus.hpp"
#include "modeda/rng.hpp"

namespace modeda {

struct ConfusionMatrix {
  std::vector<std::string> classes;  // sorted asc
  std::vector<std::int64_t> counts;  // rows = gold, cols = predicted

  std::int64_t at(std::size_t gold, std::size_t pred) const {
    return counts[gold * classes.size() + pred];
  }
  std::int64_t& at(std::size_t gold, std::size_t pred) {
    return counts[gold * classes.size() + pred];
  }
  std::int64_t total() const {
    std::int64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
};

inline ConfusionMatrix make_confusion(const std::vector<std::string>& golds,
                                      const std::vector<std::string>& preds) {
  if (golds.empty() || golds.size() != preds.size())
    throw std::invalid_argument("make_confusion: gold/pred lists must be equal and non-empty");
  std::set<std::string> classes(golds.begin(), golds.end());
  classes.insert(preds.begin(), preds.end());
  ConfusionMatrix cm;
  cm.classes.assign(classes.begin(), classes.end());
  cm.counts.assign(cm.classes.size() * cm.classes.size(), 0);
  auto index = [&cm](const std::string& label) {
    return static_cast<std::size_t>(
        std::lower_bound(cm.classes.begin(), cm.classes.end(), label) - cm.classes.begin());
  };
  for (std::size_t i = 0; i < golds.size(); ++i) ++cm.at(index(golds[i]), index(preds[i]));
  return cm;
}

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  bool precision_defined = true;  // false when the 0/0 -> 0 convention applied
  bool recall_defined = true;
};

struct MetricsReport {
  std::vector<std::string> classes;
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0;
  double macro_recall = 0;
  double macro_f1 = 0;
  double accuracy = 0;
};

inline MetricsReport metrics_from_confusion(const ConfusionMatrix& cm) {
  MetricsReport r;
  r.classes = cm.classes;
  const std::size_t k = cm.classes.size();
  std::int64_t correct = 0;
  for (std::size_t g = 0; g < k; ++g) correct += cm.at(g, g);
  const std::int64_t total = cm.total();
  if (total == 0) throw std::invalid_argument("metrics_from_confusion: empty matrix");
  r.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  for (std::size_t c = 0; c < k; ++c) {
    std::int64_t tp = cm.at(c, c), row = 0, col = 0;
    for (std::size_t i = 0; i < k; ++i) {
      row += cm.at(c, i);
      col += cm.at(i, c);
    }
    ClassMetrics m;
    if (col > 0)
      m.precision = static_cast<double>(tp) / static_cast<double>(col);
    else
      m.precision_defined = false;
    if (row > 0)
      m.recall = static_cast<double>(tp) / static_cast<double>(row);
    else
      m.recall_defined = false;
    m.f1 = (m.precision + m.recall) > 0
               ? 2 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    r.per_class.push_back(m);
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
  }
  r.macro_precision /= static_cast<double>(k);
  r.macro_recall /= static_cast<double>(k);
  r.macro_f1 /= static_cast<double>(k);
  return r;
}

// Micro-averaged F1. With one prediction per item every false positive is
// some other class's false negative, so this always equals accuracy.
inline double micro_f1(const ConfusionMatrix& cm) {
  const std::size_t k = cm.classes.size();
  std::int64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t g = 0; g < k; ++g)
    for (std::size_t p = 0; p < k; ++p) {
      if (g == p)
        tp += cm.at(g, p);
      else {
        fn += cm.at(g, p);
        fp += cm.at(g, p);
      }
    }
  const double denom = static_cast<double>(2 * tp + fp + fn);
  if (denom == 0) throw std::invalid_argument("micro_f1: empty matrix");
  return 2.0 * static_cast<double>(tp) / denom;
}

inline MetricsReport score(const std::vector<std::string>& golds,
                           const std::vector<std::string>& preds) {
  return metrics_from_confusion(make_confusion(golds, preds));
}

inline Corpus subcorpus(const Corpus& corpus, const std::vector<std::string>& ids) {
  std::map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i)
    where.emplace(corpus.documents[i].id, i);
  Corpus out;
  for (const auto& id : ids) {
    auto it = where.find(id);
    if (it == where.end()) throw std::invalid_argument("subcorpus: unknown document id: " + id);
    out.add(corpus.documents[it->second]);
  }
  return out;
}

struct EvalResult {
  ConfusionMatrix confusion;
  MetricsReport metrics;
};

inline EvalResult evaluate_model(const LinearModel& model, const Corpus& corpus,
                                 const EmbeddingStore* store) {
  std::vector<std::string> golds, preds;
  golds.reserve(corpus.documents.size());
  preds.reserve(corpus.documents.size());
  for (const auto& d : corpus.documents) {
    if (!d.labeled())
      throw std::invalid_argument("evaluate_model: unlabeled document: " + d.id);
    golds.push_back(d.label);
    preds.push_back(predict(model, featurize(d.tokens, model.feature_spec, store)).label);
  }
  EvalResult r;
  r.confusion = make_confusion(golds, preds);
  r.metrics = metrics_from_confusion(r.confusion);
  return r;
}

struct FoldPlan {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
};

// Shuffles ids with the seed, then deals k contiguous folds whose sizes
// differ by at most one. Folds partition the corpus exactly.
inline std::vector<FoldPlan> kfold(const Corpus& corpus, std::size_t k, std::uint64_t seed) {
  const std::size_t n = corpus.documents.size();
  if (k < 2) throw std::invalid_argument("kfold: k must be at least 2");
  if (k > n) throw std::invalid_argument("kfold: k exceeds corpus size");
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const auto& d : corpus.documents) ids.push_back(d.id);
  Rng rng(seed);
  rng.shuffle(ids);
  std::vector<FoldPlan> plans(k);
  const std::size_t base = n / k, rem = n % k;
  std::size_t at = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = base + (f < rem ? 1 : 0);
    plans[f].test_ids.assign(ids.begin() + at, ids.begin() + at + len);
    at += len;
  }
  for (std::size_t f = 0; f < k; ++f)
    for (std::size_t g = 0; g < k; ++g)
      if (g != f)
        plans[f].train_ids.insert(plans[f].train_ids.end(), plans[g].test_ids.begin(),
                                  plans[g].test_ids.end());
  return plans;
}

struct KFoldResult {
  std::vector<MetricsReport> folds;
  double mean_macro_f1 = 0;
  double mean_accuracy = 0;
};

inline KFoldResult kfold_evaluate(const Corpus& corpus, const EmbeddingStore* store,
                                  FeatureMode features, const TrainConfig& config, std::size_t k,
                                  std::uint64_t seed) {
  KFoldResult out;
  for (const auto& plan : kfold(corpus, k, seed)) {
    FitResult fit = train_classifier(subcorpus(corpus, plan.train_ids), store, features, config);
    MetricsReport m = evaluate_model(fit.model, subcorpus(corpus, plan.test_ids), store).metrics;
    out.mean_macro_f1 += m.macro_f1;
    out.mean_accuracy += m.accuracy;
    out.folds.push_back(std::move(m));
  }
  out.mean_macro_f1 /= static_cast<double>(out.folds.size());
  out.mean_accuracy /= static_cast<double>(out.folds.size());
  return out;
}

// Protocol split: hold out 10% for the final test, then split the rest
// 80/20 into train and validation. Sizes use integer division; every id
// lands in exactly one part.
struct SplitPlan {
  std::vector<std::string> train_ids;
  std::vector<std::string> validation_ids;
  std::vector<std::string> heldout_ids;
};

inline SplitPlan paper_protocol_split(const Corpus& corpus, std::uint64_t seed) {
  const std::size_t n = corpus.documents.size();
  if (n < 10) throw std::invalid_argument("paper_protocol_split: need at least 10 documents");
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const auto& d : corpus.documents) ids.push_back(d.id);
  Rng rng(seed);
  rng.shuffle(ids);
  SplitPlan plan;
  const std::size_t n_held = n / 10;
  const std::size_t n_block = n - n_held;
  const std::size_t n_val = n_block / 5;
  plan.heldout_ids.assign(ids.begin(), ids.begin() + n_held);
  plan.train_ids.assign(ids.begin() + n_held, ids.begin() + n_held + (n_block - n_val));
  plan.validation_ids.assign(ids.begin() + n_held + (n_block - n_val), ids.end());
  return plan;
}

// strict: only the train slice is augmented, validation stays original.
// paper: train+validation are augmented together, the pool is reshuffled and
// re-split 80/20 -- reproducing the validation inflation that protocol
// causes. Heldout documents are never augmented under either flavor.
enum class SplitFlavor { strict, paper };

inline SplitFlavor parse_split_flavor(std::string_view s) {
  if (s == "strict") return SplitFlavor::strict;
  if (s == "paper") return SplitFlavor::paper;
  throw std::invalid_argument("unknown split flavor: " + std::string(s));
}

inline const char* to_string(SplitFlavor f) {
  return f == SplitFlavor::strict ? "strict" : "paper";
}

struct CompareConfig {
  std::vector<AugMode> modes{AugMode::none, AugMode::eda, AugMode::mod_eda};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  AugmentationConfig aug;  // mode and seed are overridden per run
  TrainConfig train;       // seed is overridden per run
  FeatureMode features = FeatureMode::avg_embedding;
  SplitFlavor split = SplitFlavor::strict;
  std::size_t workers = 1;
};

struct RunResult {
  AugMode mode = AugMode::none;
  std::uint64_t seed = 0;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
  MetricsReport validation;
  MetricsReport heldout;
};

struct ModeSummary {
  AugMode mode = AugMode::none;
  double val_macro_precision_mean = 0;
  double val_macro_recall_mean = 0;
  double val_macro_f1_mean = 0;
  double val_macro_f1_std = 0;
  double val_accuracy_mean = 0;
  double held_macro_precision_mean = 0;
  double held_macro_recall_mean = 0;
  double held_macro_f1_mean = 0;
  double held_macro_f1_std = 0;
  double held_accuracy_mean = 0;
};

struct PairwiseDelta {
  AugMode a = AugMode::none;
  AugMode b = AugMode::none;
  double heldout_macro_f1 = 0;     // mean_a - mean_b
  double validation_macro_f1 = 0;  // mean_a - mean_b
};

struct ComparisonReport {
  SplitFlavor split = SplitFlavor::strict;
  FeatureMode features = FeatureMode::avg_embedding;
  std::vector<std::uint64_t> seeds;
  std::vector<RunResult> runs;  // exactly |modes| x |seeds|, modes outer
  std::vector<ModeSummary> summaries;
  std::vector<PairwiseDelta> deltas;
};

namespace detail {

inline Corpus corpus_from_documents(const std::vector<Document>& docs,
                                    const std::vector<std::size_t>& order) {
  Corpus out;
  for (std::size_t i : order) out.add(docs[i]);
  return out;
}

inline RunResult compare_one_run(const Corpus& corpus, const AugmentResources& resources,
                                 const CompareConfig& config, AugMode mode, std::uint64_t seed,
                                 const Corpus* external_heldout) {
  std::vector<std::string> ids;
  ids.reserve(corpus.documents.size());
  for (const auto& d : corpus.documents) ids.push_back(d.id);
  Rng rng(seed);
  rng.shuffle(ids);

  std::vector<std::string> block_ids, heldout_ids;
  if (external_heldout != nullptr) {
    block_ids = ids;
  } else {
    const std::size_t n_held = ids.size() / 10;
    if (n_held == 0)
      throw std::invalid_argument("compare: corpus too small to hold out 10%");
    heldout_ids.assign(ids.begin(), ids.begin() + n_held);
    block_ids.assign(ids.begin() + n_held, ids.end());
  }
  const std::size_t n_val = block_ids.size() / 5;
  if (n_val == 0 || n_val == block_ids.size())
    throw std::invalid_argument("compare: corpus too small for an 80/20 split");

  AugmentationConfig aug = config.aug;
  aug.mode = mode;
  aug.seed = seed;
  TrainConfig train = config.train;
  train.seed = seed;

  Corpus train_corpus, val_corpus;
  if (mode == AugMode::none || config.split == SplitFlavor::strict) {
    std::vector<std::string> train_ids(block_ids.begin(), block_ids.end() - n_val);
    std::vector<std::string> val_ids(block_ids.end() - n_val, block_ids.end());
    val_corpus = subcorpus(corpus, val_ids);
    if (mode == AugMode::none)
      train_corpus = subcorpus(corpus, train_ids);
    else
      train_corpus =
          augment_corpus(subcorpus(corpus, train_ids), aug, resources, config.workers).corpus;
  } else {
    AugmentOutput block =
        augment_corpus(subcorpus(corpus, block_ids), aug, resources, config.workers);
    std::vector<std::size_t> order(block.corpus.documents.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng pool_rng(derive_seed(seed, "paper-split"));
    pool_rng.shuffle(order);
    const std::size_t pool_val = order.size() / 5;
    std::vector<std::size_t> train_order(order.begin(), order.end() - pool_val);
    std::vector<std::size_t> val_order(order.end() - pool_val, order.end());
    train_corpus = corpus_from_documents(block.corpus.documents, train_order);
    val_corpus = corpus_from_documents(block.corpus.documents, val_order);
  }

  FitResult fit = train_classifier(train_corpus, resources.store, config.features, train);

  RunResult run;
  run.mode = mode;
  run.seed = seed;
  run.train_size = train_corpus.documents.size();
  run.validation_size = val_corpus.documents.size();
  run.validation = evaluate_model(fit.model, val_corpus, resources.store).metrics;
  const Corpus& heldout =
      external_heldout != nullptr ? *external_heldout : subcorpus(corpus, heldout_ids);
  run.heldout = evaluate_model(fit.model, heldout, resources.store).metrics;
  return run;
}

inline double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace detail

// Runs the full none/eda/mod_eda protocol: |modes| x |seeds| train+evaluate
// runs, per-mode means over seeds, and pairwise mean deltas. With an
// external heldout corpus the whole input corpus is the train+validation
// block; otherwise 10% is held out per seed.
inline ComparisonReport compare_augmenters(const Corpus& corpus,
                                           const AugmentResources& resources,
                                           const CompareConfig& config,
                                           const Corpus* external_heldout = nullptr) {
  if (config.modes.empty()) throw std::invalid_argument("compare: no modes given");
  if (config.seeds.empty()) throw std::invalid_argument("compare: no seeds given");
  ComparisonReport report;
  report.split = config.split;
  report.features = config.features;
  report.seeds = config.seeds;
  for (AugMode mode : config.modes) {
    std::vector<double> vf1, vacc, vp, vr, hf1, hacc, hp, hr;
    for (std::uint64_t seed : config.seeds) {
      RunResult run =
          detail::compare_one_run(corpus, resources, config, mode, seed, external_heldout);
      vf1.push_back(run.validation.macro_f1);
      vacc.push_back(run.validation.accuracy);
      vp.push_back(run.validation.macro_precision);
      vr.push_back(run.validation.macro_recall);
      hf1.push_back(run.heldout.macro_f1);
      hacc.push_back(run.heldout.accuracy);
      hp.push_back(run.heldout.macro_precision);
      hr.push_back(run.heldout.macro_recall);
      report.runs.push_back(std::move(run));
    }
    auto mean = [](const std::vector<double>& xs) {
      double s = 0;
      for (double x : xs) s += x;
      return s / static_cast<double>(xs.size());
    };
    ModeSummary s;
    s.mode = mode;
    s.val_macro_precision_mean = mean(vp);
    s.val_macro_recall_mean = mean(vr);
    s.val_macro_f1_mean = mean(vf1);
    s.val_macro_f1_std = detail::sample_std(vf1, s.val_macro_f1_mean);
    s.val_accuracy_mean = mean(vacc);
    s.held_macro_precision_mean = mean(hp);
    s.held_macro_recall_mean = mean(hr);
    s.held_macro_f1_mean = mean(hf1);
    s.held_macro_f1_std = detail::sample_std(hf1, s.held_macro_f1_mean);
    s.held_accuracy_mean = mean(hacc);
    report.summaries.push_back(s);
  }
  for (std::size_t a = 0; a < report.summaries.size(); ++a)
    for (std::size_t b = a + 1; b < report.summaries.size(); ++b) {
      PairwiseDelta d;
      d.a = report.summaries[a].mode;
      d.b = report.summaries[b].mode;
      d.heldout_macro_f1 =
          report.summaries[a].held_macro_f1_mean - report.summaries[b].held_macro_f1_mean;
      d.validation_macro_f1 =
          report.summaries[a].val_macro_f1_mean - report.summaries[b].val_macro_f1_mean;
      report.deltas.push_back(d);
    }
  return report;
}

inline nlohmann::json metrics_to_json(const MetricsReport& m) {
  nlohmann::json per_class = nlohmann::json::object();
  for (std::size_t i = 0; i < m.classes.size(); ++i) {
    per_class[m.classes[i]] = {{"precision", m.per_class[i].precision},
                               {"recall", m.per_class[i].recall},
                               {"f1", m.per_class[i].f1},
                               {"precision_defined", m.per_class[i].precision_defined},
                               {"recall_defined", m.per_class[i].recall_defined}};
  }
  return {{"accuracy", m.accuracy},
          {"macro_precision", m.macro_precision},
          {"macro_recall", m.macro_recall},
          {"macro_f1", m.macro_f1},
          {"per_class", per_class}};
}

inline nlohmann::json report_to_json(const ComparisonReport& report) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : report.runs)
    runs.push_back({{"mode", to_string(r.mode)},
                    {"seed", r.seed},
                    {"train_size", r.train_size},
                    {"validation_size", r.validation_size},
                    {"validation", metrics_to_json(r.validation)},
                    {"heldout", metrics_to_json(r.heldout)}});
  nlohmann::json summaries = nlohmann::json::array();
  for (const auto& s : report.summaries)
    summaries.push_back({{"mode", to_string(s.mode)},
                         {"validation",
                          {{"macro_precision_mean", s.val_macro_precision_mean},
                           {"macro_recall_mean", s.val_macro_recall_mean},
                           {"macro_f1_mean", s.val_macro_f1_mean},
                           {"macro_f1_std", s.val_macro_f1_std},
                           {"accuracy_mean", s.val_accuracy_mean}}},
                         {"heldout",
                          {{"macro_precision_mean", s.held_macro_precision_mean},
                           {"macro_recall_mean", s.held_macro_recall_mean},
                           {"macro_f1_mean", s.held_macro_f1_mean},
                           {"macro_f1_std", s.held_macro_f1_std},
                           {"accuracy_mean", s.held_accuracy_mean}}}});
  nlohmann::json deltas = nlohmann::json::array();
  for (const auto& d : report.deltas)
    deltas.push_back({{"a", to_string(d.a)},
                      {"b", to_string(d.b)},
                      {"heldout_macro_f1", d.heldout_macro_f1},
                      {"validation_macro_f1", d.validation_macro_f1}});
  nlohmann::json seeds = nlohmann::json::array();
  for (auto s : report.seeds) seeds.push_back(s);
  return {{"split", to_string(report.split)}, {"features", to_string(report.features)},
          {"seeds", seeds},                   {"runs", runs},
          {"summaries", summaries},           {"deltas", deltas}};
}

namespace detail {

inline std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%8.4f", v);
  return buf;
}

}  // namespace detail

inline std::string report_to_table(const ComparisonReport& report) {
  std::string out;
  out += "mode        val_p    val_r   val_f1  val_acc   held_p   held_r  held_f1 held_acc\n";
  for (const auto& s : report.summaries) {
    char head[32];
    std::snprintf(head, sizeof(head), "%-9s", to_string(s.mode));
    out += head;
    out += detail::fmt4(s.val_macro_precision_mean);
    out += detail::fmt4(s.val_macro_recall_mean);
    out += detail::fmt4(s.val_macro_f1_mean);
    out += detail::fmt4(s.val_accuracy_mean);
    out += detail::fmt4(s.held_macro_precision_mean);
    out += detail::fmt4(s.held_macro_recall_mean);
    out += detail::fmt4(s.held_macro_f1_mean);
    out += detail::fmt4(s.held_accuracy_mean);
    out += '\n';
  }
  if (!report.deltas.empty()) out += "deltas (mean over seeds):\n";
  for (const auto& d : report.deltas) {
    char line[160];
    std::snprintf(line, sizeof(line), "  %s - %s: heldout_macro_f1 %+.4f, validation_macro_f1 %+.4f\n",
                  to_string(d.a), to_string(d.b), d.heldout_macro_f1, d.validation_macro_f1);
    out += line;
  }
  return out;
}

inline std::string runs_to_csv(const ComparisonReport& report) {
  std::string out =
      "mode,seed,val_macro_precision,val_macro_recall,val_macro_f1,val_accuracy,"
      "held_macro_precision,held_macro_recall,held_macro_f1,held_accuracy\n";
  for (const auto& r : report.runs) {
    char line[320];
    std::snprintf(line, sizeof(line), "%s,%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  to_string(r.mode), static_cast<unsigned long long>(r.seed),
                  r.validation.macro_precision, r.validation.macro_recall,
                  r.validation.macro_f1, r.validation.accuracy, r.heldout.macro_precision,
                  r.heldout.macro_recall, r.heldout.macro_f1, r.heldout.accuracy);
    out += line;
  }
  return out;
}

}  // namespace modeda
