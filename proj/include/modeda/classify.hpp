#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "modeda/corpus.hpp"
#include "modeda/embeddings.hpp"
#include "modeda/rng.hpp"

namespace modeda {

enum class FeatureMode { avg_embedding, bow };

inline FeatureMode parse_feature_mode(std::string_view s) {
  if (s == "avg_embedding" || s == "avg") return FeatureMode::avg_embedding;
  if (s == "bow") return FeatureMode::bow;
  throw std::invalid_argument("unknown feature mode: " + std::string(s));
}

inline const char* to_string(FeatureMode m) {
  return m == FeatureMode::avg_embedding ? "avg_embedding" : "bow";
}

// Frozen at training time; prediction uses the training-time vocabulary and
// dimension no matter what the input looks like.
struct FeatureSpec {
  FeatureMode mode = FeatureMode::avg_embedding;
  std::size_t dim = 0;
  std::vector<std::string> vocab;  // bow only, sorted
};

inline FeatureSpec make_feature_spec(FeatureMode mode, const Corpus& training,
                                     const EmbeddingStore* store) {
  FeatureSpec spec;
  spec.mode = mode;
  if (mode == FeatureMode::avg_embedding) {
    if (store == nullptr || store->size() == 0)
      throw std::invalid_argument("make_feature_spec: avg_embedding needs an embedding store");
    spec.dim = store->dim();
  } else {
    std::set<std::string> distinct;
    for (const auto& d : training.documents)
      for (const auto& t : d.tokens) distinct.insert(t);
    if (distinct.empty())
      throw std::invalid_argument("make_feature_spec: training corpus has no tokens");
    spec.vocab.assign(distinct.begin(), distinct.end());
    spec.dim = spec.vocab.size();
  }
  return spec;
}

// avg_embedding: mean vector of in-vocabulary tokens (zero vector when none).
// bow: token counts over the frozen vocabulary; unknown tokens are dropped.
inline std::vector<double> featurize(const std::vector<std::string>& tokens,
                                     const FeatureSpec& spec, const EmbeddingStore* store) {
  std::vector<double> x(spec.dim, 0.0);
  if (spec.mode == FeatureMode::avg_embedding) {
    if (store == nullptr)
      throw std::invalid_argument("featurize: avg_embedding needs an embedding store");
    if (store->dim() != spec.dim)
      throw std::invalid_argument("featurize: store dimension does not match feature spec");
    std::size_t hits = 0;
    for (const auto& t : tokens) {
      if (!store->contains(t)) continue;
      auto row = store->vector(t);
      for (std::size_t d = 0; d < spec.dim; ++d) x[d] += row[d];
      ++hits;
    }
    if (hits > 0)
      for (auto& v : x) v /= static_cast<double>(hits);
  } else {
    for (const auto& t : tokens) {
      auto it = std::lower_bound(spec.vocab.begin(), spec.vocab.end(), t);
      if (it != spec.vocab.end() && *it == t)
        x[static_cast<std::size_t>(it - spec.vocab.begin())] += 1.0;
    }
  }
  return x;
}

struct LinearModel {
  std::vector<std::string> classes;  // sorted asc
  FeatureSpec feature_spec;
  std::vector<double> weights;  // classes x dim, row-major
  std::vector<double> bias;     // classes

  std::size_t class_count() const { return classes.size(); }
  std::size_t dim() const { return feature_spec.dim; }
};

inline std::vector<double> softmax(std::vector<double> logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0;
  for (auto& v : logits) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (auto& v : logits) v /= sum;
  return logits;
}

struct Prediction {
  std::string label;
  std::vector<double> probs;  // aligned with model.classes
};

inline std::vector<double> logits_of(const LinearModel& model, const std::vector<double>& x) {
  if (x.size() != model.dim())
    throw std::invalid_argument("predict: feature dimension mismatch");
  std::vector<double> z(model.class_count(), 0.0);
  for (std::size_t c = 0; c < model.class_count(); ++c) {
    const double* wr = model.weights.data() + c * model.dim();
    double dot = model.bias[c];
    for (std::size_t d = 0; d < x.size(); ++d) dot += wr[d] * x[d];
    z[c] = dot;
  }
  return z;
}

// Ties resolve to the lowest class index.
inline Prediction predict(const LinearModel& model, const std::vector<double>& features) {
  Prediction p;
  p.probs = softmax(logits_of(model, features));
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.probs.size(); ++c)
    if (p.probs[c] > p.probs[best]) best = c;
  p.label = model.classes[best];
  return p;
}

struct LossGrad {
  double loss = 0;
  std::vector<double> grad_weights;
  std::vector<double> grad_bias;
};

// Mean softmax cross-entropy over the batch plus (l2/2)*||W||^2; biases are
// not regularized. The gradient is the exact analytic one.
inline LossGrad loss_and_gradient(const LinearModel& model,
                                  const std::vector<std::vector<double>>& x,
                                  const std::vector<std::size_t>& y, double l2) {
  if (x.empty() || x.size() != y.size())
    throw std::invalid_argument("loss_and_gradient: bad batch");
  const std::size_t cc = model.class_count();
  const std::size_t dim = model.dim();
  LossGrad out;
  out.grad_weights.assign(cc * dim, 0.0);
  out.grad_bias.assign(cc, 0.0);
  const double inv_b = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] >= cc) throw std::invalid_argument("loss_and_gradient: class index out of range");
    std::vector<double> p = softmax(logits_of(model, x[i]));
    out.loss += -std::log(std::max(p[y[i]], 1e-300));
    for (std::size_t c = 0; c < cc; ++c) {
      const double delta = (p[c] - (c == y[i] ? 1.0 : 0.0)) * inv_b;
      out.grad_bias[c] += delta;
      double* gr = out.grad_weights.data() + c * dim;
      const auto& xi = x[i];
      for (std::size_t d = 0; d < dim; ++d) gr[d] += delta * xi[d];
    }
  }
  out.loss *= inv_b;
  if (l2 > 0) {
    double reg = 0;
    for (std::size_t k = 0; k < model.weights.size(); ++k) {
      reg += model.weights[k] * model.weights[k];
      out.grad_weights[k] += l2 * model.weights[k];
    }
    out.loss += 0.5 * l2 * reg;
  }
  return out;
}

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 200;
  double l2 = 1e-4;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;

  void validate() const {
    if (learning_rate <= 0)
      throw std::invalid_argument("train config: learning_rate must be positive");
    if (epochs == 0) throw std::invalid_argument("train config: epochs must be positive");
    if (l2 < 0) throw std::invalid_argument("train config: l2 must be non-negative");
    if (batch_size == 0) throw std::invalid_argument("train config: batch_size must be positive");
  }
};

struct FitResult {
  LinearModel model;
  std::vector<double> epoch_loss;  // full-dataset loss after each epoch
};

// Minibatch gradient descent from zero-initialized weights with a seeded
// epoch shuffle; deterministic for a given (corpus order, config).
inline FitResult train_classifier(const Corpus& corpus, const EmbeddingStore* store,
                                  FeatureMode mode, const TrainConfig& config) {
  config.validate();
  for (const auto& d : corpus.documents)
    if (!d.labeled())
      throw std::invalid_argument("train_classifier: unlabeled document: " + d.id);
  if (corpus.label_set.size() < 2)
    throw std::invalid_argument("train_classifier: need at least two classes");

  FitResult fit;
  LinearModel& model = fit.model;
  model.classes.assign(corpus.label_set.begin(), corpus.label_set.end());
  model.feature_spec = make_feature_spec(mode, corpus, store);
  model.weights.assign(model.classes.size() * model.feature_spec.dim, 0.0);
  model.bias.assign(model.classes.size(), 0.0);

  const std::size_t n = corpus.documents.size();
  std::vector<std::vector<double>> x;
  x.reserve(n);
  std::vector<std::size_t> y;
  y.reserve(n);
  for (const auto& d : corpus.documents) {
    x.push_back(featurize(d.tokens, model.feature_spec, store));
    auto it = std::lower_bound(model.classes.begin(), model.classes.end(), d.label);
    y.push_back(static_cast<std::size_t>(it - model.classes.begin()));
  }

  Rng rng(config.seed);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::vector<std::vector<double>> bx;
  std::vector<std::size_t> by;
  fit.epoch_loss.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(perm);
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(n, start + config.batch_size);
      bx.clear();
      by.clear();
      for (std::size_t k = start; k < end; ++k) {
        bx.push_back(x[perm[k]]);
        by.push_back(y[perm[k]]);
      }
      LossGrad lg = loss_and_gradient(model, bx, by, config.l2);
      for (std::size_t k = 0; k < model.weights.size(); ++k)
        model.weights[k] -= config.learning_rate * lg.grad_weights[k];
      for (std::size_t c = 0; c < model.bias.size(); ++c)
        model.bias[c] -= config.learning_rate * lg.grad_bias[c];
    }
    fit.epoch_loss.push_back(loss_and_gradient(model, x, y, config.l2).loss);
  }
  return fit;
}

inline nlohmann::json model_to_json(const LinearModel& model) {
  nlohmann::json j;
  j["classes"] = model.classes;
  j["feature_spec"] = {{"mode", to_string(model.feature_spec.mode)},
                       {"dim", model.feature_spec.dim},
                       {"vocab", model.feature_spec.vocab}};
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  return j;
}

inline LinearModel model_from_json(const nlohmann::json& j) {
  LinearModel model;
  try {
    model.classes = j.at("classes").get<std::vector<std::string>>();
    const auto& fs = j.at("feature_spec");
    model.feature_spec.mode = parse_feature_mode(fs.at("mode").get<std::string>());
    model.feature_spec.dim = fs.at("dim").get<std::size_t>();
    model.feature_spec.vocab = fs.at("vocab").get<std::vector<std::string>>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model json: ") + e.what());
  }
  if (model.classes.size() < 2) throw std::invalid_argument("model json: fewer than two classes");
  if (model.weights.size() != model.classes.size() * model.feature_spec.dim)
    throw std::invalid_argument("model json: weights size mismatch");
  if (model.bias.size() != model.classes.size())
    throw std::invalid_argument("model json: bias size mismatch");
  if (model.feature_spec.mode == FeatureMode::bow &&
      model.feature_spec.vocab.size() != model.feature_spec.dim)
    throw std::invalid_argument("model json: vocab size mismatch");
  return model;
}

inline void save_model(const LinearModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << model_to_json(model).dump(2) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline LinearModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": invalid json: " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace modeda
