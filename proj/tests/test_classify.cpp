#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "modeda/classify.hpp"
#include "testutil.hpp"

using namespace modeda;
using Catch::Matchers::WithinAbs;

TEST_CASE("softmax hand values and overflow safety") {
  auto p = softmax({0.0, 0.0});
  CHECK_THAT(p[0], WithinAbs(0.5, 1e-15));
  CHECK_THAT(p[1], WithinAbs(0.5, 1e-15));

  p = softmax({std::log(2.0), 0.0});
  CHECK_THAT(p[0], WithinAbs(2.0 / 3.0, 1e-12));
  CHECK_THAT(p[1], WithinAbs(1.0 / 3.0, 1e-12));

  p = softmax({1000.0, 0.0});  // max-subtraction keeps this finite
  CHECK(std::isfinite(p[0]));
  CHECK_THAT(p[0], WithinAbs(1.0, 1e-12));

  p = softmax({3.0, 1.0, -2.0, 0.5});
  double sum = 0;
  for (double v : p) sum += v;
  CHECK_THAT(sum, WithinAbs(1.0, 1e-12));
}

TEST_CASE("avg_embedding features are the mean of in-vocabulary rows") {
  EmbeddingStore store(2);
  store.add("a", {1.0, 2.0});
  store.add("b", {3.0, 4.0});
  auto spec = make_feature_spec(FeatureMode::avg_embedding, {}, &store);
  CHECK(spec.dim == 2);

  auto x = featurize({"a", "b"}, spec, &store);
  CHECK(x == std::vector<double>{2.0, 3.0});
  x = featurize({"a", "zzz"}, spec, &store);  // unknown words do not dilute
  CHECK(x == std::vector<double>{1.0, 2.0});
  x = featurize({"zzz"}, spec, &store);  // fully out of vocabulary: zero vector
  CHECK(x == std::vector<double>{0.0, 0.0});

  CHECK_THROWS_AS(featurize({"a"}, spec, nullptr), std::invalid_argument);
  EmbeddingStore other(3);
  other.add("a", {1, 2, 3});
  CHECK_THROWS_AS(featurize({"a"}, spec, &other), std::invalid_argument);
}

TEST_CASE("bow features count tokens over the frozen training vocabulary") {
  auto corpus = testutil::make_corpus({{"pos", "b a a"}});
  auto spec = make_feature_spec(FeatureMode::bow, corpus, nullptr);
  CHECK(spec.vocab == std::vector<std::string>{"a", "b"});
  CHECK(spec.dim == 2);

  auto x = featurize({"a", "a", "c", "b"}, spec, nullptr);
  CHECK(x == std::vector<double>{2.0, 1.0});  // "c" silently dropped
  x = featurize({}, spec, nullptr);
  CHECK(x == std::vector<double>{0.0, 0.0});
}

TEST_CASE("feature spec construction rejects unusable inputs") {
  EmbeddingStore empty(4);
  CHECK_THROWS_AS(make_feature_spec(FeatureMode::avg_embedding, {}, nullptr),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_feature_spec(FeatureMode::avg_embedding, {}, &empty),
                  std::invalid_argument);
  Corpus no_tokens;
  CHECK_THROWS_AS(make_feature_spec(FeatureMode::bow, no_tokens, nullptr), std::invalid_argument);
}

namespace {

LinearModel hand_model() {
  LinearModel model;
  model.classes = {"neg", "pos"};
  model.feature_spec.mode = FeatureMode::avg_embedding;
  model.feature_spec.dim = 2;
  model.weights = {1.0, 0.0,   // neg row
                   0.0, 1.0};  // pos row
  model.bias = {0.0, 0.0};
  return model;
}

}  // namespace

TEST_CASE("predict uses argmax logits with ties to the lowest class index") {
  auto model = hand_model();
  auto p = predict(model, {2.0, 1.0});
  CHECK(p.label == "neg");
  REQUIRE(p.probs.size() == 2);
  CHECK(p.probs[0] > p.probs[1]);
  CHECK_THAT(p.probs[0] + p.probs[1], WithinAbs(1.0, 1e-12));

  p = predict(model, {0.0, 3.0});
  CHECK(p.label == "pos");

  LinearModel zero = model;
  zero.weights.assign(4, 0.0);
  p = predict(zero, {5.0, -1.0});  // exact tie
  CHECK(p.label == "neg");

  CHECK_THROWS_AS(predict(model, {1.0}), std::invalid_argument);
}

TEST_CASE("loss at zero weights is ln(C) and the gradient matches hand algebra") {
  LinearModel model = hand_model();
  model.weights.assign(4, 0.0);

  auto lg = loss_and_gradient(model, {{1.0, 2.0}}, {0}, 0.0);
  CHECK_THAT(lg.loss, WithinAbs(std::log(2.0), 1e-12));
  // p = (1/2, 1/2), y = 0: delta = (-1/2, +1/2)
  REQUIRE(lg.grad_weights.size() == 4);
  CHECK_THAT(lg.grad_weights[0], WithinAbs(-0.5, 1e-12));
  CHECK_THAT(lg.grad_weights[1], WithinAbs(-1.0, 1e-12));
  CHECK_THAT(lg.grad_weights[2], WithinAbs(0.5, 1e-12));
  CHECK_THAT(lg.grad_weights[3], WithinAbs(1.0, 1e-12));
  CHECK_THAT(lg.grad_bias[0], WithinAbs(-0.5, 1e-12));
  CHECK_THAT(lg.grad_bias[1], WithinAbs(0.5, 1e-12));

  // l2 only touches weights and adds (l2/2)*||W||^2
  model.weights = {1.0, -2.0, 0.5, 0.0};
  auto plain = loss_and_gradient(model, {{1.0, 2.0}}, {0}, 0.0);
  auto reg = loss_and_gradient(model, {{1.0, 2.0}}, {0}, 0.1);
  CHECK_THAT(reg.loss - plain.loss, WithinAbs(0.05 * (1.0 + 4.0 + 0.25), 1e-12));
  for (std::size_t k = 0; k < 4; ++k)
    CHECK_THAT(reg.grad_weights[k] - plain.grad_weights[k], WithinAbs(0.1 * model.weights[k], 1e-12));
  CHECK(reg.grad_bias == plain.grad_bias);

  CHECK_THROWS_AS(loss_and_gradient(model, {}, {}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(loss_and_gradient(model, {{1.0, 2.0}}, {7}, 0.0), std::invalid_argument);
}

TEST_CASE("analytic gradients match central finite differences") {
  std::mt19937 gen(991);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> cdist(2, 5), ddist(1, 10), bdist(1, 7);

  const double h = 1e-5;
  int checks = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t cc = cdist(gen), dim = ddist(gen), batch = bdist(gen);
    const double l2 = (trial % 2 == 0) ? 0.0 : 0.1;

    LinearModel model;
    for (std::size_t c = 0; c < cc; ++c) model.classes.push_back("c" + std::to_string(c));
    model.feature_spec.mode = FeatureMode::avg_embedding;
    model.feature_spec.dim = dim;
    model.weights.resize(cc * dim);
    model.bias.resize(cc);
    for (auto& w : model.weights) w = unif(gen);
    for (auto& b : model.bias) b = unif(gen);

    std::vector<std::vector<double>> x(batch, std::vector<double>(dim));
    std::vector<std::size_t> y(batch);
    for (auto& xi : x)
      for (auto& v : xi) v = 2.0 * unif(gen);
    for (auto& yi : y) yi = std::uniform_int_distribution<std::size_t>(0, cc - 1)(gen);

    auto analytic = loss_and_gradient(model, x, y, l2);
    auto probe = [&](double* slot, double base_analytic) {
      const double keep = *slot;
      *slot = keep + h;
      double up = loss_and_gradient(model, x, y, l2).loss;
      *slot = keep - h;
      double down = loss_and_gradient(model, x, y, l2).loss;
      *slot = keep;
      const double numeric = (up - down) / (2 * h);
      const double rel =
          std::abs(base_analytic - numeric) / std::max(1.0, std::abs(base_analytic) + std::abs(numeric));
      INFO("trial=" << trial << " cc=" << cc << " dim=" << dim << " l2=" << l2
                    << " analytic=" << base_analytic << " numeric=" << numeric);
      CHECK(rel < 1e-4);
      ++checks;
    };
    for (std::size_t k = 0; k < model.weights.size(); ++k)
      probe(&model.weights[k], analytic.grad_weights[k]);
    for (std::size_t c = 0; c < cc; ++c) probe(&model.bias[c], analytic.grad_bias[c]);
  }
  CHECK(checks >= 100);
}

TEST_CASE("training separates an easy corpus and is deterministic") {
  std::vector<std::pair<std::string, std::string>> rows;
  for (int i = 0; i < 10; ++i) {
    rows.push_back({"pos", "good great fine nice"});
    rows.push_back({"neg", "bad awful poor dreadful"});
  }
  auto corpus = testutil::make_corpus(rows);

  TrainConfig config;
  config.epochs = 50;
  config.seed = 17;
  auto fit = train_classifier(corpus, nullptr, FeatureMode::bow, config);
  CHECK(fit.model.classes == std::vector<std::string>{"neg", "pos"});
  REQUIRE(fit.epoch_loss.size() == config.epochs);
  CHECK(fit.epoch_loss.back() < fit.epoch_loss.front());

  for (const auto& d : corpus.documents) {
    auto x = featurize(d.tokens, fit.model.feature_spec, nullptr);
    CHECK(predict(fit.model, x).label == d.label);
  }

  auto fit2 = train_classifier(corpus, nullptr, FeatureMode::bow, config);
  CHECK(fit.model.weights == fit2.model.weights);
  CHECK(fit.model.bias == fit2.model.bias);
  CHECK(fit.epoch_loss == fit2.epoch_loss);
}

TEST_CASE("training with averaged embedding features") {
  EmbeddingStore store(2);
  store.add("good", {1.0, 0.2});
  store.add("great", {0.9, 0.1});
  store.add("bad", {-1.0, -0.1});
  store.add("awful", {-0.8, -0.3});

  std::vector<std::pair<std::string, std::string>> rows;
  for (int i = 0; i < 8; ++i) {
    rows.push_back({"pos", "good great"});
    rows.push_back({"neg", "bad awful"});
  }
  auto corpus = testutil::make_corpus(rows);

  TrainConfig config;
  config.epochs = 80;
  auto fit = train_classifier(corpus, &store, FeatureMode::avg_embedding, config);
  CHECK(fit.model.feature_spec.dim == 2);
  for (const auto& d : corpus.documents) {
    auto x = featurize(d.tokens, fit.model.feature_spec, &store);
    CHECK(predict(fit.model, x).label == d.label);
  }
}

TEST_CASE("training input validation") {
  TrainConfig config;
  auto one_class = testutil::make_corpus({{"pos", "fine"}, {"pos", "nice"}});
  CHECK_THROWS_AS(train_classifier(one_class, nullptr, FeatureMode::bow, config),
                  std::invalid_argument);
  auto unlabeled = testutil::make_corpus({{"pos", "fine"}, {"", "mystery"}});
  CHECK_THROWS_AS(train_classifier(unlabeled, nullptr, FeatureMode::bow, config),
                  std::invalid_argument);

  auto ok = testutil::make_corpus({{"pos", "fine"}, {"neg", "bad"}});
  auto broken = config;
  broken.learning_rate = 0;
  CHECK_THROWS_AS(train_classifier(ok, nullptr, FeatureMode::bow, broken), std::invalid_argument);
  broken = config;
  broken.epochs = 0;
  CHECK_THROWS_AS(train_classifier(ok, nullptr, FeatureMode::bow, broken), std::invalid_argument);
  broken = config;
  broken.batch_size = 0;
  CHECK_THROWS_AS(train_classifier(ok, nullptr, FeatureMode::bow, broken), std::invalid_argument);
  broken = config;
  broken.l2 = -1;
  CHECK_THROWS_AS(train_classifier(ok, nullptr, FeatureMode::bow, broken), std::invalid_argument);
}

TEST_CASE("model save/load round-trips weights exactly") {
  auto corpus = testutil::make_corpus({{"pos", "good nice"}, {"neg", "bad poor"}});
  TrainConfig config;
  config.epochs = 5;
  auto fit = train_classifier(corpus, nullptr, FeatureMode::bow, config);

  testutil::TempDir tmp;
  auto p = tmp.file("model.json");
  save_model(fit.model, p);
  auto loaded = load_model(p);
  CHECK(loaded.classes == fit.model.classes);
  CHECK(loaded.feature_spec.mode == fit.model.feature_spec.mode);
  CHECK(loaded.feature_spec.dim == fit.model.feature_spec.dim);
  CHECK(loaded.feature_spec.vocab == fit.model.feature_spec.vocab);
  CHECK(loaded.weights == fit.model.weights);  // exact: json doubles round-trip
  CHECK(loaded.bias == fit.model.bias);
}

TEST_CASE("model json validation") {
  auto model = hand_model();
  auto j = model_to_json(model);

  auto j1 = j;
  j1["classes"] = std::vector<std::string>{"only"};
  CHECK_THROWS_AS(model_from_json(j1), std::invalid_argument);

  auto j2 = j;
  j2["weights"] = std::vector<double>{1.0};
  CHECK_THROWS_AS(model_from_json(j2), std::invalid_argument);

  auto j3 = j;
  j3["bias"] = std::vector<double>{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(model_from_json(j3), std::invalid_argument);

  auto j4 = j;
  j4.erase("classes");
  CHECK_THROWS_AS(model_from_json(j4), std::invalid_argument);

  testutil::TempDir tmp;
  CHECK_THROWS_AS(load_model(tmp.file("missing.json")), ParseError);
  auto bad = tmp.file("bad.json");
  testutil::write_file(bad, "not json at all {");
  CHECK_THROWS_AS(load_model(bad), ParseError);
}

TEST_CASE("feature mode names parse and print") {
  CHECK(parse_feature_mode("avg_embedding") == FeatureMode::avg_embedding);
  CHECK(parse_feature_mode("avg") == FeatureMode::avg_embedding);
  CHECK(parse_feature_mode("bow") == FeatureMode::bow);
  CHECK_THROWS_AS(parse_feature_mode("tfidf"), std::invalid_argument);
  CHECK(std::string(to_string(FeatureMode::avg_embedding)) == "avg_embedding");
  CHECK(std::string(to_string(FeatureMode::bow)) == "bow");
}
