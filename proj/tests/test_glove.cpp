#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "modeda/glove.hpp"
#include "testutil.hpp"

using namespace modeda;

TEST_CASE("co-occurrence counts match a hand computation") {
  // Tokens [a, b, a, c], window 2. Pairs (position, earlier position):
  //   (1,0) a-b w=1, (2,0) a-a w=1/2, (2,1) a-b w=1, (3,1) b-c w=1/2,
  //   (3,2) a-c w=1.
  auto corpus = testutil::make_corpus({{"", "a b a c"}});
  auto table = build_cooccurrence(corpus, 2, 1);
  REQUIRE(table.vocab == std::vector<std::string>{"a", "b", "c"});
  CHECK(table.at(0, 0) == 1.0);  // a-a: 1/2 added in both (identical) directions
  CHECK(table.at(0, 1) == 2.0);
  CHECK(table.at(1, 0) == 2.0);
  CHECK(table.at(0, 2) == 1.0);
  CHECK(table.at(2, 0) == 1.0);
  CHECK(table.at(1, 2) == 0.5);
  CHECK(table.at(2, 1) == 0.5);
  CHECK(table.at(1, 1) == 0.0);
  CHECK(table.at(2, 2) == 0.0);
  CHECK(table.cells.size() == 7);
}

TEST_CASE("distances are measured on the min_count-filtered stream") {
  // "x" occurs once and is dropped at min_count 2, so in "a x b" the
  // surviving tokens a and b become adjacent: weight 1, not 1/2.
  auto corpus = testutil::make_corpus({{"", "a x b"}, {"", "a b"}});
  auto table = build_cooccurrence(corpus, 2, 2);
  REQUIRE(table.vocab == std::vector<std::string>{"a", "b"});
  CHECK(table.at(0, 1) == 2.0);
  CHECK(table.at(1, 0) == 2.0);
}

TEST_CASE("window limits which pairs count") {
  auto corpus = testutil::make_corpus({{"", "a b c d"}});
  auto table = build_cooccurrence(corpus, 1, 1);
  REQUIRE(table.vocab == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(table.at(0, 1) == 1.0);
  CHECK(table.at(1, 2) == 1.0);
  CHECK(table.at(2, 3) == 1.0);
  CHECK(table.at(0, 2) == 0.0);  // distance 2 > window
  CHECK(table.at(0, 3) == 0.0);
}

TEST_CASE("documents do not co-occur across boundaries") {
  auto corpus = testutil::make_corpus({{"", "a"}, {"", "b"}});
  auto table = build_cooccurrence(corpus, 5, 1);
  REQUIRE(table.vocab.size() == 2);
  CHECK(table.at(0, 1) == 0.0);
  CHECK(table.cells.empty());
}

TEST_CASE("co-occurrence table is symmetric on a larger corpus") {
  auto corpus = testutil::make_corpus({
      {"", "the quick brown fox jumps over the lazy dog"},
      {"", "the dog barks at the quick fox"},
      {"", "a lazy afternoon with the dog and the fox"},
  });
  auto table = build_cooccurrence(corpus, 3, 1);
  const std::size_t v = table.vocab.size();
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = 0; j < v; ++j)
      CHECK(table.at(i, j) == table.at(j, i));
}

TEST_CASE("build_cooccurrence rejects window 0") {
  auto corpus = testutil::make_corpus({{"", "a b"}});
  CHECK_THROWS_AS(build_cooccurrence(corpus, 0, 1), std::invalid_argument);
}

namespace {

Corpus training_corpus() {
  // "coffee" and "tea" share contexts; "granite" and "basalt" share different
  // contexts. Enough repetition for stable geometry at toy scale.
  std::vector<std::pair<std::string, std::string>> rows;
  for (int i = 0; i < 30; ++i) {
    rows.push_back({"", "i drink hot coffee every single morning"});
    rows.push_back({"", "i drink hot tea every single morning"});
    rows.push_back({"", "she pours fresh coffee into the cup"});
    rows.push_back({"", "she pours fresh tea into the cup"});
    rows.push_back({"", "the wall is made of grey granite blocks"});
    rows.push_back({"", "the wall is made of grey basalt blocks"});
    rows.push_back({"", "climbers scale the granite cliff at dawn"});
    rows.push_back({"", "climbers scale the basalt cliff at dawn"});
  }
  return testutil::make_corpus(rows);
}

}  // namespace

TEST_CASE("training is bitwise deterministic in the seed") {
  auto corpus = training_corpus();
  EmbedTrainConfig config;
  config.dim = 8;
  config.epochs = 5;
  config.min_count = 1;
  config.seed = 7;

  auto a = train_embeddings(corpus, config);
  auto b = train_embeddings(corpus, config);
  REQUIRE(a.store.vocab() == b.store.vocab());
  for (const auto& w : a.store.vocab()) {
    auto va = a.store.vector(w), vb = b.store.vector(w);
    for (std::size_t d = 0; d < config.dim; ++d) CHECK(va[d] == vb[d]);
  }
  REQUIRE(a.epoch_loss.size() == b.epoch_loss.size());
  for (std::size_t e = 0; e < a.epoch_loss.size(); ++e) CHECK(a.epoch_loss[e] == b.epoch_loss[e]);

  config.seed = 8;
  auto c = train_embeddings(corpus, config);
  bool any_differs = false;
  for (const auto& w : a.store.vocab()) {
    auto va = a.store.vector(w), vc = c.store.vector(w);
    for (std::size_t d = 0; d < config.dim; ++d) any_differs = any_differs || va[d] != vc[d];
  }
  CHECK(any_differs);
}

TEST_CASE("training reduces the weighted least-squares loss") {
  auto corpus = training_corpus();
  EmbedTrainConfig config;
  config.dim = 8;
  config.epochs = 12;
  config.min_count = 1;
  config.seed = 3;

  auto result = train_embeddings(corpus, config);
  REQUIRE(result.epoch_loss.size() == config.epochs);
  for (double loss : result.epoch_loss) {
    CHECK(std::isfinite(loss));
    CHECK(loss >= 0.0);
  }
  CHECK(result.epoch_loss.back() < result.epoch_loss.front());
}

TEST_CASE("trained store covers the filtered vocabulary at the right dim") {
  auto corpus = training_corpus();
  EmbedTrainConfig config;
  config.dim = 6;
  config.epochs = 2;
  config.min_count = 1;

  auto cooc = build_cooccurrence(corpus, config.window, config.min_count);
  auto result = train_embeddings(corpus, config);
  CHECK(result.store.dim() == 6);
  CHECK(result.store.vocab() == cooc.vocab);
  CHECK(std::is_sorted(cooc.vocab.begin(), cooc.vocab.end()));
}

TEST_CASE("words sharing contexts land closer than words that do not") {
  auto corpus = training_corpus();
  EmbedTrainConfig config;
  config.dim = 16;
  config.epochs = 40;
  config.min_count = 1;
  config.seed = 1;

  auto result = train_embeddings(corpus, config);
  const auto& store = result.store;
  double same = cosine_similarity(store.vector("coffee"), store.vector("tea"));
  double cross = cosine_similarity(store.vector("coffee"), store.vector("granite"));
  INFO("cos(coffee,tea)=" << same << " cos(coffee,granite)=" << cross);
  CHECK(same > cross);
}

TEST_CASE("train config validation and empty-vocabulary errors") {
  auto corpus = testutil::make_corpus({{"", "one two"}});
  EmbedTrainConfig config;

  auto broken = config;
  broken.dim = 0;
  CHECK_THROWS_AS(train_embeddings(corpus, broken), std::invalid_argument);
  broken = config;
  broken.epochs = 0;
  CHECK_THROWS_AS(train_embeddings(corpus, broken), std::invalid_argument);
  broken = config;
  broken.learning_rate = 0;
  CHECK_THROWS_AS(train_embeddings(corpus, broken), std::invalid_argument);
  broken = config;
  broken.x_max = 0;
  CHECK_THROWS_AS(train_embeddings(corpus, broken), std::invalid_argument);

  // every token occurs once; min_count 2 empties the vocabulary
  config.min_count = 2;
  CHECK_THROWS_AS(train_embeddings(corpus, config), std::invalid_argument);
}
