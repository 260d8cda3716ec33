#include <catch2/catch_amalgamated.hpp>

#include "modeda/corpus.hpp"
#include "modeda/rng.hpp"
#include "modeda/stopwords_en.hpp"
#include "testutil.hpp"

using modeda::clean_text;
using modeda::Corpus;
using modeda::CorpusFormat;
using modeda::ParseError;
using modeda::StopwordList;

TEST_CASE("clean_text handles the tweet-style kitchen sink") {
  // hand-derived: run collapse, URL drop, mention drop, hashtag strip
  CHECK(clean_text("Goooood!!! https://t.co/x #NHPIndia @user") == "goood nhpindia");
  CHECK(clean_text("AbC DeF") == "abc def");
  CHECK(clean_text("http://x.y stays-not") == "staysnot");
  CHECK(clean_text("HTTPS://UPPER.CASE ok") == "ok");
  CHECK(clean_text("www.example.com later") == "later");
  CHECK(clean_text("@handle") == "");
  CHECK(clean_text("a@b") == "ab");
  CHECK(clean_text("#Tag ##tagged #") == "tag tagged");
  CHECK(clean_text("don't can't") == "don't can't");
  CHECK(clean_text("abc123 4you") == "abc123 4you");
  CHECK(clean_text("caf\xc3\xa9") == "caf");
  CHECK(clean_text("a\001b") == "ab");
  CHECK(clean_text("   \t \n ") == "");
  CHECK(clean_text("") == "");
}

TEST_CASE("clean_text collapses runs after the charset filter") {
  CHECK(clean_text("soooo") == "sooo");
  CHECK(clean_text("so-o-o-o-o") == "sooo");  // '-' removed first, then collapsed
  CHECK(clean_text("aaa") == "aaa");
  CHECK(clean_text("aaaa bbbbb") == "aaa bbb");
  CHECK(clean_text("aaabaaa") == "aaabaaa");  // runs are consecutive only
}

TEST_CASE("clean_text is idempotent") {
  const std::vector<std::string> cases = {
      "Goooood!!! https://t.co/x #NHPIndia @user",
      "MiXeD CaSe with 'quotes' and #tags",
      "@a @b @c nothing left",
      "'''' ''''' ''",
      "#www www. www.x ok",
  };
  for (const auto& raw : cases) {
    auto once = clean_text(raw);
    CHECK(clean_text(once) == once);
  }
  // randomized bytes: output must be stable and stay in [a-z0-9' ]
  modeda::Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    std::string raw;
    const std::size_t len = rng.uniform_index(60);
    for (std::size_t k = 0; k < len; ++k)
      raw.push_back(static_cast<char>(rng.uniform_index(256)));
    auto once = clean_text(raw);
    REQUIRE(clean_text(once) == once);
    for (char c : once) {
      bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'' || c == ' ';
      REQUIRE(ok);
    }
    if (!once.empty()) {
      REQUIRE(once.front() != ' ');
      REQUIRE(once.back() != ' ');
      REQUIRE(once.find("  ") == std::string::npos);
    }
  }
}

TEST_CASE("tokenize splits and honors the stopword flag") {
  StopwordList stop{"the", "was"};
  auto kept = modeda::tokenize("the film was great", stop, false);
  CHECK(kept == std::vector<std::string>{"the", "film", "was", "great"});
  auto dropped = modeda::tokenize("the film was great", stop, true);
  CHECK(dropped == std::vector<std::string>{"film", "great"});
  CHECK(modeda::tokenize("", stop, true).empty());
}

TEST_CASE("builtin stopword list matches the shipped data file") {
  StopwordList from_file = StopwordList::load(testutil::data_path("stopwords_en.txt"));
  StopwordList builtin = modeda::default_stopwords();
  REQUIRE(from_file.size() == builtin.size());
  for (const auto& w : builtin.words()) CHECK(from_file.contains(w));
}

TEST_CASE("merge_annotations needs a strict majority") {
  using modeda::merge_annotations;
  CHECK(merge_annotations({"pos", "pos", "neg"}) == "pos");
  CHECK(merge_annotations({"pos"}) == "pos");
  CHECK_FALSE(merge_annotations({"pos", "neg"}).has_value());
  CHECK_FALSE(merge_annotations({"a", "a", "b", "b"}).has_value());
  CHECK_THROWS_AS(merge_annotations({}), std::invalid_argument);
}

TEST_CASE("tsv corpus loads with synthesized ids and cleaning") {
  testutil::TempDir tmp;
  auto path = tmp.file("c.tsv");
  testutil::write_file(path, "pos\tGreat movie!!! LOVED it\nneg\tthe plot was terrible\n");
  StopwordList stop{"the", "was", "it"};
  Corpus c = modeda::load_corpus(path, CorpusFormat::tsv, stop, true);
  REQUIRE(c.size() == 2);
  CHECK(c.documents[0].id == "000001");
  CHECK(c.documents[1].id == "000002");
  CHECK(c.documents[0].raw_text == "Great movie!!! LOVED it");
  CHECK(c.documents[0].clean_text == "great movie loved it");
  CHECK(c.documents[0].tokens == std::vector<std::string>{"great", "movie", "loved"});
  CHECK(c.documents[1].tokens == std::vector<std::string>{"plot", "terrible"});
  CHECK(c.label_set == std::set<std::string>{"neg", "pos"});
}

TEST_CASE("tsv load errors name the offending line") {
  testutil::TempDir tmp;
  auto no_tab = tmp.file("a.tsv");
  testutil::write_file(no_tab, "pos\tfine text\njust a line without tab\n");
  CHECK_THROWS_WITH(modeda::load_corpus(no_tab, CorpusFormat::tsv),
                    Catch::Matchers::ContainsSubstring(":2:"));

  auto blank = tmp.file("b.tsv");
  testutil::write_file(blank, "pos\t   \n");
  CHECK_THROWS_AS(modeda::load_corpus(blank, CorpusFormat::tsv), ParseError);

  auto empty = tmp.file("c.tsv");
  testutil::write_file(empty, "");
  CHECK_THROWS_AS(modeda::load_corpus(empty, CorpusFormat::tsv), ParseError);

  CHECK_THROWS_AS(modeda::load_corpus(tmp.file("missing.tsv"), CorpusFormat::tsv), ParseError);
}

TEST_CASE("jsonl corpus loads ids and labels when present") {
  testutil::TempDir tmp;
  auto path = tmp.file("c.jsonl");
  testutil::write_file(path,
                       "{\"id\":\"t1\",\"label\":\"pos\",\"text\":\"nice one\"}\n"
                       "\n"
                       "{\"text\":\"no id or label here\"}\n");
  Corpus c = modeda::load_corpus(path, CorpusFormat::jsonl);
  REQUIRE(c.size() == 2);
  CHECK(c.documents[0].id == "t1");
  CHECK(c.documents[0].label == "pos");
  CHECK(c.documents[1].id == "000002");
  CHECK(c.documents[1].label == "");
  CHECK_FALSE(c.documents[1].labeled());
  CHECK(c.label_set == std::set<std::string>{"pos"});
}

TEST_CASE("jsonl load errors name the offending line") {
  testutil::TempDir tmp;
  auto bad_json = tmp.file("a.jsonl");
  testutil::write_file(bad_json, "{\"text\":\"ok\"}\n{not json\n");
  CHECK_THROWS_WITH(modeda::load_corpus(bad_json, CorpusFormat::jsonl),
                    Catch::Matchers::ContainsSubstring(":2:"));

  auto no_text = tmp.file("b.jsonl");
  testutil::write_file(no_text, "{\"label\":\"pos\"}\n");
  CHECK_THROWS_AS(modeda::load_corpus(no_text, CorpusFormat::jsonl), ParseError);

  auto non_string = tmp.file("c.jsonl");
  testutil::write_file(non_string, "{\"text\": 5}\n");
  CHECK_THROWS_AS(modeda::load_corpus(non_string, CorpusFormat::jsonl), ParseError);

  auto dup = tmp.file("d.jsonl");
  testutil::write_file(dup, "{\"id\":\"x\",\"text\":\"a\"}\n{\"id\":\"x\",\"text\":\"b\"}\n");
  CHECK_THROWS_WITH(modeda::load_corpus(dup, CorpusFormat::jsonl),
                    Catch::Matchers::ContainsSubstring("duplicate"));
}

TEST_CASE("corpus round-trips through both formats") {
  testutil::TempDir tmp;
  auto src = tmp.file("src.tsv");
  testutil::write_file(src,
                       "pos\tGreat movie, truly GREAT \xc3\xa9\n"
                       "neg\tawful... just awful\n"
                       "\tunlabeled row\n");
  Corpus c = modeda::load_corpus(src, CorpusFormat::tsv);

  for (auto format : {CorpusFormat::tsv, CorpusFormat::jsonl}) {
    auto out = tmp.file(format == CorpusFormat::tsv ? "out.tsv" : "out.jsonl");
    modeda::save_corpus(c, out, format);
    Corpus back = modeda::load_corpus(out, format);
    REQUIRE(back.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(back.documents[i].raw_text == c.documents[i].raw_text);
      CHECK(back.documents[i].clean_text == c.documents[i].clean_text);
      CHECK(back.documents[i].tokens == c.documents[i].tokens);
      CHECK(back.documents[i].label == c.documents[i].label);
      if (format == CorpusFormat::jsonl) CHECK(back.documents[i].id == c.documents[i].id);
    }
    CHECK(back.label_set == c.label_set);
  }
}

TEST_CASE("corpus rejects duplicate ids") {
  Corpus c;
  c.add(modeda::make_document("same", "text one", {}, false, "a"));
  CHECK_THROWS_AS(c.add(modeda::make_document("same", "text two", {}, false, "b")),
                  std::invalid_argument);
}

TEST_CASE("stopword file load rejects multi-word lines") {
  testutil::TempDir tmp;
  auto path = tmp.file("stop.txt");
  testutil::write_file(path, "the\na an\n");
  CHECK_THROWS_AS(StopwordList::load(path), ParseError);
}
