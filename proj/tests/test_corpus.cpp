#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <random>

#include "lsanb/corpus.hpp"
#include "lsanb/error.hpp"

namespace fs = std::filesystem;
using namespace lsanb;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("lsanb_corpus_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no lsanb::Error thrown";
  return ErrorKind::kIo;
}

}  // namespace

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("The cat sat on the mat."),
            (TokenList{"the", "cat", "sat", "on", "the", "mat"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("C3PO, a droid!"), (TokenList{"po", "droid"}));
}

TEST(Tokenize, NonAsciiLetters) {
  EXPECT_EQ(tokenize("Ärger über Öl"), (TokenList{"ärger", "über", "öl"}));
  // invalid byte acts as a separator
  EXPECT_EQ(tokenize("ab\xff" "cd"), (TokenList{"ab", "cd"}));
}

TEST(Tokenize, PropertyTokensAreAlphabeticAndDeterministic) {
  std::mt19937_64 rng(7);
  const std::string alphabet = "abcXYZ 019.,;-\t\n'";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 60);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    for (int i = len(rng); i > 0; --i) text += alphabet[pick(rng)];
    const auto toks = tokenize(text);
    EXPECT_EQ(toks, tokenize(text));
    for (const auto& t : toks) {
      ASSERT_GE(t.size(), 2u);
      for (char ch : t) ASSERT_TRUE(ch >= 'a' && ch <= 'z') << t;
    }
  }
}

TEST(RemoveStopwords, Examples) {
  EXPECT_EQ(remove_stopwords({"the", "cat", "sat"}, {"the"}), (TokenList{"cat", "sat"}));
  EXPECT_EQ(remove_stopwords({"cat"}, {}), (TokenList{"cat"}));
  EXPECT_TRUE(remove_stopwords({"the", "the"}, {"the"}).empty());
}

TEST(BuildVocabulary, SortedDistinctTerms) {
  LabeledCorpus c({{"a/1", "", {"cat", "sat"}}, {"a/2", "", {"cat", "mat"}}}, {0, 0}, {"a"});
  const auto v = build_vocabulary(c);
  EXPECT_EQ(v.terms(), (std::vector<std::string>{"cat", "mat", "sat"}));
  for (std::size_t k = 0; k < v.size(); ++k) EXPECT_EQ(v.find(v.term(k)), k);
  EXPECT_FALSE(v.find("zebra").has_value());
}

TEST(BuildVocabulary, NoTokensIsEmptyCorpus) {
  LabeledCorpus c({make_document("a/1", "a?", {})}, {0}, {"a"});
  EXPECT_EQ(kind_of([&] { build_vocabulary(c); }), ErrorKind::kEmptyCorpus);
}

TEST(LabeledCorpus, ValidatesLabelsAndIds) {
  EXPECT_EQ(kind_of([] { LabeledCorpus({{"x", "", {}}}, {1}, {"a"}); }), ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind_of([] { LabeledCorpus({{"x", "", {}}, {"x", "", {}}}, {0, 0}, {"a"}); }),
            ErrorKind::kInvalidConfig);
  EXPECT_EQ(kind_of([] { LabeledCorpus({{"x", "", {}}}, {0}, {"a", "a"}); }),
            ErrorKind::kInvalidConfig);
}

TEST(LoadCorpus, TwoClasses) {
  TempDir dir;
  write(dir.path / "b" / "1.txt", "bees buzz");
  write(dir.path / "b" / "2.txt", "bees hum");
  write(dir.path / "a" / "1.txt", "apple pie");
  write(dir.path / "a" / "2.txt", "apple tart");
  const auto c = load_corpus(dir.path, {});
  EXPECT_EQ(c.size(), 4u);
  EXPECT_EQ(c.class_names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(c.documents()[0].id, "a/1.txt");
  EXPECT_EQ(c.labels(), (std::vector<int>{0, 0, 1, 1}));
}

TEST(LoadCorpus, SingleFile) {
  TempDir dir;
  write(dir.path / "only" / "x.txt", "cat cat");
  const auto c = load_corpus(dir.path, default_stopwords());
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.documents()[0].tokens, (TokenList{"cat", "cat"}));
}

TEST(LoadCorpus, Errors) {
  TempDir dir;
  EXPECT_EQ(kind_of([&] { load_corpus(dir.path, {}); }), ErrorKind::kEmptyCorpus);
  EXPECT_EQ(kind_of([&] { load_corpus(dir.path / "missing", {}); }), ErrorKind::kIo);
  write(dir.path / "a" / "bad.txt", "ok \xc3\x28 bytes");
  try {
    load_corpus(dir.path, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEncoding);
    EXPECT_NE(std::string(e.what()).find("bad.txt"), std::string::npos);
  }
}

TEST(LoadStopwords, OnePerLine) {
  TempDir dir;
  write(dir.path / "stop.txt", "The\nand\n\n  of \n");
  const auto s = load_stopwords(dir.path / "stop.txt");
  EXPECT_EQ(s, (StopwordSet{"the", "and", "of"}));
  EXPECT_EQ(kind_of([&] { load_stopwords(dir.path / "nope.txt"); }), ErrorKind::kIo);
}

TEST(Utf8, Validation) {
  EXPECT_TRUE(is_valid_utf8("plain"));
  EXPECT_TRUE(is_valid_utf8("caf\xc3\xa9"));
  EXPECT_FALSE(is_valid_utf8("\xc3"));
  EXPECT_FALSE(is_valid_utf8("\xed\xa0\x80"));  // surrogate
  EXPECT_FALSE(is_valid_utf8("\xc0\xaf"));      // overlong
}
