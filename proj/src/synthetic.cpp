#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "lsanb/error.hpp"
#include "lsanb/pipeline.hpp"
#include "lsanb/rng.hpp"

namespace lsanb {

namespace {

// Base-20 digits without 'q' and 'v', which mark class words.
constexpr std::string_view kDigits = "abcdefghijklmnoprstu";

std::string letters(std::size_t x) {
  std::string out;
  do {
    out.push_back(kDigits[x % kDigits.size()]);
    x /= kDigits.size();
  } while (x > 0);
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::string> word_list(std::size_t count, const std::string& prefix) {
  std::vector<std::string> words;
  for (std::size_t i = 0; words.size() < count; ++i) {
    std::string w = prefix + letters(i);
    if (!default_stopwords().contains(w)) words.push_back(std::move(w));
  }
  return words;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string text;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    text += tokens[i];
    text.push_back((i + 1) % 12 == 0 || i + 1 == tokens.size() ? '\n' : ' ');
  }
  return text;
}

}  // namespace

void SyntheticSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kInvalidConfig, msg); };
  if (n_classes == 0) fail("n_classes must be >= 1");
  const bool split = !docs_per_class.empty();
  const bool explicit_sizes = !train_per_class.empty() || !test_per_class.empty();
  if (split == explicit_sizes) fail("give either docs_per_class or train/test sizes per class");
  auto check = [&](const std::vector<std::size_t>& v, const char* name) {
    if (v.size() != n_classes) fail(fmt::format("{} needs {} entries", name, n_classes));
    for (std::size_t x : v) {
      if (x == 0) fail(fmt::format("{} entries must be >= 1", name));
    }
  };
  if (split) {
    check(docs_per_class, "docs_per_class");
  } else {
    check(train_per_class, "train_per_class");
    check(test_per_class, "test_per_class");
  }
  if (vocab_per_class == 0 || shared_noise_vocab == 0 || doc_length == 0) {
    fail("vocabulary sizes and doc_length must be >= 1");
  }
  if (!(noise_fraction >= 0.0 && noise_fraction < 1.0)) fail("noise_fraction must be in [0, 1)");
  if (!class_names.empty() && class_names.size() != n_classes) fail("class_names size differs from n_classes");
}

SyntheticSpec SyntheticSpec::table_shape(double noise_fraction, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_classes = 6;
  spec.train_per_class = {400, 350, 150, 300, 100, 250};
  spec.test_per_class = {90, 60, 20, 50, 20, 30};
  spec.class_names = {"computer", "social", "war", "political", "human_rights", "stock"};
  spec.noise_fraction = noise_fraction;
  spec.seed = seed;
  return spec;
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<std::string> names = spec.class_names;
  if (names.empty()) {
    for (std::size_t c = 0; c < spec.n_classes; ++c) names.push_back(fmt::format("class_{}", c + 1));
  }
  const std::vector<std::string> noise = word_list(spec.shared_noise_vocab, "z");
  const auto class_tokens = static_cast<std::size_t>(
      std::llround((1.0 - spec.noise_fraction) * static_cast<double>(spec.doc_length)));

  std::vector<Document> train_docs, test_docs;
  std::vector<int> train_labels, test_labels;
  const SeedTree root(spec.seed);
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    const std::vector<std::string> vocab = word_list(spec.vocab_per_class, "q" + letters(c) + "v");
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    if (!spec.docs_per_class.empty()) {
      n_test = (spec.docs_per_class[c] + 2) / 5;
      n_train = spec.docs_per_class[c] - n_test;
    } else {
      n_train = spec.train_per_class[c];
      n_test = spec.test_per_class[c];
    }

    auto engine = root.child(fmt::format("corpus.class.{}", c)).engine();
    std::uniform_int_distribution<std::size_t> pick_class(0, vocab.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_noise(0, noise.size() - 1);
    for (std::size_t d = 0; d < n_train + n_test; ++d) {
      std::vector<std::string> tokens;
      tokens.reserve(spec.doc_length);
      for (std::size_t t = 0; t < spec.doc_length; ++t) {
        tokens.push_back(t < class_tokens ? vocab[pick_class(engine)] : noise[pick_noise(engine)]);
      }
      std::shuffle(tokens.begin(), tokens.end(), engine);
      const bool is_train = d < n_train;
      const std::size_t index = is_train ? d : d - n_train;
      std::string id = fmt::format("{}/{}_{:04}.txt", names[c], names[c], index + 1);
      std::string text = join_tokens(tokens);
      Document doc{std::move(id), std::move(text), std::move(tokens)};
      (is_train ? train_docs : test_docs).push_back(std::move(doc));
      (is_train ? train_labels : test_labels).push_back(static_cast<int>(c));
    }
  }
  // Class directories are ordered by name when loaded back from disk; keep
  // the in-memory label order identical.
  std::vector<std::size_t> order(names.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
  std::vector<int> remap(names.size());
  std::vector<std::string> sorted_names;
  for (std::size_t i = 0; i < order.size(); ++i) {
    remap[order[i]] = static_cast<int>(i);
    sorted_names.push_back(names[order[i]]);
  }
  auto relabel = [&](std::vector<Document>& docs, std::vector<int>& labels) {
    std::vector<std::size_t> idx(docs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (int& l : labels) l = remap[static_cast<std::size_t>(l)];
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return labels[a] != labels[b] ? labels[a] < labels[b] : docs[a].id < docs[b].id;
    });
    std::vector<Document> d2;
    std::vector<int> l2;
    for (std::size_t i : idx) {
      d2.push_back(std::move(docs[i]));
      l2.push_back(labels[i]);
    }
    return LabeledCorpus(std::move(d2), std::move(l2), sorted_names);
  };
  SyntheticCorpus out{relabel(train_docs, train_labels), relabel(test_docs, test_labels)};
  return out;
}

}  // namespace lsanb
