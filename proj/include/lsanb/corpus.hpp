#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lsanb {

using TokenList = std::vector<std::string>;
using StopwordSet = std::unordered_set<std::string>;

struct Document {
  std::string id;
  std::string raw_text;
  TokenList tokens;
};

// Documents with parallel class labels. Construction validates that labels
// are in range, class names are unique and document ids are unique.
class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  LabeledCorpus(std::vector<Document> documents, std::vector<int> labels,
                std::vector<std::string> class_names);

  const std::vector<Document>& documents() const noexcept { return documents_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& class_names() const noexcept {
    return class_names_;
  }
  std::size_t size() const noexcept { return documents_.size(); }
  std::size_t num_classes() const noexcept { return class_names_.size(); }
  bool empty() const noexcept { return documents_.empty(); }

  // Keeps the documents whose index is not in `drop` (sorted or not).
  LabeledCorpus without(const std::vector<std::size_t>& drop) const;

 private:
  std::vector<Document> documents_;
  std::vector<int> labels_;
  std::vector<std::string> class_names_;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> sorted_unique_terms);

  const std::vector<std::string>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  std::optional<std::size_t> find(std::string_view term) const;
  const std::string& term(std::size_t k) const { return terms_.at(k); }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Lowercased maximal runs of alphabetic code points, at least two code points
// long. Anything else separates tokens. Invalid UTF-8 bytes are separators.
TokenList tokenize(std::string_view raw_text);

TokenList remove_stopwords(const TokenList& tokens, const StopwordSet& stopwords);

// Built-in English list, used when no stopword file is configured.
const StopwordSet& default_stopwords();

// One entry per line; each line is run through tokenize().
StopwordSet load_stopwords(const std::filesystem::path& path);

bool is_valid_utf8(std::string_view bytes);

Document make_document(std::string id, std::string raw_text,
                       const StopwordSet& stopwords);

Vocabulary build_vocabulary(const LabeledCorpus& corpus);

// <root>/<class_name>/<doc>.txt; class order is sorted by name and document
// ids are the paths relative to root with '/' separators.
LabeledCorpus load_corpus(const std::filesystem::path& root,
                          const StopwordSet& stopwords);

}  // namespace lsanb
