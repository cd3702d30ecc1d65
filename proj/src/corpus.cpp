#include "lsanb/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <locale>
#include <set>
#include <sstream>

#include "lsanb/error.hpp"

namespace lsanb {

namespace fs = std::filesystem;

namespace {

const std::locale& unicode_locale() {
  static const std::locale loc = [] {
    for (const char* name : {"C.UTF-8", "C.utf8", "en_US.UTF-8"}) {
      try {
        return std::locale(name);
      } catch (const std::runtime_error&) {
      }
    }
    return std::locale::classic();
  }();
  return loc;
}

// Decodes one code point starting at `i`. Returns the number of bytes
// consumed, or 0 when the sequence is malformed.
std::size_t decode_utf8(std::string_view s, std::size_t i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  }
  std::size_t len = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
    min = 0x10000;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  return len;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_alpha(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  if constexpr (sizeof(wchar_t) >= 4) {
    return std::isalpha(static_cast<wchar_t>(cp), unicode_locale());
  }
  return false;
}

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'A' && cp <= 'Z') ? cp + ('a' - 'A') : cp;
  }
  if constexpr (sizeof(wchar_t) >= 4) {
    return static_cast<char32_t>(
        std::tolower(static_cast<wchar_t>(cp), unicode_locale()));
  }
  return cp;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorKind::kIo, "read failed: " + path.string());
  }
  return std::move(ss).str();
}

}  // namespace

LabeledCorpus::LabeledCorpus(std::vector<Document> documents,
                             std::vector<int> labels,
                             std::vector<std::string> class_names)
    : documents_(std::move(documents)),
      labels_(std::move(labels)),
      class_names_(std::move(class_names)) {
  if (labels_.size() != documents_.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "corpus has " + std::to_string(documents_.size()) +
                    " documents but " + std::to_string(labels_.size()) +
                    " labels");
  }
  std::set<std::string_view> names;
  for (const auto& name : class_names_) {
    if (!names.insert(name).second) {
      throw Error(ErrorKind::kInvalidConfig, "duplicate class name: " + name);
    }
  }
  const int n_classes = static_cast<int>(class_names_.size());
  for (int label : labels_) {
    if (label < 0 || label >= n_classes) {
      throw Error(ErrorKind::kInvalidConfig,
                  "label " + std::to_string(label) + " out of range");
    }
  }
  std::set<std::string_view> ids;
  for (const auto& doc : documents_) {
    if (!ids.insert(doc.id).second) {
      throw Error(ErrorKind::kInvalidConfig, "duplicate document id: " + doc.id);
    }
  }
}

LabeledCorpus LabeledCorpus::without(const std::vector<std::size_t>& drop) const {
  std::vector<bool> dropped(documents_.size(), false);
  for (std::size_t i : drop) {
    if (i < dropped.size()) dropped[i] = true;
  }
  std::vector<Document> docs;
  std::vector<int> labels;
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    if (dropped[i]) continue;
    docs.push_back(documents_[i]);
    labels.push_back(labels_[i]);
  }
  return LabeledCorpus(std::move(docs), std::move(labels), class_names_);
}

Vocabulary::Vocabulary(std::vector<std::string> sorted_unique_terms)
    : terms_(std::move(sorted_unique_terms)) {
  index_.reserve(terms_.size());
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    if (k > 0 && !(terms_[k - 1] < terms_[k])) {
      throw Error(ErrorKind::kInvalidConfig,
                  "vocabulary terms must be sorted and unique");
    }
    index_.emplace(terms_[k], k);
  }
}

std::optional<std::size_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool is_valid_utf8(std::string_view bytes) {
  char32_t cp = 0;
  for (std::size_t i = 0; i < bytes.size();) {
    const std::size_t len = decode_utf8(bytes, i, cp);
    if (len == 0) return false;
    i += len;
  }
  return true;
}

TokenList tokenize(std::string_view raw_text) {
  TokenList tokens;
  std::string current;
  std::size_t current_len = 0;
  auto flush = [&] {
    if (current_len >= 2) tokens.push_back(current);
    current.clear();
    current_len = 0;
  };
  for (std::size_t i = 0; i < raw_text.size();) {
    char32_t cp = 0;
    std::size_t len = decode_utf8(raw_text, i, cp);
    if (len == 0) {
      flush();
      ++i;
      continue;
    }
    i += len;
    if (is_alpha(cp)) {
      encode_utf8(to_lower(cp), current);
      ++current_len;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

TokenList remove_stopwords(const TokenList& tokens, const StopwordSet& stopwords) {
  TokenList out;
  out.reserve(tokens.size());
  std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(out),
               [&](const std::string& t) { return !stopwords.contains(t); });
  return out;
}

const StopwordSet& default_stopwords() {
  static const StopwordSet words = {
      "about", "above", "after", "again", "against", "all", "am", "an", "and",
      "any", "are", "as", "at", "be", "because", "been", "before", "being",
      "below", "between", "both", "but", "by", "can", "could", "did", "do",
      "does", "doing", "down", "during", "each", "few", "for", "from",
      "further", "had", "has", "have", "having", "he", "her", "here", "hers",
      "herself", "him", "himself", "his", "how", "if", "in", "into", "is",
      "it", "its", "itself", "just", "me", "more", "most", "my", "myself",
      "no", "nor", "not", "now", "of", "off", "on", "once", "only", "or",
      "other", "ought", "our", "ours", "ourselves", "out", "over", "own",
      "same", "she", "should", "so", "some", "such", "than", "that", "the",
      "their", "theirs", "them", "themselves", "then", "there", "these",
      "they", "this", "those", "through", "to", "too", "under", "until", "up",
      "very", "was", "we", "were", "what", "when", "where", "which", "while",
      "who", "whom", "why", "will", "with", "would", "you", "your", "yours",
      "yourself", "yourselves", "also", "may", "might", "must", "shall",
      "upon", "us", "yet", "within", "without", "across", "along", "among",
      "around", "however", "therefore", "thus", "whether", "although",
      "though", "since", "onto", "via", "per", "whose", "every", "either",
      "neither", "another", "many", "much", "several",
  };
  return words;
}

StopwordSet load_stopwords(const fs::path& path) {
  const std::string text = read_file(path);
  if (!is_valid_utf8(text)) {
    throw Error(ErrorKind::kEncoding, "stopword file is not UTF-8: " + path.string());
  }
  StopwordSet words;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    for (auto& t : tokenize(line)) words.insert(std::move(t));
  }
  return words;
}

Document make_document(std::string id, std::string raw_text,
                       const StopwordSet& stopwords) {
  TokenList tokens = remove_stopwords(tokenize(raw_text), stopwords);
  return Document{std::move(id), std::move(raw_text), std::move(tokens)};
}

Vocabulary build_vocabulary(const LabeledCorpus& corpus) {
  std::set<std::string> unique;
  for (const auto& doc : corpus.documents()) {
    unique.insert(doc.tokens.begin(), doc.tokens.end());
  }
  if (unique.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "no document contains any token");
  }
  return Vocabulary(std::vector<std::string>(unique.begin(), unique.end()));
}

LabeledCorpus load_corpus(const fs::path& root, const StopwordSet& stopwords) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorKind::kIo, "not a readable directory: " + root.string());
  }
  std::vector<std::string> class_names;
  for (fs::directory_iterator it(root, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_directory()) class_names.push_back(it->path().filename().string());
  }
  if (ec) throw Error(ErrorKind::kIo, "cannot list " + root.string());
  std::sort(class_names.begin(), class_names.end());

  std::vector<Document> docs;
  std::vector<int> labels;
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    const fs::path dir = root / class_names[c];
    std::vector<fs::path> files;
    for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
      if (it->is_regular_file() && it->path().extension() == ".txt") {
        files.push_back(it->path());
      }
    }
    if (ec) throw Error(ErrorKind::kIo, "cannot list " + dir.string());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::string text = read_file(file);
      if (!is_valid_utf8(text)) {
        throw Error(ErrorKind::kEncoding, "not valid UTF-8: " + file.string());
      }
      std::string id = class_names[c] + "/" + file.filename().string();
      docs.push_back(make_document(std::move(id), std::move(text), stopwords));
      labels.push_back(static_cast<int>(c));
    }
  }
  if (docs.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "no .txt documents under " + root.string());
  }
  return LabeledCorpus(std::move(docs), std::move(labels), std::move(class_names));
}

}  // namespace lsanb
