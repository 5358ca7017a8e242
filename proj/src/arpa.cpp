#include "rasm/arpa.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "rasm/util.hpp"

namespace rasm {

namespace {

constexpr double kLn10 = 2.302585092994045684;
constexpr char kBinaryMagic[8] = {'R', 'A', 'S', 'M', 'L', 'M', '0', '1'};

std::string join_gram(const LmVocab& vocab, const NgramKey& key) {
  std::string out;
  for (std::uint8_t i = 0; i < key.len; ++i) {
    if (i) out += ' ';
    out += vocab.token(key.w[i]);
  }
  return out;
}

}  // namespace

std::string to_arpa(const NgramModel& model) {
  const int order = model.order();
  const LmVocab& vocab = model.vocab();

  // Sort each order by the rendered gram for diff-stable output.
  std::vector<std::vector<std::pair<std::string, const NgramKey*>>> sorted(
      order + 1);
  std::vector<NgramKey> unk_keys;  // ensure <unk> appears among unigrams
  for (int k = 1; k <= order; ++k) {
    sorted[k].reserve(model.predictive_table(k).size());
    for (const auto& [key, c] : model.predictive_table(k)) {
      sorted[k].emplace_back(join_gram(vocab, key), &key);
    }
    if (k == 1) {
      NgramKey unk;
      unk.len = 1;
      unk.w[0] = kUnkId;
      if (model.predictive_table(1).find(unk) ==
          model.predictive_table(1).end()) {
        unk_keys.push_back(unk);
        sorted[1].emplace_back(std::string(kUnkToken), &unk_keys.back());
      }
    }
    std::sort(sorted[k].begin(), sorted[k].end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  std::string out = "\\data\\\n";
  for (int k = 1; k <= order; ++k) {
    out += "ngram " + std::to_string(k) + "=" +
           std::to_string(sorted[k].size()) + "\n";
  }

  for (int k = 1; k <= order; ++k) {
    out += "\n\\" + std::to_string(k) + "-grams:\n";
    for (const auto& [text, key] : sorted[k]) {
      double log10_prob;
      if (k == 1 && key->w[0] == kBosId) {
        log10_prob = -99.0;  // <s> is context only, never predicted
      } else {
        std::span<const WordId> ctx(key->w.data(), key->len - 1);
        log10_prob = std::log(model.prob(key->last(), ctx)) / kLn10;
      }
      out += fmt_double(log10_prob) + "\t" + text;
      if (k < order) {
        const double bo = model.backoff_weight(*key);
        if (bo != 1.0) out += "\t" + fmt_double(std::log(bo) / kLn10);
      }
      out += "\n";
    }
  }
  out += "\n\\end\\\n";
  return out;
}

void write_arpa(const NgramModel& model, const std::string& path) {
  write_file(path, to_arpa(model));
}

ArpaModel ArpaModel::from_arpa_text(std::string_view text) {
  ArpaModel m;
  std::vector<std::string> lines = split_lines(text);
  std::size_t i = 0;
  auto skip_blank = [&]() {
    while (i < lines.size() && lines[i].empty()) ++i;
  };

  skip_blank();
  if (i >= lines.size() || lines[i] != "\\data\\") {
    throw Error("ARPA parse error: missing \\data\\ header");
  }
  ++i;
  std::vector<std::size_t> expected;
  while (i < lines.size() && lines[i].rfind("ngram ", 0) == 0) {
    const std::string& l = lines[i];
    const std::size_t eq = l.find('=');
    if (eq == std::string::npos) throw Error("ARPA parse error: bad ngram line");
    expected.push_back(std::stoull(l.substr(eq + 1)));
    ++i;
  }
  if (expected.empty()) throw Error("ARPA parse error: no ngram counts");
  m.order_ = static_cast<int>(expected.size());
  m.tables_.resize(m.order_ + 1);

  for (int k = 1; k <= m.order_; ++k) {
    skip_blank();
    const std::string header = "\\" + std::to_string(k) + "-grams:";
    if (i >= lines.size() || lines[i] != header) {
      throw Error("ARPA parse error: expected " + header);
    }
    ++i;
    m.tables_[k].reserve(expected[k - 1]);
    while (i < lines.size() && !lines[i].empty() && lines[i][0] != '\\') {
      const std::string& l = lines[i];
      const std::size_t tab1 = l.find('\t');
      if (tab1 == std::string::npos) {
        throw Error("ARPA parse error: missing tab on line " +
                    std::to_string(i + 1));
      }
      const std::size_t tab2 = l.find('\t', tab1 + 1);
      Entry e;
      e.ln_prob = std::stod(l.substr(0, tab1)) * kLn10;
      const std::string gram =
          tab2 == std::string::npos ? l.substr(tab1 + 1)
                                    : l.substr(tab1 + 1, tab2 - tab1 - 1);
      if (tab2 != std::string::npos) {
        e.ln_backoff = std::stod(l.substr(tab2 + 1)) * kLn10;
      }
      NgramKey key;
      std::size_t start = 0;
      while (start <= gram.size()) {
        std::size_t sp = gram.find(' ', start);
        if (sp == std::string::npos) sp = gram.size();
        if (key.len >= kMaxOrder) throw Error("ARPA parse error: gram too long");
        key.w[key.len++] = m.vocab_.add(gram.substr(start, sp - start));
        if (sp == gram.size()) break;
        start = sp + 1;
      }
      if (key.len != k) {
        throw Error("ARPA parse error: " + std::to_string(k) +
                    "-gram with wrong word count on line " +
                    std::to_string(i + 1));
      }
      m.tables_[k].emplace(key, e);
      ++i;
    }
    if (m.tables_[k].size() != expected[k - 1]) {
      throw Error("ARPA parse error: order " + std::to_string(k) + " lists " +
                  std::to_string(m.tables_[k].size()) + " grams, header said " +
                  std::to_string(expected[k - 1]));
    }
  }
  skip_blank();
  if (i >= lines.size() || lines[i] != "\\end\\") {
    throw Error("ARPA parse error: missing \\end\\");
  }
  return m;
}

ArpaModel ArpaModel::load_arpa(const std::string& path) {
  return from_arpa_text(read_file(path));
}

double ArpaModel::prob(WordId w, std::span<const WordId> context) const {
  const auto max_ctx = static_cast<std::size_t>(order_ - 1);
  if (context.size() > max_ctx) {
    context = context.subspan(context.size() - max_ctx);
  }
  double backoff = 1.0;
  while (true) {
    NgramKey full = NgramKey::of(context);
    full.w[full.len] = w;
    full.len = static_cast<std::uint8_t>(full.len + 1);
    const auto& table = tables_[full.len];
    if (auto it = table.find(full); it != table.end()) {
      return backoff * std::exp(it->second.ln_prob);
    }
    if (context.empty()) {
      // Unigram miss: score as <unk>.
      NgramKey unk;
      unk.len = 1;
      unk.w[0] = kUnkId;
      auto it = tables_[1].find(unk);
      if (it == tables_[1].end()) throw Error("ARPA model lacks <unk>");
      return backoff * std::exp(it->second.ln_prob);
    }
    const NgramKey ctx_key = NgramKey::of(context);
    const auto& ctx_table = tables_[ctx_key.len];
    if (auto it = ctx_table.find(ctx_key); it != ctx_table.end()) {
      backoff *= std::exp(it->second.ln_backoff);
    }
    context = context.subspan(1);
  }
}

double ArpaModel::logprob_word(WordId w,
                               std::span<const WordId> context) const {
  return std::log(prob(w, context));
}

double ArpaModel::sequence_logprob(std::span<const WordId> tokens, bool bos,
                                   bool eos) const {
  std::vector<WordId> history;
  history.reserve(tokens.size() + 2);
  if (bos) history.push_back(vocab_.id(kBosToken));
  double total = 0.0;
  for (WordId w : tokens) {
    total += logprob_word(w, history);
    history.push_back(w);
  }
  if (eos) total += logprob_word(vocab_.id(kEosToken), history);
  return total;
}

EvalReport ArpaModel::perplexity(const TokenStream& test,
                                 bool score_eos) const {
  return evaluate_perplexity(*this, test, score_eos);
}

namespace {

template <typename T>
void put(std::string& out, const T& v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::string_view in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw Error("binary model truncated");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

void ArpaModel::save_binary(const std::string& path) const {
  // Little-endian host layout; the loader checks the magic/version header.
  // Entries are sorted by id sequence so equal models serialize to equal
  // bytes.
  std::string out;
  out.append(kBinaryMagic, sizeof(kBinaryMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(order_));
  put<std::uint64_t>(out, vocab_.size());
  for (WordId id = 0; id < vocab_.size(); ++id) {
    const std::string& tok = vocab_.token(id);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(tok.size()));
    out += tok;
  }
  for (int k = 1; k <= order_; ++k) {
    put<std::uint64_t>(out, tables_[k].size());
    std::vector<const std::pair<const NgramKey, Entry>*> items;
    items.reserve(tables_[k].size());
    for (const auto& kv : tables_[k]) items.push_back(&kv);
    std::sort(items.begin(), items.end(), [](const auto* a, const auto* b) {
      return std::lexicographical_compare(
          a->first.w.begin(), a->first.w.begin() + a->first.len,
          b->first.w.begin(), b->first.w.begin() + b->first.len);
    });
    for (const auto* kv : items) {
      for (std::uint8_t i = 0; i < kv->first.len; ++i) {
        put<WordId>(out, kv->first.w[i]);
      }
      put<double>(out, kv->second.ln_prob);
      put<double>(out, kv->second.ln_backoff);
    }
  }
  write_file(path, out);
}

ArpaModel ArpaModel::load_binary(const std::string& path) {
  const std::string data = read_file(path);
  if (data.size() < sizeof(kBinaryMagic) ||
      std::memcmp(data.data(), kBinaryMagic, sizeof(kBinaryMagic)) != 0) {
    throw Error("not a rasm binary model: " + path);
  }
  std::size_t pos = sizeof(kBinaryMagic);
  ArpaModel m;
  m.order_ = static_cast<int>(get<std::uint32_t>(data, pos));
  if (m.order_ < 1 || m.order_ > kMaxOrder) {
    throw Error("binary model has invalid order");
  }
  const auto vocab_size = get<std::uint64_t>(data, pos);
  for (std::uint64_t i = 0; i < vocab_size; ++i) {
    const auto len = get<std::uint32_t>(data, pos);
    if (pos + len > data.size()) throw Error("binary model truncated");
    m.vocab_.add(std::string_view(data.data() + pos, len));
    pos += len;
  }
  m.tables_.resize(m.order_ + 1);
  for (int k = 1; k <= m.order_; ++k) {
    const auto n = get<std::uint64_t>(data, pos);
    m.tables_[k].reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      NgramKey key;
      key.len = static_cast<std::uint8_t>(k);
      for (int j = 0; j < k; ++j) key.w[j] = get<WordId>(data, pos);
      Entry e;
      e.ln_prob = get<double>(data, pos);
      e.ln_backoff = get<double>(data, pos);
      m.tables_[k].emplace(key, e);
    }
  }
  return m;
}

ArpaModel ArpaModel::load(const std::string& path) {
  const std::string data = read_file(path);
  if (data.size() >= sizeof(kBinaryMagic) &&
      std::memcmp(data.data(), kBinaryMagic, sizeof(kBinaryMagic)) == 0) {
    return load_binary(path);
  }
  return from_arpa_text(data);
}

ArpaModel to_arpa_model(const NgramModel& model) {
  return ArpaModel::from_arpa_text(to_arpa(model));
}

}  // namespace rasm
