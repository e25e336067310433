#include "jdbench/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "jdbench/common.hpp"
#include "jdbench/gateway.hpp"

namespace jdbench {

SummaryTokens tokenize_summary(std::string_view text) {
  SummaryTokens out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.tokens.push_back(std::move(word));
    word.clear();
  };
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      flush();
    } else if (u < 0x80 && std::ispunct(u)) {
      flush();
      out.tokens.emplace_back(1, c);
    } else {
      word.push_back(u < 0x80 ? static_cast<char>(std::tolower(u)) : c);
    }
  }
  flush();
  return out;
}

// ---------------------------------------------------------------------------
// BLEU

namespace {

constexpr int kMaxOrder = 4;

struct NgramStats {
  std::size_t matches[kMaxOrder] = {};
  std::size_t totals[kMaxOrder] = {};
};

std::map<std::vector<std::string>, std::size_t> ngram_counts(const std::vector<std::string>& toks,
                                                             std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    ++counts[std::vector<std::string>(toks.begin() + static_cast<std::ptrdiff_t>(i),
                                      toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

NgramStats clipped_ngram_stats(const SummaryTokens& cand, const SummaryTokens& ref) {
  NgramStats s;
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    auto c = ngram_counts(cand.tokens, n);
    auto r = ngram_counts(ref.tokens, n);
    for (const auto& [gram, count] : c) {
      s.totals[n - 1] += count;
      auto it = r.find(gram);
      if (it != r.end()) s.matches[n - 1] += std::min(count, it->second);
    }
  }
  return s;
}

double brevity_penalty(std::size_t cand_len, std::size_t ref_len) {
  if (cand_len == 0) return 0.0;
  return std::min(1.0, std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len)));
}

void require_reference(const SummaryTokens& reference) {
  if (reference.tokens.empty()) throw DataError("cannot score against an empty reference");
}

}  // namespace

double bleu_cn(const SummaryTokens& candidate, const SummaryTokens& reference) {
  require_reference(reference);
  if (candidate.tokens.empty()) return 0.0;
  const auto s = clipped_ngram_stats(candidate, reference);
  if (s.matches[0] == 0) return 0.0;
  double log_sum = std::log(static_cast<double>(s.matches[0]) / static_cast<double>(s.totals[0]));
  for (int n = 1; n < kMaxOrder; ++n) {
    log_sum += std::log((static_cast<double>(s.matches[n]) + 1.0) /
                        (static_cast<double>(s.totals[n]) + 1.0));
  }
  return brevity_penalty(candidate.tokens.size(), reference.tokens.size()) *
         std::exp(log_sum / kMaxOrder);
}

double bleu_dc(const SummaryTokens& candidate, const SummaryTokens& reference) {
  require_reference(reference);
  if (candidate.tokens.empty()) return 0.0;
  const auto s = clipped_ngram_stats(candidate, reference);
  double log_sum = 0.0;
  double inverse_scale = 1.0;
  for (int n = 0; n < kMaxOrder; ++n) {
    if (s.totals[n] == 0) continue;  // order longer than the candidate: precision 1
    if (s.matches[n] > 0) {
      log_sum += std::log(static_cast<double>(s.matches[n]) / static_cast<double>(s.totals[n]));
    } else {
      inverse_scale *= 2.0;
      log_sum += std::log(1.0 / (inverse_scale * static_cast<double>(s.totals[n])));
    }
  }
  return brevity_penalty(candidate.tokens.size(), reference.tokens.size()) *
         std::exp(log_sum / kMaxOrder);
}

// ---------------------------------------------------------------------------
// ROUGE-L

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeL rouge_l(const SummaryTokens& candidate, const SummaryTokens& reference,
               ScoreWarnings* warnings) {
  if (candidate.tokens.empty() || reference.tokens.empty()) {
    if (warnings) ++warnings->empty_inputs;
    return {};
  }
  const double l = static_cast<double>(lcs_length(candidate.tokens, reference.tokens));
  return {l / static_cast<double>(candidate.tokens.size()),
          l / static_cast<double>(reference.tokens.size())};
}

// ---------------------------------------------------------------------------
// METEOR

namespace {

// Depth-first search over candidate positions. State: current position, the
// reference position the previous candidate token was linked to (if any) and
// the set of used reference positions restricted to words that still occur
// later in the candidate; everything else cannot influence the future.
class MeteorAligner {
 public:
  MeteorAligner(const std::vector<std::string>& cand, const std::vector<std::string>& ref)
      : cand_(cand), ref_(ref) {
    std::unordered_map<std::string, int> ids;
    auto id_of = [&](const std::string& w) {
      auto [it, inserted] = ids.emplace(w, static_cast<int>(ids.size()));
      return it->second;
    };
    for (const auto& w : ref_) ref_word_.push_back(id_of(w));
    for (const auto& w : cand_) cand_word_.push_back(id_of(w));
    positions_.resize(ids.size());
    for (std::size_t j = 0; j < ref_.size(); ++j) {
      positions_[static_cast<std::size_t>(ref_word_[j])].push_back(j);
    }
    // live_[i][w]: word w occurs in cand[i..]
    live_.assign(cand_.size() + 1, std::vector<bool>(ids.size(), false));
    for (std::size_t i = cand_.size(); i-- > 0;) {
      live_[i] = live_[i + 1];
      live_[i][static_cast<std::size_t>(cand_word_[i])] = true;
    }
  }

  MeteorAlignment solve() {
    std::string used(ref_.size(), '0');
    auto best = search(0, kNoLink, used);
    return {best.matches, best.matches - best.adjacent};
  }

 private:
  static constexpr std::size_t kNoLink = static_cast<std::size_t>(-1);

  struct Value {
    std::size_t matches = 0;
    std::size_t adjacent = 0;
    bool operator<(const Value& o) const {
      return matches != o.matches ? matches < o.matches : adjacent < o.adjacent;
    }
  };

  const std::vector<std::string>& cand_;
  const std::vector<std::string>& ref_;
  std::vector<int> ref_word_;
  std::vector<int> cand_word_;
  std::vector<std::vector<std::size_t>> positions_;
  std::vector<std::vector<bool>> live_;
  std::unordered_map<std::string, Value> memo_;

  Value search(std::size_t i, std::size_t prev, std::string& used) {
    if (i == cand_.size()) return {};
    for (std::size_t j = 0; j < ref_.size(); ++j) {
      if (!live_[i][static_cast<std::size_t>(ref_word_[j])]) used[j] = '0';
    }
    std::string key = std::to_string(i) + ":" + std::to_string(prev) + ":" + used;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::string saved = used;
    Value best = search(i + 1, kNoLink, used);
    used = saved;
    for (std::size_t j : positions_[static_cast<std::size_t>(cand_word_[i])]) {
      if (used[j] == '1') continue;
      used[j] = '1';
      Value v = search(i + 1, j, used);
      used = saved;
      v.matches += 1;
      if (prev != kNoLink && j == prev + 1) v.adjacent += 1;
      if (best < v) best = v;
    }
    memo_.emplace(std::move(key), best);
    return best;
  }
};

}  // namespace

MeteorAlignment meteor_align(const std::vector<std::string>& candidate,
                             const std::vector<std::string>& reference) {
  return MeteorAligner(candidate, reference).solve();
}

double meteor(const SummaryTokens& candidate, const SummaryTokens& reference,
              ScoreWarnings* warnings) {
  if (candidate.tokens.empty() || reference.tokens.empty()) {
    if (warnings) ++warnings->empty_inputs;
    return 0.0;
  }
  const auto a = meteor_align(candidate.tokens, reference.tokens);
  if (a.matches == 0) return 0.0;
  constexpr double kAlpha = 0.9, kBeta = 3.0, kGamma = 0.5;
  const double m = static_cast<double>(a.matches);
  const double p = m / static_cast<double>(candidate.tokens.size());
  const double r = m / static_cast<double>(reference.tokens.size());
  const double f = p * r / (kAlpha * p + (1.0 - kAlpha) * r);
  const double penalty = kGamma * std::pow(static_cast<double>(a.chunks) / m, kBeta);
  return f * (1.0 - penalty);
}

// ---------------------------------------------------------------------------
// Embeddings

std::optional<std::vector<double>> HashingEmbedder::embed(std::string_view text) {
  std::vector<double> v(dimension_, 0.0);
  for (const auto& tok : tokenize_summary(text).tokens) {
    const auto h = fnv1a64(tok);
    const auto idx = static_cast<std::size_t>(h % dimension_);
    v[idx] += (h >> 63) ? -1.0 : 1.0;
  }
  return v;
}

HttpEmbedder::HttpEmbedder(EmbedderEndpoint endpoint, std::shared_ptr<HttpTransport> transport)
    : endpoint_(std::move(endpoint)),
      transport_(transport ? std::move(transport) : default_transport()) {}

std::optional<std::vector<double>> HttpEmbedder::embed(std::string_view text) {
  nlohmann::json req = {{"model", endpoint_.model}, {"input", std::string(text)}};
  auto res = transport_->post_json(endpoint_.url, req.dump(), auth_headers(endpoint_.auth_env),
                                   endpoint_.timeout_seconds);
  if (res.status != 200) return std::nullopt;
  try {
    auto j = nlohmann::json::parse(res.body);
    auto v = j.at(nlohmann::json::json_pointer(endpoint_.response_pointer)).get<std::vector<double>>();
    if (v.empty()) return std::nullopt;
    for (double x : v) {
      if (!std::isfinite(x)) return std::nullopt;
    }
    return v;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("embedding dimensions differ");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

std::optional<double> sentence_similarity(std::string_view candidate, std::string_view reference,
                                          Embedder& embedder, ScoreWarnings* warnings) {
  auto a = embedder.embed(candidate);
  auto b = a ? embedder.embed(reference) : std::nullopt;
  if (!a || !b || a->size() != b->size()) {
    if (warnings) ++warnings->embedder_unavailable;
    return std::nullopt;
  }
  return cosine(*a, *b);
}

// ---------------------------------------------------------------------------
// External scorer

ExternalScores parse_external_scores(std::string_view body, ScoreWarnings* warnings) {
  ExternalScores out;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    if (warnings) ++warnings->scorer_failures;
    return out;
  }
  auto read = [&](const char* key) -> std::optional<double> {
    if (!j.is_object() || !j.contains(key) || !j[key].is_number()) {
      if (warnings) ++warnings->scorer_failures;
      return std::nullopt;
    }
    double v = j[key].get<double>();
    if (!std::isfinite(v)) {
      if (warnings) ++warnings->scorer_failures;
      return std::nullopt;
    }
    if (v < 0.0 || v > 1.0) {
      if (warnings) ++warnings->clamped_values;
      v = std::clamp(v, 0.0, 1.0);
    }
    return v;
  };
  out.bert_score = read("bert_score");
  out.bleu_rt = read("bleu_rt");
  return out;
}

HttpExternalScorer::HttpExternalScorer(ScorerEndpoint endpoint,
                                       std::shared_ptr<HttpTransport> transport)
    : endpoint_(std::move(endpoint)),
      transport_(transport ? std::move(transport) : default_transport()) {}

ExternalScores HttpExternalScorer::score(std::string_view candidate, std::string_view reference,
                                         ScoreWarnings* warnings) {
  nlohmann::json req = {{"candidate", std::string(candidate)}, {"reference", std::string(reference)}};
  auto res = transport_->post_json(endpoint_.url, req.dump(), auth_headers(endpoint_.auth_env),
                                   endpoint_.timeout_seconds);
  if (res.status != 200) {
    if (warnings) ++warnings->scorer_failures;
    return {};
  }
  return parse_external_scores(res.body, warnings);
}

ExternalScores external_score(std::string_view candidate, std::string_view reference,
                              ExternalScorer* scorer, ScoreWarnings* warnings) {
  if (!scorer) return {};
  return scorer->score(candidate, reference, warnings);
}

// ---------------------------------------------------------------------------
// Records

std::optional<double> metric_value(const MetricVector& v, std::string_view name) {
  if (name == "bert_score") return v.bert_score;
  if (name == "bleu_dc") return v.bleu_dc;
  if (name == "bleu") return v.bleu;
  if (name == "bleu_rt") return v.bleu_rt;
  if (name == "meteor") return v.meteor;
  if (name == "rouge_prec") return v.rouge_prec;
  if (name == "rouge_rec") return v.rouge_rec;
  if (name == "sent_sim") return v.sent_sim;
  throw std::invalid_argument("unknown metric: " + std::string(name));
}

nlohmann::ordered_json to_json(const MetricVector& v) {
  nlohmann::ordered_json j;
  for (auto name : kMetricNames) {
    auto value = metric_value(v, name);
    j[std::string(name)] = value ? nlohmann::ordered_json(*value) : nlohmann::ordered_json(nullptr);
  }
  return j;
}

MetricVector metric_vector_from_json(const nlohmann::json& j) {
  auto opt = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
  };
  MetricVector v;
  v.bert_score = opt("bert_score");
  v.bleu_dc = j.at("bleu_dc").get<double>();
  v.bleu = j.at("bleu").get<double>();
  v.bleu_rt = opt("bleu_rt");
  v.meteor = j.at("meteor").get<double>();
  v.rouge_prec = j.at("rouge_prec").get<double>();
  v.rouge_rec = j.at("rouge_rec").get<double>();
  v.sent_sim = opt("sent_sim");
  return v;
}

MetricVector score_pair(std::string_view candidate, std::string_view truth,
                        const ScoringProviders& providers) {
  const auto cand = tokenize_summary(candidate);
  const auto ref = tokenize_summary(truth);
  MetricVector v;
  v.bleu = bleu_cn(cand, ref);
  v.bleu_dc = bleu_dc(cand, ref);
  v.meteor = meteor(cand, ref, providers.warnings);
  auto rouge = rouge_l(cand, ref, providers.warnings);
  v.rouge_prec = rouge.precision;
  v.rouge_rec = rouge.recall;
  if (providers.embedder) {
    v.sent_sim = sentence_similarity(candidate, truth, *providers.embedder, providers.warnings);
  }
  auto ext = external_score(candidate, truth, providers.scorer, providers.warnings);
  v.bert_score = ext.bert_score;
  v.bleu_rt = ext.bleu_rt;
  return v;
}

MetricVector score_record(const GenerationRecord& gen, std::string_view truth,
                          const ScoringProviders& providers) {
  if (gen.status != GenerationStatus::Ok) {
    throw DataError("cannot score a failed generation for " + gen.method_id);
  }
  return score_pair(gen.candidate_summary, truth, providers);
}

}  // namespace jdbench
