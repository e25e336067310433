#pragma once

// Straightforward reference implementations used to check the optimized code.
// They follow the metric definitions literally and favour clarity over speed.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace oracle {

using Tokens = std::vector<std::string>;

inline Tokens tokenize(const std::string& text) {
  Tokens out;
  std::string cur;
  for (unsigned char c : text) {
    const bool punct = c < 0x80 && std::ispunct(c);
    const bool space = std::isspace(c) != 0;
    if (space || punct) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
      if (punct) out.push_back(std::string(1, static_cast<char>(c)));
    } else {
      cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::multiset<std::string> ngrams(const Tokens& t, std::size_t n) {
  std::multiset<std::string> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) {
    std::string g;
    for (std::size_t k = 0; k < n; ++k) g += t[i + k] + '\x1f';
    out.insert(g);
  }
  return out;
}

struct Precision {
  double matches;
  double total;
};

inline std::vector<Precision> clipped(const Tokens& c, const Tokens& r) {
  std::vector<Precision> p;
  for (std::size_t n = 1; n <= 4; ++n) {
    auto cg = ngrams(c, n);
    auto rg = ngrams(r, n);
    double m = 0;
    for (auto it = cg.begin(); it != cg.end(); it = cg.upper_bound(*it)) {
      m += static_cast<double>(std::min(cg.count(*it), rg.count(*it)));
    }
    p.push_back({m, static_cast<double>(cg.size())});
  }
  return p;
}

inline double bp(const Tokens& c, const Tokens& r) {
  if (c.empty()) return 0.0;
  if (c.size() >= r.size()) return 1.0;
  return std::exp(1.0 - static_cast<double>(r.size()) / static_cast<double>(c.size()));
}

inline double bleu_cn(const Tokens& c, const Tokens& r) {
  if (c.empty()) return 0.0;
  auto p = clipped(c, r);
  if (p[0].matches == 0) return 0.0;
  double prod = p[0].matches / p[0].total;
  for (int n = 1; n < 4; ++n) prod *= (p[n].matches + 1.0) / (p[n].total + 1.0);
  return bp(c, r) * std::pow(prod, 0.25);
}

inline double bleu_dc(const Tokens& c, const Tokens& r) {
  if (c.empty()) return 0.0;
  auto p = clipped(c, r);
  double prod = 1.0;
  int zeros = 0;
  for (int n = 0; n < 4; ++n) {
    if (p[n].total == 0) continue;
    if (p[n].matches == 0) {
      ++zeros;
      prod *= 1.0 / (std::pow(2.0, zeros) * p[n].total);
    } else {
      prod *= p[n].matches / p[n].total;
    }
  }
  return bp(c, r) * std::pow(prod, 0.25);
}

inline std::size_t lcs(const Tokens& a, const Tokens& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size() || j == b.size()) return 0;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t v = a[i] == b[j] ? 1 + go(i + 1, j + 1) : std::max(go(i + 1, j), go(i, j + 1));
    memo[key] = v;
    return v;
  };
  return go(0, 0);
}

// Enumerates every one-to-one exact alignment; keeps the most matches, then
// the fewest chunks. Exponential, so only for short sentences.
inline std::pair<std::size_t, std::size_t> meteor_alignment(const Tokens& c, const Tokens& r) {
  std::size_t best_m = 0, best_chunks = 0;
  std::vector<int> link(c.size(), -1);
  std::vector<bool> used(r.size(), false);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == c.size()) {
      std::size_t m = 0, chunks = 0;
      int prev_c = -2, prev_r = -2;
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (link[k] < 0) continue;
        ++m;
        if (!(static_cast<int>(k) == prev_c + 1 && link[k] == prev_r + 1)) ++chunks;
        prev_c = static_cast<int>(k);
        prev_r = link[k];
      }
      if (m > best_m || (m == best_m && chunks < best_chunks)) {
        best_m = m;
        best_chunks = chunks;
      }
      return;
    }
    go(i + 1);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (used[j] || c[i] != r[j]) continue;
      used[j] = true;
      link[i] = static_cast<int>(j);
      go(i + 1);
      link[i] = -1;
      used[j] = false;
    }
  };
  go(0);
  return {best_m, best_chunks};
}

inline double meteor(const Tokens& c, const Tokens& r) {
  if (c.empty() || r.empty()) return 0.0;
  auto [m, chunks] = meteor_alignment(c, r);
  if (m == 0) return 0.0;
  const double P = static_cast<double>(m) / static_cast<double>(c.size());
  const double R = static_cast<double>(m) / static_cast<double>(r.size());
  const double f = P * R / (0.9 * P + 0.1 * R);
  const double frag = static_cast<double>(chunks) / static_cast<double>(m);
  return f * (1.0 - 0.5 * frag * frag * frag);
}

// BM25 recomputed from raw token lists for every call.
struct Bm25 {
  std::vector<std::pair<std::string, Tokens>> docs;
  double k1 = 1.2, b = 0.75;

  double score(const Tokens& query, std::size_t d) const {
    const double N = static_cast<double>(docs.size());
    double total_len = 0;
    for (const auto& [id, t] : docs) total_len += static_cast<double>(t.size());
    const double avg = total_len / N;
    std::set<std::string> terms(query.begin(), query.end());
    double s = 0;
    for (const auto& term : terms) {
      double df = 0;
      for (const auto& [id, t] : docs) df += std::count(t.begin(), t.end(), term) > 0 ? 1 : 0;
      const double tf = static_cast<double>(std::count(docs[d].second.begin(), docs[d].second.end(), term));
      if (tf == 0) continue;
      const double idf = std::log((N - df + 0.5) / (df + 0.5) + 1.0);
      const double len = static_cast<double>(docs[d].second.size());
      s += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * len / avg));
    }
    return s;
  }

  std::vector<std::string> top_k(const Tokens& query, std::size_t k, const std::set<std::string>& exclude = {}) const {
    std::vector<std::pair<double, std::string>> all;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (exclude.count(docs[d].first)) continue;
      all.emplace_back(score(query, d), docs[d].first);
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(all[i].second);
    return out;
  }
};

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

// Welch one-sided p-value through Boost's Student t distribution.
inline double welch_p(const std::vector<double>& a, const std::vector<double>& b) {
  const double va = variance(a) / static_cast<double>(a.size());
  const double vb = variance(b) / static_cast<double>(b.size());
  const double t = (mean(a) - mean(b)) / std::sqrt(va + vb);
  const double df = (va + vb) * (va + vb) /
                    (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  boost::math::students_t dist(df);
  return boost::math::cdf(boost::math::complement(dist, t));
}

// D+ by scanning a fine set of evaluation points, including every sample.
inline double ks_dplus(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> points(a);
  points.insert(points.end(), b.begin(), b.end());
  double d = 0;
  for (double x : points) {
    double fa = 0, fb = 0;
    for (double v : a) fa += v <= x ? 1 : 0;
    for (double v : b) fb += v <= x ? 1 : 0;
    d = std::max(d, fb / static_cast<double>(b.size()) - fa / static_cast<double>(a.size()));
  }
  return d;
}

inline double ks_p(const std::vector<double>& a, const std::vector<double>& b) {
  const double d = ks_dplus(a, b);
  const double m = static_cast<double>(a.size()) * static_cast<double>(b.size()) /
                   static_cast<double>(a.size() + b.size());
  return std::min(1.0, std::exp(-2.0 * m * d * d));
}

}  // namespace oracle
