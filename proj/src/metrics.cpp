// Copyright 2026 The mateval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mateval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace mateval {

namespace {

// Decodes UTF-8 into scalar values. A byte that does not start a valid
// sequence is mapped into the low-surrogate range so that it stays distinct
// from every real scalar value.
std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(0xDC00 + b0);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

double point_distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double label_distance(std::string_view a, std::string_view b) {
  return normalized_levenshtein(a, b);
}

}  // namespace

HeaderPair make_header_pair(const Curve& curve) {
  HeaderPair h;
  h.x_label = normalize_field(curve.x_header).value_or("");
  h.y_label = normalize_field(curve.y_header).value_or("");
  h.joined = h.y_label.empty() ? h.x_label : h.x_label + "|" + h.y_label;
  return h;
}

std::size_t utf8_length(std::string_view s) { return decode_utf8(s).size(); }

std::size_t levenshtein(std::string_view a, std::string_view b) {
  const std::u32string from = decode_utf8(a);
  const std::u32string to = decode_utf8(b);
  const std::size_t m = from.size();
  const std::size_t n = to.size();
  std::vector<std::size_t> column(m + 1);
  std::iota(column.begin(), column.end(), std::size_t{0});
  for (std::size_t x = 1; x <= n; ++x) {
    std::size_t diagonal = column[0];
    column[0] = x;
    for (std::size_t y = 1; y <= m; ++y) {
      const std::size_t above = column[y];
      column[y] = std::min({column[y] + 1, column[y - 1] + 1,
                            diagonal + (from[y - 1] == to[x - 1] ? 0 : 1)});
      diagonal = above;
    }
  }
  return column[m];
}

double normalized_levenshtein(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(utf8_length(a), utf8_length(b));
  if (longest == 0) return 0.0;
  const double d = static_cast<double>(levenshtein(a, b));
  return std::min(1.0, d / static_cast<double>(longest));
}

double discrete_frechet(std::span<const Point> p, std::span<const Point> q) {
  if (p.empty() || q.empty()) {
    throw ContractError("discrete_frechet: empty point sequence");
  }
  // Rolling rows of the coupling table: ca[i][j] is the Fréchet distance
  // between the prefixes p[0..i] and q[0..j].
  const std::size_t m = q.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = point_distance(p[i], q[j]);
      double reach;
      if (i == 0 && j == 0) {
        reach = d;
      } else if (i == 0) {
        reach = std::max(cur[j - 1], d);
      } else if (j == 0) {
        reach = std::max(prev[0], d);
      } else {
        reach = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), d);
      }
      cur[j] = reach;
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

double curve_norm(std::span<const Point> c, CurveNorm mode) {
  if (c.empty()) throw ContractError("curve_norm: empty point sequence");
  if (mode == CurveNorm::kBoundingBox) {
    double min_x = c[0].x, max_x = c[0].x, min_y = c[0].y, max_y = c[0].y;
    for (const Point& p : c) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
    return std::hypot(max_x - min_x, max_y - min_y);
  }
  double sum = 0.0;
  for (const Point& p : c) sum += p.x * p.x + p.y * p.y;
  return std::sqrt(sum);
}

double normalized_frechet(std::span<const Point> pred,
                          std::span<const Point> truth, CurveNorm mode) {
  if (truth.empty()) {
    throw ContractError("normalized_frechet: empty ground-truth curve");
  }
  if (pred.empty()) return 1.0;
  const double d = discrete_frechet(pred, truth);
  const double norm = curve_norm(truth, mode);
  if (norm == 0.0) return d == 0.0 ? 0.0 : 1.0;
  return std::min(1.0, d / norm);
}

double header_factor(const Curve& pred, const Curve& truth,
                     const MetricOptions& opts) {
  const HeaderPair p = make_header_pair(pred);
  const HeaderPair t = make_header_pair(truth);
  double nl;
  if (opts.header_join == HeaderJoin::kMean) {
    nl = 0.5 * (label_distance(p.x_label, t.x_label) +
                label_distance(p.y_label, t.y_label));
  } else {
    nl = label_distance(p.joined, t.joined);
  }
  return std::clamp(1.0 - nl, 0.0, 1.0);
}

double curve_factor(const Curve& pred, const Curve& truth,
                    const MetricOptions& opts) {
  if (truth.points.empty()) return pred.points.empty() ? 1.0 : 0.0;
  return std::clamp(
      1.0 - normalized_frechet(pred.points, truth.points, opts.curve_norm), 0.0,
      1.0);
}

ScoreBreakdown css(const Curve& pred, const Curve& truth,
                   const MetricOptions& opts) {
  ScoreBreakdown out;
  out.header_factor = header_factor(pred, truth, opts);
  out.curve_factor = curve_factor(pred, truth, opts);
  out.css = std::clamp(out.header_factor * out.curve_factor, 0.0, 1.0);
  return out;
}

}  // namespace mateval
