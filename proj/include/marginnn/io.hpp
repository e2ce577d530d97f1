// Copyright 2026 The marginnn Authors
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

// File formats: labeled samples (CSV or JSON), bare point lists, condensed
// models (JSON), SRM traces and predictions (CSV).
//
// CSV output follows RFC 4180 (CRLF record separators); input accepts LF or
// CRLF. Doubles are written with 17 significant digits, so every value
// round-trips bit-exactly.

#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "marginnn/condense.hpp"
#include "marginnn/error.hpp"
#include "marginnn/metric.hpp"
#include "marginnn/srm.hpp"

namespace marginnn::io {

inline constexpr std::string_view kCrlf = "\r\n";

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::optional<double> parse_number(std::string_view field) {
  const std::string text(trim(field));
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Numeric rows of a CSV text; a first row with any non-numeric field is a header.
inline std::vector<std::vector<double>> numeric_rows(std::string_view text,
                                                     const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool first = true;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (trim(line).empty()) {
      if (nl == text.size()) break;
      continue;
    }
    std::vector<double> row;
    bool numeric = true;
    for (auto field : split(line)) {
      auto v = parse_number(field);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw InputError(what + ": non-numeric field on line " + std::to_string(line_no));
    }
    first = false;
    for (double v : row) {
      if (!std::isfinite(v)) throw InputError(what + ": non-finite value on line " + std::to_string(line_no));
    }
    if (!rows.empty() && rows.front().size() != row.size()) {
      throw InputError(what + ": inconsistent column count on line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
    if (nl == text.size()) break;
  }
  return rows;
}

inline Label parse_label(double v, const std::string& where) {
  if (v == 1.0) return Label::Plus;
  if (v == -1.0) return Label::Minus;
  throw InputError(where + ": label must be -1 or 1, got " + format_double(v));
}

}  // namespace detail

/// CSV with columns x1..xd,label (header optional).
inline std::vector<LabeledPoint> parse_sample_csv(std::string_view text) {
  const auto rows = detail::numeric_rows(text, "sample CSV");
  std::vector<LabeledPoint> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 2) throw InputError("sample CSV: need at least one coordinate and a label");
    Point x(row.begin(), row.end() - 1);
    out.push_back({std::move(x), detail::parse_label(row.back(), "sample CSV row " + std::to_string(r + 1))});
  }
  return out;
}

/// JSON array of [[coords...], label].
inline std::vector<LabeledPoint> parse_sample_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("sample JSON: ") + e.what());
  }
  if (!doc.is_array()) throw InputError("sample JSON: expected an array of [[coords...], label]");
  std::vector<LabeledPoint> out;
  std::size_t dim = 0;
  for (std::size_t r = 0; r < doc.size(); ++r) {
    const auto& item = doc[r];
    const std::string where = "sample JSON item " + std::to_string(r);
    if (!item.is_array() || item.size() != 2 || !item[0].is_array() || !item[1].is_number()) {
      throw InputError(where + ": expected [[coords...], label]");
    }
    Point x;
    for (const auto& c : item[0]) {
      if (!c.is_number()) throw InputError(where + ": non-numeric coordinate");
      x.push_back(c.get<double>());
      if (!std::isfinite(x.back())) throw InputError(where + ": non-finite coordinate");
    }
    if (x.empty()) throw InputError(where + ": empty point");
    if (r == 0) dim = x.size();
    if (x.size() != dim) throw InputError(where + ": inconsistent dimensionality");
    out.push_back({std::move(x), detail::parse_label(item[1].get<double>(), where)});
  }
  return out;
}

/// Dispatches on the first non-space character: '[' or '{' means JSON.
inline std::vector<LabeledPoint> parse_sample(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && (text[first] == '[' || text[first] == '{')) {
    return parse_sample_json(text);
  }
  return parse_sample_csv(text);
}

inline std::vector<LabeledPoint> load_sample(const std::string& path) {
  return parse_sample(read_file(path));
}

/// CSV of bare points x1..xd (header optional).
inline std::vector<Point> parse_points_csv(std::string_view text) {
  auto rows = detail::numeric_rows(text, "points CSV");
  return {std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end())};
}

inline std::string sample_csv(const LabeledSample& s) {
  std::string out;
  for (std::size_t k = 0; k < s.dim(); ++k) out += "x" + std::to_string(k + 1) + ",";
  out += "label";
  out += kCrlf;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (double c : s.point(i)) out += format_double(c) + ",";
    out += std::to_string(to_int(s.label(i)));
    out += kCrlf;
  }
  return out;
}

/// {gamma, scale, exact, points: [[coords...], label], removed_count, n}.
inline std::string model_json(const CondensedModel& m) {
  if (!m.subsample.metric().is_euclidean()) {
    throw ModelError("only Euclidean models can be serialized");
  }
  std::string out = "{\n";
  out += "  \"gamma\": " + format_double(m.gamma) + ",\n";
  out += "  \"scale\": " + format_double(m.scale()) + ",\n";
  out += std::string("  \"exact\": ") + (m.exact ? "true" : "false") + ",\n";
  out += "  \"ddim\": " + format_double(m.subsample.metric().ddim()) + ",\n";
  out += "  \"dim\": " + std::to_string(m.subsample.dim()) + ",\n";
  out += "  \"points\": [";
  for (std::size_t i = 0; i < m.subsample.size(); ++i) {
    out += i == 0 ? "\n    [[" : ",\n    [[";
    const auto p = m.subsample.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) out += (k ? ", " : "") + format_double(p[k]);
    out += "], " + std::to_string(to_int(m.subsample.label(i))) + "]";
  }
  out += m.subsample.empty() ? "],\n" : "\n  ],\n";
  out += "  \"removed_count\": " + std::to_string(m.removed_count) + ",\n";
  out += "  \"n\": " + std::to_string(m.n) + "\n}\n";
  return out;
}

inline CondensedModel parse_model_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model JSON: ") + e.what());
  }
  try {
    CondensedModel m;
    m.gamma = doc.at("gamma").get<double>();
    const double scale = doc.at("scale").get<double>();
    m.exact = doc.at("exact").get<bool>();
    m.removed_count = doc.at("removed_count").get<std::size_t>();
    m.n = doc.at("n").get<std::size_t>();
    const auto& pts = doc.at("points");
    std::size_t dim = doc.contains("dim") ? doc.at("dim").get<std::size_t>() : 0;
    std::vector<LabeledPoint> raw;
    for (const auto& item : pts) {
      Point x = item.at(0).get<std::vector<double>>();
      raw.push_back({std::move(x), detail::parse_label(item.at(1).get<double>(), "model point")});
    }
    if (!raw.empty()) dim = raw.front().x.size();
    const double ddim = doc.contains("ddim") ? doc.at("ddim").get<double>()
                                             : static_cast<double>(std::max<std::size_t>(dim, 1));
    if (!(m.gamma > 0.0)) throw InputError("model JSON: gamma must be positive");
    if (m.removed_count + raw.size() != m.n) {
      throw InputError("model JSON: removed_count + |points| must equal n");
    }
    m.subsample = raw.empty()
                      ? LabeledSample(dim, {}, {}, MetricSpec::euclidean(ddim), scale)
                      : LabeledSample::from_points(raw, MetricSpec::euclidean(ddim), scale);
    m.retained.clear();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model JSON: ") + e.what());
  }
}

/// gamma,removed,empirical,penalty,objective,chosen
inline std::string trace_csv(const SrmTrace& t) {
  std::string out = "gamma,removed,empirical,penalty,objective,chosen";
  out += kCrlf;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& r = t.rows[k];
    out += format_double(r.gamma) + "," + std::to_string(r.removed) + "," +
           format_double(r.empirical) + "," + format_double(r.penalty) + "," +
           format_double(r.objective) + "," + (t.chosen_index == k ? "1" : "0");
    out += kCrlf;
  }
  return out;
}

}  // namespace marginnn::io
