#pragma once

#include "kitbit/series.hpp"

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace kitbit {

enum class SeriesSource { Oeis, IqTable, LiteratureTable, User };

struct SeriesRecord {
  std::string id;
  Series series;
  SeriesSource source = SeriesSource::User;
};

struct MalformedLine {
  int line_no = 0;
  std::string reason;
};

struct Corpus {
  std::vector<SeriesRecord> records;
  std::string provenance;
  std::vector<MalformedLine> malformed;
  int dropped_too_short = 0;
  int dropped_all_equal_short = 0;
  int dropped_duplicate = 0;

  size_t size() const { return records.size(); }
  const SeriesRecord& at(size_t i) const { return records.at(i); }
};

namespace detail {

/// Length filter used for bulk ingestion: fewer than three elements is out,
/// and constant series need at least four.
inline bool passes_length_filter(const std::vector<Value>& vals) {
  if (vals.size() < 3) return false;
  if (vals.size() < 4) {
    bool all_equal = true;
    for (size_t i = 1; i < vals.size(); ++i)
      if (vals[i] != vals[0]) all_equal = false;
    if (all_equal) return false;
  }
  return true;
}

inline std::string content_key(const std::vector<Value>& vals) {
  std::string key;
  for (const auto& v : vals) {
    key += v.str();
    key += ',';
  }
  return key;
}

}  // namespace detail

/// Parses the bulk OEIS distribution format: `Axxxxxx ,t1,t2,...,tk,` with
/// `#` comment lines. Malformed lines are collected, never fatal.
inline Corpus parse_stripped(std::istream& in, bool dedup = true) {
  Corpus corpus;
  corpus.provenance = "oeis stripped stream";
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    size_t sp = line.find(' ');
    if (sp == std::string::npos || sp == 0) {
      corpus.malformed.push_back({line_no, "missing id separator"});
      continue;
    }
    std::string id = line.substr(0, sp);
    if (id[0] != 'A') {
      corpus.malformed.push_back({line_no, "id does not start with A"});
      continue;
    }
    std::string rest = line.substr(sp + 1);
    std::vector<Value> vals;
    std::string tok;
    bool bad = false;
    std::istringstream ts(rest);
    while (std::getline(ts, tok, ',')) {
      if (tok.find_first_not_of(" \t\r") == std::string::npos) continue;
      auto v = parse_value(tok);
      if (!v || !v->is_integer()) {
        bad = true;
        break;
      }
      vals.push_back(*v);
    }
    if (bad) {
      corpus.malformed.push_back({line_no, "non-integer term"});
      continue;
    }
    if (vals.size() < 3) {
      ++corpus.dropped_too_short;
      continue;
    }
    if (!detail::passes_length_filter(vals)) {
      ++corpus.dropped_all_equal_short;
      continue;
    }
    if (dedup) {
      std::string key = detail::content_key(vals);
      if (!seen.insert(key).second) {
        ++corpus.dropped_duplicate;
        continue;
      }
    }
    corpus.records.push_back(
        {std::move(id), Series(std::move(vals)), SeriesSource::Oeis});
  }
  return corpus;
}

/// Emits a corpus back in stripped format (round-trips through
/// parse_stripped).
inline std::string emit_stripped(const Corpus& corpus) {
  std::string out;
  for (const auto& rec : corpus.records) {
    out += rec.id;
    out += " ,";
    for (const auto& v : rec.series.elements()) {
      out += v.str();
      out += ',';
    }
    out += '\n';
  }
  return out;
}

enum class UserFormat { Lines, Delimited, Structured };

/// One series per line; integers, fractions and decimals accepted. The
/// structured variant reads `id: terms` records for result joins.
inline Corpus load_user(std::istream& in, UserFormat format = UserFormat::Lines) {
  Corpus corpus;
  corpus.provenance = "user file";
  std::string line;
  int line_no = 0;
  int auto_id = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string id;
    std::string body = line;
    if (format == UserFormat::Structured) {
      size_t colon = line.find(':');
      if (colon == std::string::npos) {
        corpus.malformed.push_back({line_no, "missing id separator"});
        continue;
      }
      id = line.substr(0, colon);
      body = line.substr(colon + 1);
    } else {
      id = "U-" + std::to_string(auto_id);
    }
    auto s = parse_series(body);
    if (!s) {
      corpus.malformed.push_back({line_no, "unparseable series"});
      continue;
    }
    ++auto_id;
    corpus.records.push_back({std::move(id), std::move(*s),
                              SeriesSource::User});
  }
  return corpus;
}

namespace detail {

// Table of 90 number series collected from IQ tests.
inline const char* iq_table_text() {
  return R"(0|0, 1, 1.7071, 2.3660, 3, 3.6180, 4.2247, 4.8229
1|2, 16, 4, 256, 16, 65536, 256, 4294967296, 65536
2|3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597, 2584
3|1, 3, 7, 12, 18, 26, 35, 45, 57, 70, 84, 100, 117, 135
4|0, 3, 12, 17, 102, 109, 872, 881
5|0, 3, 8, 24, 63, 168, 440, 1155, 3024, 7920
6|1, 3, 6, 10, 15, 21, 28, 36
7|1, 0, -1, 0, 1, 0, -1, 0, 1
8|1, 3, 5, 7, 9, 11, 13, 15, 17
9|1, 2, 4, 7, 11, 16, 22, 29
10|1, 4, 9, 16, 25, 36, 49, 64, 81
11|3, 5, 10, 12, 24, 26, 52, 54, 108
12|3, 4, 8, 17, 33, 58, 94, 143
13|3, 6, 18, 72, 360, 2160, 15120, 120960
14|4, 5, 8, 13, 20, 29, 40, 53
15|5, 11, 17, 23, 29, 35, 41
16|11, 9, 7, 5, 3, 1, -1, -3
17|30, 29, 27, 26, 24, 23, 21, 20, 18, 17, 15
18|144, 121, 100, 81, 64, 49, 36, 25
19|2, 2, 4, 6, 10, 16, 26, 42, 68
20|81, 27, 9, 3, 1, 1/3, 1/9
21|1, 1, 2, 3, 5, 8, 13, 21
22|21, 20, 18, 15, 11, 6, 0
23|8, 6, 7, 5, 6, 4, 5, 3, 4
24|4294967296, 65536, 256, 16, 4, 2
25|3, 7, 14, 24, 37, 53, 72
26|-3, -1, 2, 6, 11, 17, 24
27|-1, 0, 3, 8, 15, 24, 35
28|-9, 2, 12, 21, 29, 36, 42
29|1, 0, 0, 1, 3, 6, 10, 15
30|2, 2, 4, 4, 8, 8, 16, 16, 32, 32, 64, 64, 128, 128, 256, 256
31|8, 6, 4, 3, 1, -1, -2, -4, -6, -7, -9, -11, -12, -14, -16
32|362880, 40320, 5040, 720, 120, 24, 6, 2, 1, 1
33|14, 1, -5.5, -8.75, -10.375, -11.1875, -11.59375
34|-1, -1, 0, 2, 5, 9, 14, 20
35|-2, 3, 1, 4, 5, 9, 14, 23
36|-3, -1, -4, 0, -5, 1, -6, 2, -7
37|-4, -1, -3, 0, -2, 1, -1, 2, 0
38|1, 2, 0, 2, -1, 2, -2, 2, -3
39|1, -1, 0, -3, -1, -5, -2, -7, -3, -9
40|0, 1, 0, -1, 0, 1, 0, -1, 0, 1, 0, -1
41|-2, 0, -3, 1, -4, 2, -5, 3, -6
42|23, 34, 45, 56, 67, 78
43|-4, -3, 0, 5, 12, 21, 32
44|-4, -2, 2, 8, 16, 26, 38
45|6, 4, 0, -6, -14, -24, -36
46|-2, 0, 4, 10, 18, 28, 40
47|-6, -1, 5, 12, 20, 29, 39
48|6400, 1600, 400, 100, 25, 6.25, 1.5625
49|0, 7, 24, 51, 88, 135, 192
50|2, 4, 12, 48, 240, 1440, 10080
51|-10, 12, 44, 86, 138, 200, 272
52|1, 0, 1, 1, 1, 2, 1, 3, 1, 4
53|-1, 2, -2, -4, 8, -32, -256, 8192
54|-10, 0, 15, 35, 60, 90, 125, 165
55|-2, -1, 1, 5, 13, 29, 61, 125
56|-3, -2, 0, 1, 3, 4, 6, 7, 9
57|1, 2, 6, 14, 29, 56, 102, 176, 289
58|0, 1, 2, 8, 29, 80, 181, 357, 638
59|8, 1, 0, -1, -8, -27, -64, -125, -216
60|0, 2, 9, 28, 75, 186, 441, 1016, 2295, 5110, 11253, 24564
61|3, 6, 18, 36, 108, 216, 648, 1296, 3888, 7776, 23328, 46656, 139968
62|2, 3, 5, 9, 17, 33, 65, 129, 257, 513, 1025, 2049, 4097, 8193
63|2, 10, 26, 50, 82, 122, 170, 226, 290, 362, 442, 530, 626
64|4, 1, 0, 1, 4, 9, 16, 25, 36
65|9, 3, 6, 6, 2, 5, 3, 1, 4, 0, 0, 3, -3
66|-9, 1, -5, 3, -4, 2, -6, -2, -11, -9
67|97.5, 57, 30, 12, 0, -8, -13.333
68|6, 4, 3, 3, 2, 2, 3, 1, 6, 0, 11, -1
69|7, 16, 52, 196, 772, 3076, 12292
70|2, 3, 5, 4, 2, 4, 7, 5, 2, 5, 9, 6, 2, 6, 11, 7, 2
71|8, 0, 2, 0, 0, 0, 2, 0, 8, 0, 18, 0
72|3, 0, 1, -1, -2, -5, -9, -16
73|1, 0, -1, -1, -2, -1, -3, -4, -1, -5
74|3, 9, 22.5, 45, 67.5, 67.5, 33.75, 0
75|0, 2, 9, 24, 50, 90, 147, 224
76|3, 8, 16, 28, 45, 68, 98, 136
77|0, 0, 4, 5, 14, 16, 30, 33, 52, 56
78|0, 8, 15, 35, 48, 80, 99, 143, 168, 224
79|4, 32, 108, 256, 500, 864, 1372, 2048
80|0, 17, 74, 195, 404, 725, 1182, 1799
81|6, 24, 60, 120, 210, 336, 504, 720
82|3, 6, 15, 42, 123, 366, 1095, 3282
83|23, 31, 53, 83, 135, 217, 351, 567
84|2, 6, 19, 53, 126, 262, 491, 849, 1378
85|1, 2, 5, 9, 16, 27, 45, 74
86|0, 2, 6, 12, 20, 30, 42, 56, 72, 90, 110, 132
87|3, 5, 8, 12, 17, 23, 30, 38
88|5, 8, 20, 68, 260, 1028, 4100
89|-6, -4, 0, 2, 6, 8, 12, 14, 18)";
}

// Table of 67 series collected from earlier sequence-solving publications.
inline const char* literature_table_text() {
  return R"(0|5, 9, 35, 125, 345, 785, 1559, 2805, 4685
1|2, 5, 11, 21, 37, 63, 107
2|6, 288, 884736, 173946175488, 2188749418902061056
3|1, 2, 8, 48, 384, 3840
4|5, 13, 35, 97, 275, 793, 2315, 6817
5|12, 44, 144, 432, 1216, 3264, 8448, 21248
6|1, 2, 3, 4, 5
7|1, 4, 9, 16
8|1, 3, 9, 27
9|0, 1, 1, 2, 3, 5, 8, 13
10|1, 2, 4, 8, 16
11|12, 15, 8, 11, 4, 7, 0, 3
12|148, 84, 52, 36, 28, 24, 22
13|2, 12, 21, 29, 36, 42, 47, 51
14|2, 3, 5, 9, 17, 33, 65, 129
15|2, 5, 8, 11, 14, 17, 20, 23
16|2, 5, 9, 19, 37, 75, 149, 299
17|25, 22, 19, 16, 13, 10, 7, 4
18|28, 33, 31, 36, 34, 39, 37
19|3, 6, 12, 24, 48, 96, 192
20|3, 7, 15, 31, 63, 127, 255
21|4, 11, 15, 26, 41, 67, 108
22|5, 6, 7, 8, 10, 11, 14, 15
23|54, 48, 42, 36, 30, 24, 18
24|6, 8, 5, 7, 4, 6, 3, 5
25|6, 9, 18, 21, 42, 45, 90, 93
26|7, 10, 9, 12, 11, 14, 13, 16
27|8, 10, 14, 18, 26, 34, 50, 66
28|8, 12, 10, 16, 12, 20, 14, 24
29|8, 12, 16, 20, 24, 28, 32, 36
30|9, 20, 6, 17, 3, 14, 0, 11
31|0, 1, 4, 9
32|0, 2, 4, 6
33|1, 1, 2, 3, 5
34|0, 1, 2, 1, 4, 1
35|0, 0, 1, 1, 0, 0, 1, 1
36|0, 1, 3, 7
37|1, 2, 2, 3, 3, 3, 4, 4, 4, 4
38|1, 4, 7, 10, 13, 16, 19, 22
39|2, 4, 3, 5, 4, 6, 5, 7
40|4, 11, 15, 26, 41, 67, 108, 175
41|5, 6, 12, 19, 32, 52, 85, 138
42|8, 10, 14, 18, 26, 34, 50, 66
43|1, 2, 2, 3, 3, 3, 4, 4, 4, 4, 5
44|2, 2, 4, 8, 32, 256
45|2, 3, 5, 8, 13, 21, 34
46|1, 2, 1, 3, 1, 4, 1, 5
47|5, 10, 1, 2, 22, 44, 3, 6, 7, 14
48|0, 1, 4, 9, 16
49|1, 4, 9, 16, 25
50|4, 7, 12, 20, 32
51|4, 7, 12, 20, 33
52|7, 11, 15, 19, 23
53|0, 2, 4, 6, 8, 10
54|3, 6, 17, 66, 327
55|1, 1, 2, 6, 24, 120, 720, 5040, 40320
56|2, 5, 8, 11, 14, 17
57|3, 6, 12, 24, 48
58|1, 2, 3, 5, 8, 13, 21, 34, 55
59|1, 1, 2, 6, 24, 120
60|1, 2, 3, 4
61|3, 2, 1, 0
62|1, 11, 111, 1111
63|1, 44, 1, 27, 1, 92
64|1, 39, 1, 35, 1, 28
65|1, 1, 7, 1
66|46, 147, 9, 1, 1, 1)";
}

inline Corpus parse_indexed_table(const char* text, const char* prefix,
                                  SeriesSource source,
                                  const char* provenance) {
  Corpus corpus;
  corpus.provenance = provenance;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t bar = line.find('|');
    std::string idx = line.substr(0, bar);
    auto s = parse_series(line.substr(bar + 1));
    corpus.records.push_back(
        {std::string(prefix) + idx, std::move(*s), source});
  }
  return corpus;
}

}  // namespace detail

inline const Corpus& builtin_iq() {
  static Corpus corpus = detail::parse_indexed_table(
      detail::iq_table_text(), "IQ-", SeriesSource::IqTable,
      "embedded IQ-test corpus (90 series)");
  return corpus;
}

inline const Corpus& builtin_literature() {
  static Corpus corpus = detail::parse_indexed_table(
      detail::literature_table_text(), "LIT-", SeriesSource::LiteratureTable,
      "embedded literature corpus (67 series)");
  return corpus;
}

}  // namespace kitbit
