#pragma once

#include "kitbit/value.hpp"

#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kitbit {

enum class KitaKind {
  BAS,
  DIV,
  RED,
  ML,
  FOC,
  ANA,
  EXP,
  LOG,
  DOP,
  SSYM,
  RSYM,
  DGE,
  DGD,
  SOE,
};

enum class ArithOp { Add, Sub, Mul, Div };

inline char op_char(ArithOp o) {
  switch (o) {
    case ArithOp::Add: return '+';
    case ArithOp::Sub: return '-';
    case ArithOp::Mul: return '*';
    case ArithOp::Div: return '/';
  }
  return '?';
}

inline std::optional<ArithOp> op_from_char(char c) {
  switch (c) {
    case '+': return ArithOp::Add;
    case '-': return ArithOp::Sub;
    case '*': return ArithOp::Mul;
    case 'x': return ArithOp::Mul;
    case '/': return ArithOp::Div;
    default: return std::nullopt;
  }
}

struct KitaInstance {
  KitaKind kind = KitaKind::BAS;
  int red_levels = 0;                // RED
  int ml_dy = 0, ml_dx = 0;          // ML
  int foc_offset = 0;                // FOC s
  std::vector<int> foc_sizes;        // FOC D
  int ana_offset = 0, ana_group = 0; // ANA
  BigRat exp_exponent;               // EXP
  ArithOp dop_first = ArithOp::Add, dop_second = ArithOp::Add;

  static KitaInstance bas() { return {.kind = KitaKind::BAS}; }
  static KitaInstance div() { return {.kind = KitaKind::DIV}; }
  static KitaInstance red(int r) {
    return {.kind = KitaKind::RED, .red_levels = r};
  }
  static KitaInstance ml(int dy, int dx) {
    return {.kind = KitaKind::ML, .ml_dy = dy, .ml_dx = dx};
  }
  static KitaInstance foc(int s, std::vector<int> d) {
    return {.kind = KitaKind::FOC, .foc_offset = s, .foc_sizes = std::move(d)};
  }
  static KitaInstance ana(int s, int e) {
    return {.kind = KitaKind::ANA, .ana_offset = s, .ana_group = e};
  }
  static KitaInstance exp(BigRat e) {
    KitaInstance k;
    k.kind = KitaKind::EXP;
    k.exp_exponent = std::move(e);
    return k;
  }
  static KitaInstance log() { return {.kind = KitaKind::LOG}; }
  static KitaInstance dop(ArithOp a, ArithOp b) {
    return {.kind = KitaKind::DOP, .dop_first = a, .dop_second = b};
  }
  static KitaInstance ssym() { return {.kind = KitaKind::SSYM}; }
  static KitaInstance rsym() { return {.kind = KitaKind::RSYM}; }
  static KitaInstance dge() { return {.kind = KitaKind::DGE}; }
  static KitaInstance dgd() { return {.kind = KitaKind::DGD}; }
  static KitaInstance soe() { return {.kind = KitaKind::SOE}; }

  bool operator==(const KitaInstance& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
      case KitaKind::RED: return red_levels == o.red_levels;
      case KitaKind::ML: return ml_dy == o.ml_dy && ml_dx == o.ml_dx;
      case KitaKind::FOC:
        return foc_offset == o.foc_offset && foc_sizes == o.foc_sizes;
      case KitaKind::ANA:
        return ana_offset == o.ana_offset && ana_group == o.ana_group;
      case KitaKind::EXP: return exp_exponent == o.exp_exponent;
      case KitaKind::DOP:
        return dop_first == o.dop_first && dop_second == o.dop_second;
      default: return true;
    }
  }

  /// One-line config form, e.g. "RED 1", "FOC 0 1,1", "DOP - /".
  std::string serialize() const {
    std::ostringstream os;
    switch (kind) {
      case KitaKind::BAS: os << "BAS"; break;
      case KitaKind::DIV: os << "DIV"; break;
      case KitaKind::RED: os << "RED " << red_levels; break;
      case KitaKind::ML: os << "ML " << ml_dy << " " << ml_dx; break;
      case KitaKind::FOC: {
        os << "FOC " << foc_offset << " ";
        for (size_t i = 0; i < foc_sizes.size(); ++i) {
          if (i) os << ",";
          os << foc_sizes[i];
        }
        break;
      }
      case KitaKind::ANA: os << "ANA " << ana_offset << " " << ana_group; break;
      case KitaKind::EXP: {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        os << "EXP " << numerator(exp_exponent).str();
        if (denominator(exp_exponent) != 1)
          os << "/" << denominator(exp_exponent).str();
        break;
      }
      case KitaKind::LOG: os << "LOG"; break;
      case KitaKind::DOP:
        os << "DOP " << op_char(dop_first) << " " << op_char(dop_second);
        break;
      case KitaKind::SSYM: os << "SSYM"; break;
      case KitaKind::RSYM: os << "RSYM"; break;
      case KitaKind::DGE: os << "DGE"; break;
      case KitaKind::DGD: os << "DGD"; break;
      case KitaKind::SOE: os << "SOE"; break;
    }
    return os.str();
  }

  /// Table-style display form, e.g. "RED(1)", "FOC(0,{1,1})", "BASIC".
  std::string display() const {
    std::ostringstream os;
    switch (kind) {
      case KitaKind::BAS: return "BASIC";
      case KitaKind::DIV: return "DIV";
      case KitaKind::RED: os << "RED(" << red_levels << ")"; break;
      case KitaKind::ML: os << "ML(" << ml_dy << "," << ml_dx << ")"; break;
      case KitaKind::FOC: {
        os << "FOC(" << foc_offset << ",{";
        for (size_t i = 0; i < foc_sizes.size(); ++i) {
          if (i) os << ",";
          os << foc_sizes[i];
        }
        os << "})";
        break;
      }
      case KitaKind::ANA:
        os << "ANA(" << ana_offset << "," << ana_group << ")";
        break;
      case KitaKind::EXP: {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        os << "EXP(" << numerator(exp_exponent).str();
        if (denominator(exp_exponent) != 1)
          os << "/" << denominator(exp_exponent).str();
        os << ")";
        break;
      }
      case KitaKind::LOG: return "LOG";
      case KitaKind::DOP:
        os << "DOP(" << op_char(dop_first) << "," << op_char(dop_second)
           << ")";
        break;
      case KitaKind::SSYM: return "SSYM";
      case KitaKind::RSYM: return "RSYM";
      case KitaKind::DGE: return "DGE";
      case KitaKind::DGD: return "DGD";
      case KitaKind::SOE: return "SOE";
    }
    return os.str();
  }

  static std::optional<KitaInstance> parse(const std::string& line);
};

inline std::optional<KitaInstance> KitaInstance::parse(
    const std::string& line) {
  std::istringstream is(line);
  std::string head;
  if (!(is >> head)) return std::nullopt;
  auto rest_int = [&](int& out) {
    return static_cast<bool>(is >> out);
  };
  if (head == "BAS" || head == "BASIC") return bas();
  if (head == "DIV") return div();
  if (head == "LOG") return log();
  if (head == "SSYM") return ssym();
  if (head == "RSYM") return rsym();
  if (head == "DGE") return dge();
  if (head == "DGD") return dgd();
  if (head == "SOE") return soe();
  if (head == "RED") {
    int r;
    if (!rest_int(r) || r < 1) return std::nullopt;
    return red(r);
  }
  if (head == "ML") {
    int dy, dx;
    if (!rest_int(dy) || !rest_int(dx) || dy < 0 || dx < 0 || dy + dx < 1)
      return std::nullopt;
    return ml(dy, dx);
  }
  if (head == "FOC") {
    int s;
    std::string dstr;
    if (!rest_int(s) || !(is >> dstr) || s < 0) return std::nullopt;
    std::vector<int> d;
    std::istringstream ds(dstr);
    std::string tok;
    while (std::getline(ds, tok, ',')) {
      try {
        int v = std::stoi(tok);
        if (v < 1) return std::nullopt;
        d.push_back(v);
      } catch (...) {
        return std::nullopt;
      }
    }
    if (d.empty()) return std::nullopt;
    return foc(s, std::move(d));
  }
  if (head == "ANA") {
    int s, e;
    if (!rest_int(s) || !rest_int(e) || s < 0 || e < 2) return std::nullopt;
    return ana(s, e);
  }
  if (head == "EXP") {
    std::string estr;
    if (!(is >> estr)) return std::nullopt;
    auto v = parse_value(estr);
    if (!v || !v->is_exact() || v->is_zero()) return std::nullopt;
    return exp(v->rat());
  }
  if (head == "DOP") {
    std::string a, b;
    if (!(is >> a >> b) || a.size() != 1 || b.size() != 1) return std::nullopt;
    auto oa = op_from_char(a[0]);
    auto ob = op_from_char(b[0]);
    if (!oa || !ob) return std::nullopt;
    return dop(*oa, *ob);
  }
  return std::nullopt;
}

enum class CatalogProfile { Iq, OeisDepth2, OeisDeep };

struct Catalog {
  std::string name;
  std::vector<KitaInstance> kitas;

  int rank_of(const KitaInstance& k) const {
    for (size_t i = 0; i < kitas.size(); ++i)
      if (kitas[i] == k) return static_cast<int>(i);
    return static_cast<int>(kitas.size());
  }

  std::string serialize() const {
    std::string s;
    for (const auto& k : kitas) {
      s += k.serialize();
      s += "\n";
    }
    return s;
  }

  static std::optional<Catalog> parse(std::istream& in, std::string name) {
    Catalog c;
    c.name = std::move(name);
    std::string line;
    while (std::getline(in, line)) {
      size_t h = line.find('#');
      if (h != std::string::npos) line = line.substr(0, h);
      bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
      if (blank) continue;
      auto k = KitaInstance::parse(line);
      if (!k) return std::nullopt;
      c.kitas.push_back(*k);
    }
    if (c.kitas.empty() || !(c.kitas.front() == KitaInstance::bas()))
      return std::nullopt;
    return c;
  }
};

inline Catalog default_catalog(CatalogProfile profile) {
  Catalog c;
  auto add = [&](KitaInstance k) { c.kitas.push_back(std::move(k)); };
  add(KitaInstance::bas());
  add(KitaInstance::div());
  switch (profile) {
    case CatalogProfile::Iq:
    case CatalogProfile::OeisDepth2: {
      c.name = profile == CatalogProfile::Iq ? "iq" : "oeis-depth2";
      for (int r = 1; r <= 7; ++r) add(KitaInstance::red(r));
      add(KitaInstance::ml(0, 1));
      add(KitaInstance::ml(1, 1));
      add(KitaInstance::ml(2, 1));
      for (int s = 0; s <= 1; ++s)
        for (int l = 2; l <= 4; ++l)
          add(KitaInstance::foc(s, std::vector<int>(l, 1)));
      for (int e = 2; e <= 5; ++e) add(KitaInstance::ana(0, e));
      add(KitaInstance::exp(BigRat(2)));
      add(KitaInstance::exp(BigRat(3)));
      add(KitaInstance::exp(BigRat(1, 2)));
      add(KitaInstance::exp(BigRat(1, 3)));
      add(KitaInstance::exp(BigRat(1, 4)));
      add(KitaInstance::log());
      const ArithOp ops[4] = {ArithOp::Add, ArithOp::Sub, ArithOp::Mul,
                              ArithOp::Div};
      for (ArithOp a : ops)
        for (ArithOp b : ops)
          if (a != b) add(KitaInstance::dop(a, b));
      add(KitaInstance::ssym());
      add(KitaInstance::rsym());
      add(KitaInstance::dge());
      add(KitaInstance::dgd());
      add(KitaInstance::soe());
      break;
    }
    case CatalogProfile::OeisDeep: {
      c.name = "oeis-deep";
      for (int r = 1; r <= 7; ++r) add(KitaInstance::red(r));
      add(KitaInstance::ml(0, 1));
      add(KitaInstance::ml(1, 1));
      add(KitaInstance::ml(2, 1));
      for (int l = 2; l <= 4; ++l)
        add(KitaInstance::foc(0, std::vector<int>(l, 1)));
      for (int e = 2; e <= 5; ++e) add(KitaInstance::ana(0, e));
      add(KitaInstance::exp(BigRat(2)));
      add(KitaInstance::exp(BigRat(1, 2)));
      add(KitaInstance::log());
      add(KitaInstance::dop(ArithOp::Mul, ArithOp::Add));
      add(KitaInstance::ssym());
      add(KitaInstance::rsym());
      add(KitaInstance::dge());
      add(KitaInstance::dgd());
      add(KitaInstance::soe());
      break;
    }
  }
  return c;
}

inline std::optional<CatalogProfile> profile_from_name(
    const std::string& name) {
  if (name == "iq") return CatalogProfile::Iq;
  if (name == "oeis-depth2") return CatalogProfile::OeisDepth2;
  if (name == "oeis-deep") return CatalogProfile::OeisDeep;
  return std::nullopt;
}

}  // namespace kitbit
