#pragma once

// JSON documents. Scalars are strings ("3/7", or a residue "5" over GF(p));
// a series is an array of scalars indexed from t^0, at most N+1 long; a
// matrix is an array of rows. Unknown keys are rejected.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cuspsheaf/triples.hpp"

namespace cuspsheaf {

using json = nlohmann::json;

inline constexpr const char* kSchema = "cuspsheaf/1";

/// Envelope shared by every input and output document.
struct Document {
  FieldDesc field;
  int precision = 12;
  std::string kind;
  json payload;  // body of the payload object, including "kind"
  json report;   // verdicts and diagnostics attached by a command; ignored on input
};

namespace io_detail {

inline void check_keys(const json& obj, std::initializer_list<const char*> required,
                       std::initializer_list<const char*> optional, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  std::set<std::string> allowed;
  for (auto k : required) {
    allowed.insert(k);
    if (!obj.contains(k)) throw ParseError(where + ": missing key '" + k + "'");
  }
  for (auto k : optional) allowed.insert(k);
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ParseError(where + ": unknown key '" + it.key() + "'");
}

inline const json& array_at(const json& obj, const char* key, const std::string& where) {
  const auto& a = obj.at(key);
  if (!a.is_array()) throw ParseError(where + ": '" + key + "' must be an array");
  return a;
}

inline long integer_at(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ParseError(where + ": '" + key + "' must be an integer");
  return v.get<long>();
}

inline std::size_t count_at(const json& obj, const char* key, const std::string& where) {
  long v = integer_at(obj, key, where);
  if (v < 0) throw InvariantError(where + ": '" + key + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

}  // namespace io_detail

template <ExactField K>
struct Codec {
  using json = nlohmann::json;

  static json scalar(const K& x) { return x.str(); }

  static K scalar(const json& j) {
    if (!j.is_string()) throw ParseError("scalars must be JSON strings, got " + j.dump());
    return K::parse(j.get<std::string>());
  }

  static json series(const PSeries<K>& s) {
    json a = json::array();
    int top = -1;
    for (int e = 0; e <= s.precision(); ++e)
      if (!s[e].is_zero()) top = e;
    for (int e = 0; e <= top; ++e) a.push_back(scalar(s[e]));
    return a;
  }

  static PSeries<K> series(const json& j, int precision) {
    if (!j.is_array()) throw ParseError("a series must be an array of scalars");
    if (j.size() > static_cast<std::size_t>(precision) + 1)
      throw ParseError("series has " + std::to_string(j.size()) + " coefficients, more than N+1 = " +
                       std::to_string(precision + 1));
    std::vector<K> c;
    for (const auto& x : j) c.push_back(scalar(x));
    return PSeries<K>::truncated(precision, std::move(c));
  }

  static json vector(const SeriesVector<K>& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back(series(s));
    return a;
  }

  static SeriesVector<K> vector(const json& j, std::size_t length, int precision) {
    if (!j.is_array()) throw ParseError("a vector must be an array of series");
    if (j.size() != length)
      throw InvariantError("vector has " + std::to_string(j.size()) + " entries, expected " + std::to_string(length));
    SeriesVector<K> v;
    for (const auto& s : j) v.push_back(series(s, precision));
    return v;
  }

  static json kvector(const KVector<K>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(scalar(x));
    return a;
  }

  static KVector<K> kvector(const json& j) {
    if (!j.is_array()) throw ParseError("a vector must be an array of scalars");
    KVector<K> v;
    for (const auto& x : j) v.push_back(scalar(x));
    return v;
  }

  static json matrix(const KMatrix<K>& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(kvector(m.row(i)));
    return a;
  }

  static KMatrix<K> matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + " must be an array of rows");
    if (j.size() != rows)
      throw InvariantError(what + " has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
    KMatrix<K> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      auto row = kvector(j[i]);
      if (row.size() != cols)
        throw InvariantError(what + " row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(cols));
      for (std::size_t k = 0; k < cols; ++k) m(i, k) = row[k];
    }
    return m;
  }

  static json series_matrix(const SeriesMatrix<K>& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(series(m(i, k)));
      a.push_back(std::move(row));
    }
    return a;
  }

  static SeriesMatrix<K> series_matrix(const json& j, std::size_t rows, std::size_t cols, int precision,
                                       const std::string& what) {
    if (!j.is_array() || j.size() != rows)
      throw InvariantError(what + " must have " + std::to_string(rows) + " rows");
    SeriesMatrix<K> m(rows, cols, precision);
    for (std::size_t i = 0; i < rows; ++i) {
      if (!j[i].is_array() || j[i].size() != cols)
        throw InvariantError(what + " row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
      for (std::size_t k = 0; k < cols; ++k) m(i, k) = series(j[i][k], precision);
    }
    return m;
  }

  // payloads

  static json lattice(const Lattice<K>& m) {
    json gens = json::array();
    for (const auto& g : m.generators()) gens.push_back(vector(g));
    return json{{"kind", "lattice"}, {"rank", m.rank()}, {"generators", gens}};
  }

  static Lattice<K> lattice(const json& j, int precision) {
    io_detail::check_keys(j, {"kind", "rank", "generators"}, {}, "lattice");
    auto r = io_detail::count_at(j, "rank", "lattice");
    std::vector<SeriesVector<K>> gens;
    for (const auto& g : io_detail::array_at(j, "generators", "lattice")) gens.push_back(vector(g, r, precision));
    if (gens.empty()) throw InvariantError("lattice needs at least one generator");
    return Lattice<K>(r, std::move(gens));
  }

  static json phi_body(const PhiMap<K>& phi) {
    json j{{"r", phi.r()}, {"a", phi.a()}, {"A", matrix(phi.A())}, {"B", matrix(phi.B())}};
    if (phi.H()) j["H"] = series_matrix(*phi.H());
    return j;
  }

  static json phi_map(const PhiMap<K>& phi) {
    auto j = phi_body(phi);
    j["kind"] = "phi_map";
    return j;
  }

  static PhiMap<K> phi_body(const json& j, int precision, const std::string& where, bool with_kind) {
    if (with_kind)
      io_detail::check_keys(j, {"kind", "r", "a", "A", "B"}, {"H"}, where);
    else
      io_detail::check_keys(j, {"r", "a", "A", "B"}, {"H"}, where);
    auto r = io_detail::count_at(j, "r", where), a = io_detail::count_at(j, "a", where);
    auto am = matrix(j.at("A"), r, a, where + ".A"), bm = matrix(j.at("B"), r, a, where + ".B");
    std::optional<SeriesMatrix<K>> h;
    if (j.contains("H")) h = series_matrix(j.at("H"), r, a, precision, where + ".H");
    return PhiMap<K>(r, std::move(am), std::move(bm), std::move(h));
  }

  static PhiMap<K> phi_map(const json& j, int precision) { return phi_body(j, precision, "phi_map", true); }

  static json bundle(const BundleData<K>& b) {
    json j{{"rank", b.rank}, {"degree", b.degree}};
    if (b.splitting_type) j["splitting_type"] = *b.splitting_type;
    if (!b.trivializations.empty()) {
      json t = json::array();
      for (const auto& m : b.trivializations) t.push_back(matrix(m));
      j["trivializations"] = t;
    }
    return j;
  }

  static json triple(const Triple<K>& t) {
    json cusps = json::array();
    for (const auto& c : t.cusps) cusps.push_back({{"a", c.a}, {"V", matrix(c.V)}, {"sigma", matrix(c.sigma)}});
    return json{{"kind", "triple"}, {"bundle", bundle(t.bundle)}, {"cusps", cusps}};
  }

  static Triple<K> triple(const json& j) {
    io_detail::check_keys(j, {"kind", "bundle", "cusps"}, {}, "triple");
    Triple<K> t;
    const auto& b = j.at("bundle");
    io_detail::check_keys(b, {"rank", "degree"}, {"splitting_type", "trivializations"}, "triple.bundle");
    t.bundle.rank = io_detail::count_at(b, "rank", "triple.bundle");
    t.bundle.degree = io_detail::integer_at(b, "degree", "triple.bundle");
    const auto r = t.bundle.rank;
    if (b.contains("splitting_type")) {
      std::vector<long> s;
      for (const auto& x : io_detail::array_at(b, "splitting_type", "triple.bundle")) {
        if (!x.is_number_integer()) throw ParseError("triple.bundle: splitting type entries must be integers");
        s.push_back(x.get<long>());
      }
      t.bundle.splitting_type = std::move(s);
    }
    if (b.contains("trivializations"))
      for (const auto& m : io_detail::array_at(b, "trivializations", "triple.bundle"))
        t.bundle.trivializations.push_back(matrix(m, r, r, "trivialization"));
    for (const auto& c : io_detail::array_at(j, "cusps", "triple")) {
      io_detail::check_keys(c, {"a", "V", "sigma"}, {}, "triple.cusp");
      auto a = io_detail::count_at(c, "a", "triple.cusp");
      t.cusps.push_back(CuspTriple<K>{a, matrix(c.at("V"), 2 * r, a, "V"), matrix(c.at("sigma"), a, a, "sigma")});
    }
    validate(t);
    return t;
  }

  static json sheaf_model(const SheafModel<K>& s) {
    json cusps = json::array();
    for (const auto& c : s.cusps) cusps.push_back({{"a", c.a}, {"phi", phi_body(c.phi)}});
    return json{{"kind", "sheaf_model"}, {"rank", s.rank}, {"degree", s.degree}, {"e_degree", s.e_degree},
                {"cusps", cusps}};
  }

  /// e_degree is optional; when present it must match the ledger under `conv`.
  static SheafModel<K> sheaf_model(const json& j, int precision, DegreeConvention conv) {
    io_detail::check_keys(j, {"kind", "rank", "degree", "cusps"}, {"e_degree"}, "sheaf_model");
    return sheaf_model_body(j, precision, conv);
  }

  static SheafModel<K> sheaf_model_body(const json& j, int precision, DegreeConvention conv) {
    auto r = io_detail::count_at(j, "rank", "sheaf_model");
    long d = io_detail::integer_at(j, "degree", "sheaf_model");
    std::vector<SheafCusp<K>> cusps;
    for (const auto& c : io_detail::array_at(j, "cusps", "sheaf_model")) {
      io_detail::check_keys(c, {"a", "phi"}, {}, "sheaf_model.cusp");
      auto a = io_detail::count_at(c, "a", "sheaf_model.cusp");
      cusps.push_back(SheafCusp<K>{a, phi_body(c.at("phi"), precision, "sheaf_model.cusp.phi", false)});
    }
    auto s = make_sheaf_model<K>(r, d, std::move(cusps), conv);
    if (j.contains("e_degree") && io_detail::integer_at(j, "e_degree", "sheaf_model") != s.e_degree)
      throw InvariantError("e_degree " + j.at("e_degree").dump() + " disagrees with the degree ledger value " +
                           std::to_string(s.e_degree));
    return s;
  }

  static json sheaf_morphism(const SheafMorphism<K>& f) {
    json g = json::array();
    for (const auto& m : f.germs) g.push_back(series_matrix(m));
    return g;
  }

  static json triple_morphism_cusps(const TripleMorphism<K>& f) {
    json cusps = json::array();
    for (const auto& c : f.cusps) {
      json j{{"fiber", matrix(c.fiber)}, {"first_order", matrix(c.first_order)}};
      if (c.germ) j["germ"] = series_matrix(*c.germ);
      cusps.push_back(std::move(j));
    }
    return cusps;
  }

  static TripleMorphism<K> triple_morphism_cusps(const json& j, std::size_t rt, std::size_t rs, int precision) {
    TripleMorphism<K> f;
    for (const auto& c : j) {
      io_detail::check_keys(c, {"fiber", "first_order"}, {"germ"}, "triple_morphism.cusp");
      CuspMorphismData<K> d{matrix(c.at("fiber"), rt, rs, "fiber"), matrix(c.at("first_order"), rt, rs, "first_order"),
                            std::nullopt};
      if (c.contains("germ")) d.germ = series_matrix(c.at("germ"), rt, rs, precision, "germ");
      f.cusps.push_back(std::move(d));
    }
    return f;
  }
};

/// A morphism document: lattice morphism between two sheaf models.
template <ExactField K>
struct MorphismDocument {
  SheafModel<K> source;
  SheafModel<K> target;
  SheafMorphism<K> map;
};

/// A triple-morphism document.
template <ExactField K>
struct TripleMorphismDocument {
  Triple<K> source;
  Triple<K> target;
  TripleMorphism<K> map;
};

template <ExactField K>
json encode_morphism(const MorphismDocument<K>& m) {
  auto s = Codec<K>::sheaf_model(m.source), t = Codec<K>::sheaf_model(m.target);
  s.erase("kind");
  t.erase("kind");
  return json{{"kind", "morphism"}, {"source", s}, {"target", t}, {"germs", Codec<K>::sheaf_morphism(m.map)}};
}

template <ExactField K>
MorphismDocument<K> decode_morphism(const json& j, int precision, DegreeConvention conv) {
  io_detail::check_keys(j, {"kind", "source", "target", "germs"}, {}, "morphism");
  auto side = [&](const char* key) {
    const auto& b = j.at(key);
    io_detail::check_keys(b, {"rank", "degree", "cusps"}, {"e_degree"}, std::string("morphism.") + key);
    return Codec<K>::sheaf_model_body(b, precision, conv);
  };
  MorphismDocument<K> m{side("source"), side("target"), {}};
  for (const auto& g : io_detail::array_at(j, "germs", "morphism"))
    m.map.germs.push_back(Codec<K>::series_matrix(g, m.target.rank, m.source.rank, precision, "germ"));
  return m;
}

template <ExactField K>
json encode_triple_morphism(const TripleMorphismDocument<K>& m) {
  auto s = Codec<K>::triple(m.source), t = Codec<K>::triple(m.target);
  s.erase("kind");
  t.erase("kind");
  return json{{"kind", "triple_morphism"}, {"source", s}, {"target", t}, {"cusps", Codec<K>::triple_morphism_cusps(m.map)}};
}

template <ExactField K>
TripleMorphismDocument<K> decode_triple_morphism(const json& j, int precision) {
  io_detail::check_keys(j, {"kind", "source", "target", "cusps"}, {}, "triple_morphism");
  auto side = [&](const char* key) {
    auto b = j.at(key);
    if (!b.is_object()) throw ParseError(std::string("triple_morphism.") + key + " must be an object");
    if (b.contains("kind")) throw ParseError(std::string("triple_morphism.") + key + ": unknown key 'kind'");
    b["kind"] = "triple";
    return Codec<K>::triple(b);
  };
  TripleMorphismDocument<K> m{side("source"), side("target"), {}};
  m.map = Codec<K>::triple_morphism_cusps(io_detail::array_at(j, "cusps", "triple_morphism"), m.target.bundle.rank,
                                          m.source.bundle.rank, precision);
  return m;
}

inline json encode_field(const FieldDesc& f) {
  if (f.kind == FieldDesc::Kind::rational) return json{{"type", "q"}};
  return json{{"type", "fp"}, {"p", f.p}};
}

inline FieldDesc decode_field(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw ParseError("field must be an object with a string 'type'");
  auto type = j.at("type").get<std::string>();
  if (type == "q") {
    io_detail::check_keys(j, {"type"}, {}, "field");
    return FieldDesc::rational();
  }
  if (type == "fp") {
    io_detail::check_keys(j, {"type", "p"}, {}, "field");
    if (!j.at("p").is_number_unsigned()) throw ParseError("field.p must be a positive integer");
    return FieldDesc::prime(j.at("p").get<std::uint64_t>());
  }
  throw ParseError("unknown field type '" + type + "'");
}

inline Document parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  io_detail::check_keys(j, {"schema", "field", "precision", "payload"}, {"report"}, "document");
  if (!j.at("schema").is_string() || j.at("schema").get<std::string>() != kSchema)
    throw ParseError(std::string("unsupported schema, expected '") + kSchema + "'");
  Document d;
  d.field = decode_field(j.at("field"));
  long n = io_detail::integer_at(j, "precision", "document");
  if (n < 0 || n > 1000) throw InvariantError("precision must be between 0 and 1000");
  d.precision = static_cast<int>(n);
  d.payload = j.at("payload");
  if (!d.payload.is_object() || !d.payload.contains("kind") || !d.payload.at("kind").is_string())
    throw ParseError("payload must be an object with a string 'kind'");
  d.kind = d.payload.at("kind").get<std::string>();
  return d;
}

inline json document_json(const Document& d) {
  json j{{"schema", kSchema}, {"field", encode_field(d.field)}, {"precision", d.precision}, {"payload", d.payload}};
  if (!d.report.is_null()) j["report"] = d.report;
  return j;
}

inline std::string serialize(const Document& d) { return document_json(d).dump(2) + "\n"; }

}  // namespace cuspsheaf
