#include <gtest/gtest.h>

#include <optional>

#include "cuspsheaf/io.hpp"
#include "cuspsheaf/random.hpp"
#include "cuspsheaf/selftest.hpp"
#include "helpers.hpp"

namespace cuspsheaf::testing {
namespace {

constexpr int N = 10;
constexpr int kInstances = 40;

template <class K>
struct FieldScope {
  std::optional<ModP::Session> session;
  FieldScope() {
    if constexpr (std::is_same_v<K, ModP>) session.emplace(101);
  }
};

template <class K>
class RoundTrip : public ::testing::Test {
 protected:
  FieldScope<K> scope;
  InstanceRng rng_for(int i) { return InstanceRng(InstanceRng::instance_seed(7, 100, static_cast<std::uint64_t>(i))); }
};

using Fields = ::testing::Types<Rational, ModP>;
TYPED_TEST_SUITE(RoundTrip, Fields);

TYPED_TEST(RoundTrip, Scalars) {
  using K = TypeParam;
  for (int i = 0; i < kInstances; ++i) {
    auto rng = this->rng_for(i);
    K x = rng.template scalar<K>();
    EXPECT_EQ(Codec<K>::scalar(Codec<K>::scalar(x)), x);
  }
}

TYPED_TEST(RoundTrip, Lattices) {
  using K = TypeParam;
  for (int i = 0; i < kInstances; ++i) {
    auto rng = this->rng_for(i);
    auto m = random_lattice<K>(rng, 1 + static_cast<std::size_t>(i % 4), N);
    auto text = Codec<K>::lattice(m).dump();
    EXPECT_EQ(Codec<K>::lattice(json::parse(text), N), m);
  }
}

TYPED_TEST(RoundTrip, PhiMaps) {
  using K = TypeParam;
  for (int i = 0; i < kInstances; ++i) {
    auto rng = this->rng_for(i);
    const auto r = 1 + static_cast<std::size_t>(i % 3);
    auto phi = random_phi<K>(rng, r, static_cast<std::size_t>(rng.uniform(0, static_cast<long>(r))), 50, N);
    EXPECT_EQ(Codec<K>::phi_map(json::parse(Codec<K>::phi_map(phi).dump()), N), phi);
  }
}

TYPED_TEST(RoundTrip, TriplesAndModels) {
  using K = TypeParam;
  for (int i = 0; i < kInstances; ++i) {
    auto rng = this->rng_for(i);
    const auto r = 1 + static_cast<std::size_t>(i % 3);
    auto model = selftest_detail::random_model<K>(rng, r, N, i % 2 == 0);
    EXPECT_EQ(Codec<K>::sheaf_model(json::parse(Codec<K>::sheaf_model(model).dump()), N, {}), model);

    auto t = to_triple(model);
    EXPECT_EQ(Codec<K>::triple(json::parse(Codec<K>::triple(t).dump())), t);
    auto arbitrary = random_triple<K>(rng, r, 1 + static_cast<std::size_t>(rng.uniform(0, static_cast<long>(r) - 1)), 30);
    EXPECT_EQ(Codec<K>::triple(json::parse(Codec<K>::triple(arbitrary).dump())), arbitrary);
  }
}

TYPED_TEST(RoundTrip, Morphisms) {
  using K = TypeParam;
  for (int i = 0; i < kInstances; ++i) {
    auto rng = this->rng_for(i);
    auto s1 = selftest_detail::random_model<K>(rng, 1 + static_cast<std::size_t>(i % 3), N, i % 2 == 0);
    auto s2 = selftest_detail::random_model<K>(rng, 1 + static_cast<std::size_t>((i + 1) % 3), N, i % 2 == 0);
    MorphismDocument<K> doc{s1, s2, {{random_germ(rng, s1.cusps[0].phi, s2.cusps[0].phi, N)}}};
    auto back = decode_morphism<K>(json::parse(encode_morphism(doc).dump()), N, {});
    EXPECT_EQ(back.source, doc.source);
    EXPECT_EQ(back.target, doc.target);
    EXPECT_EQ(back.map, doc.map);

    auto image = functor_on_morphism(s1, s2, doc.map, N).morphism;
    TripleMorphismDocument<K> tdoc{to_triple(s1), to_triple(s2), image};
    auto tback = decode_triple_morphism<K>(json::parse(encode_triple_morphism(tdoc).dump()), N);
    EXPECT_EQ(tback.source, tdoc.source);
    EXPECT_EQ(tback.target, tdoc.target);
    EXPECT_EQ(tback.map, tdoc.map);
  }
}

TYPED_TEST(RoundTrip, Documents) {
  using K = TypeParam;
  auto rng = this->rng_for(0);
  Document d;
  d.field = std::is_same_v<K, ModP> ? FieldDesc::prime(101) : FieldDesc::rational();
  d.precision = N;
  d.kind = "lattice";
  d.payload = Codec<K>::lattice(random_lattice<K>(rng, 2, N));
  auto back = parse_document(serialize(d));
  EXPECT_EQ(back.field, d.field);
  EXPECT_EQ(back.precision, d.precision);
  EXPECT_EQ(back.kind, d.kind);
  EXPECT_EQ(back.payload, d.payload);
  EXPECT_EQ(serialize(back), serialize(d));
}

std::string envelope(const std::string& payload, const std::string& extra = "") {
  return R"({"schema":"cuspsheaf/1","field":{"type":"q"},"precision":6,"payload":)" + payload + extra + "}";
}

TEST(Io, SeriesEncoding) {
  EXPECT_EQ(Codec<Q>::series(s(6, {0, 0, 1, 0, 0})), json::parse(R"(["0","0","1"])"));
  EXPECT_EQ(Codec<Q>::series(json::parse(R"(["1","0","3/7","0"])"), 6), PSeries<Q>::truncated(6, {Q(1), Q(0), Q(3, 7)}));
  EXPECT_THROW(Codec<Q>::series(json::parse(R"(["1","0","0"])"), 1), ParseError);
  EXPECT_THROW(Codec<Q>::series(json::parse(R"([1])"), 3), ParseError);
}

TEST(Io, Rejections) {
  const std::string m = R"({"kind":"lattice","rank":1,"generators":[[["0","0","1"]],[["0","0","0","1"]]]})";
  auto d = parse_document(envelope(m));
  EXPECT_EQ(d.kind, "lattice");
  EXPECT_EQ(Codec<Q>::lattice(d.payload, d.precision).generators().size(), 2u);

  EXPECT_THROW(parse_document(envelope(m, R"(,"extra":1)")), ParseError);
  EXPECT_THROW(parse_document("{\"schema\":"), ParseError);
  EXPECT_THROW(parse_document(R"({"schema":"other","field":{"type":"q"},"precision":6,"payload":{"kind":"x"}})"),
               ParseError);
  EXPECT_THROW(parse_document(R"({"schema":"cuspsheaf/1","field":{"type":"r"},"precision":6,"payload":{"kind":"x"}})"),
               ParseError);
  EXPECT_THROW(Codec<Q>::lattice(json::parse(R"({"kind":"lattice","rank":1,"generators":[],"note":0})"), 6),
               ParseError);
  EXPECT_THROW(Codec<Q>::lattice(json::parse(R"({"kind":"lattice","rank":1,"generators":[[["1/0"]]]})"), 6),
               ParseError);
  EXPECT_THROW(Codec<Q>::lattice(json::parse(R"({"kind":"lattice","rank":1,"generators":[[["x"]]]})"), 6),
               ParseError);
  // wrong generator length is an invariant violation, not a syntax error
  EXPECT_THROW(Codec<Q>::lattice(json::parse(R"({"kind":"lattice","rank":2,"generators":[[["1"]]]})"), 6),
               Error);
}

TEST(Io, ExitCodes) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return static_cast<int>(e.code());
    }
    return 0;
  };
  EXPECT_EQ(code([] { parse_document("not json"); }), 1);
  EXPECT_EQ(code([] { parse_document(envelope("{}")); }), 1);
  EXPECT_EQ(code([] { Triple<Q> t; t.bundle.rank = 1; t.cusps.push_back({1, mat({{0}, {0}}), mat({{1}})}); validate(t); }), 2);
  EXPECT_EQ(code([] { decompose(lattice(2, 6, {{{1}, {0}}})); }), 3);
  EXPECT_EQ(code([] { ModP::Session bad(100); }), 2);
}

TEST(Io, ModPScalars) {
  ModP::Session session(7);
  EXPECT_EQ(Codec<ModP>::scalar(json("12")), ModP(5));
  EXPECT_EQ(Codec<ModP>::scalar(ModP(-1)), json("6"));
}

}  // namespace
}  // namespace cuspsheaf::testing
