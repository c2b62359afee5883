#include <catch2/catch_amalgamated.hpp>

#include "knum/json_io.hpp"
#include "knum/quiver.hpp"
#include "knum/reports.hpp"

using namespace knum;
using Q = Rat;

namespace {

json j(const std::string& text) { return json::parse(text); }

const char* kA2 = R"({
  "field": "Q",
  "quiver": {
    "vertices": ["x", "y"],
    "arrows": [{"name": "f", "from": "x", "to": "y"}]
  }
})";

const char* kGraded = R"({
  "field": "Q",
  "objects": ["u"],
  "homs": [{"from": "u", "to": "u", "basis": [
    {"name": "id", "degree": 0}, {"name": "a", "degree": 0}, {"name": "b", "degree": 1}]}],
  "differential": [{"from": "u", "to": "u", "of": "a", "terms": [{"coeff": "1", "elt": "b"}]}],
  "composition": [
    {"from": "u", "mid": "u", "to": "u", "g": "id", "f": "id", "terms": [{"elt": "id"}]},
    {"from": "u", "mid": "u", "to": "u", "g": "id", "f": "a", "terms": [{"elt": "a"}]},
    {"from": "u", "mid": "u", "to": "u", "g": "id", "f": "b", "terms": [{"elt": "b"}]},
    {"from": "u", "mid": "u", "to": "u", "g": "a", "f": "id", "terms": [{"elt": "a"}]},
    {"from": "u", "mid": "u", "to": "u", "g": "b", "f": "id", "terms": [{"elt": "b"}]}
  ],
  "identities": {"u": "id"}
})";

template <class K>
bool same_category(const DGCategory<K>& A, const DGCategory<K>& B) {
    if (A.objects != B.objects) return false;
    for (int s = 0; s < A.n_objects(); ++s)
        for (int t = 0; t < A.n_objects(); ++t) {
            if (A.hom(s, t).names != B.hom(s, t).names) return false;
            if (A.hom(s, t).degrees != B.hom(s, t).degrees) return false;
            for (int i = 0; i < A.hom(s, t).dim(); ++i)
                if (!lc_equal(A.hom(s, t).diff[i], B.hom(s, t).diff[i])) return false;
        }
    for (int a = 0; a < A.n_objects(); ++a)
        if (!lc_equal(A.ids[a], B.ids[a])) return false;
    for (int a = 0; a < A.n_objects(); ++a)
        for (int b = 0; b < A.n_objects(); ++b)
            for (int c = 0; c < A.n_objects(); ++c)
                for (int g = 0; g < A.hom(b, c).dim(); ++g)
                    for (int f = 0; f < A.hom(a, b).dim(); ++f)
                        if (!lc_equal(A.compose_basis(a, b, c, g, f),
                                      B.compose_basis(a, b, c, g, f)))
                            return false;
    return true;
}

}  // namespace

TEST_CASE("minimal one-object spec parses to the category k") {
    DGCategory<Q> C = parse_category<Q>(j(R"({"quiver": {"vertices": ["v"]}})"), 0);
    REQUIRE(C.n_objects() == 1);
    REQUIRE(C.hom_dim(0, 0) == 1);
    REQUIRE(validate(C).ok());
}

TEST_CASE("A2 quiver spec matches from_quiver") {
    DGCategory<Q> parsed = parse_category<Q>(j(kA2), 0);
    QuiverPresentation<Q> q;
    q.vertices = {"x", "y"};
    q.arrows = {{"f", 0, 1}};
    DGCategory<Q> built = from_quiver(q);
    REQUIRE(same_category(parsed, built));
    REQUIRE(parsed.from_acyclic_quiver);
}

TEST_CASE("explicit graded spec parses and validates") {
    DGCategory<Q> C = parse_category<Q>(j(kGraded), 0);
    REQUIRE(C.hom_dim(0, 0) == 3);
    REQUIRE(C.window_hi == 1);
    REQUIRE(lc_equal(C.hom(0, 0).diff[1], lc_single(2, Q(1))));
}

TEST_CASE("a spec with d.d != 0 is rejected with the element named") {
    // extend the graded spec by c in degree 2 and set d(b) = c, so d(d(a)) != 0
    json bad = j(kGraded);
    bad["homs"][0]["basis"].push_back(j(R"({"name": "c", "degree": 2})"));
    bad["differential"].push_back(
        j(R"({"from": "u", "to": "u", "of": "b", "terms": [{"elt": "c"}]})"));
    try {
        parse_category<Q>(bad, 0);
        FAIL("expected rejection");
    } catch (const InputError& e) {
        std::string msg = e.what();
        REQUIRE(msg.find("d^2 != 0") != std::string::npos);
        REQUIRE(msg.find(":a") != std::string::npos);
    }
}

TEST_CASE("exactly one of quiver or explicit homs") {
    json both = j(kA2);
    both["objects"] = json::array({"x"});
    REQUIRE_THROWS_AS(parse_category<Q>(both, 0), InputError);
    REQUIRE_THROWS_AS(parse_category<Q>(j(R"({"field": "Q"})"), 0), InputError);
}

TEST_CASE("parse-serialize-parse is the identity on the parsed structure") {
    for (const char* text : {kA2, kGraded}) {
        DGCategory<Q> C = parse_category<Q>(j(text), 0);
        json ser = serialize_category(C);
        DGCategory<Q> C2 = parse_category<Q>(ser, 0);
        REQUIRE(same_category(C, C2));
        REQUIRE(C2.from_acyclic_quiver == C.from_acyclic_quiver);
        // serialization is stable
        REQUIRE(serialize_category(C2) == ser);
    }
}

TEST_CASE("field specs") {
    REQUIRE(FieldSpec::parse("Q").characteristic == 0);
    REQUIRE(FieldSpec::parse("Fp:5").characteristic == 5);
    REQUIRE_THROWS_AS(FieldSpec::parse("Fp:4"), InputError);
    REQUIRE_THROWS_AS(FieldSpec::parse("R"), InputError);
    REQUIRE_THROWS_AS(FieldSpec::parse("Fp:x"), InputError);
}

TEST_CASE("category over F_5 with fractional coefficients") {
    json spec = j(kGraded);
    spec["field"] = "Fp:5";
    spec["differential"][0]["terms"][0]["coeff"] = "1/2";  // = 3 mod 5
    DGCategory<Fp> C = parse_category<Fp>(spec, 5);
    REQUIRE(validate(C).ok());
    REQUIRE(lc_equal(C.hom(0, 0).diff[1], lc_single(2, Fp(3, 5))));
}

TEST_CASE("triple specs") {
    json t = j(R"({
      "k0": {
        "L_I": {"rank": 1, "gram": [[1]]},
        "L_A": {"rank": 2, "gram": [[1, 1], [0, 1]]},
        "L_Q": {"rank": 1, "gram": [[1]]},
        "i_star": [[1], [0]],
        "q_star": [[0, 1]]
      },
      "flags": {"thick": true}
    })");
    TripleSpec ts = parse_triple_spec(t, ".");
    REQUIRE(ts.explicit_k0.has_value());
    REQUIRE(ts.explicit_k0->thick == FlagState::asserted);
    REQUIRE(ts.explicit_k0->q_preserves_compacts == FlagState::unset);

    REQUIRE_THROWS_AS(parse_triple_spec(j(R"({"depth": 3})"), "."), InputError);
    REQUIRE_THROWS_AS(parse_triple_spec(j(R"({"k0": {}, "depth": 1})"), "."), InputError);

    // composite invariant enforced at parse time
    json badk = t;
    badk["k0"]["q_star"] = json::array({json::array({1, 0})});
    REQUIRE_THROWS_AS(parse_triple_spec(badk, "."), InputError);
}

TEST_CASE("matrix parsing") {
    IntMatrix m = parse_int_matrix(j(R"([[1, "2"], ["-3", 4]])"), "m");
    REQUIRE(m.at(0, 1) == 2);
    REQUIRE(m.at(1, 0) == -3);
    REQUIRE_THROWS_AS(parse_int_matrix(j(R"([[1], [2, 3]])"), "m"), InputError);
    REQUIRE_THROWS_AS(parse_int_matrix(j(R"([[1.5]])"), "m"), InputError);
}

TEST_CASE("reports are deterministic") {
    EulerLattice L;
    L.rank = 2;
    L.gram = IntMatrix::identity(2);
    L.gen_names = {"x", "y"};
    Report a = report_numk(L, FieldSpec{0}, {});
    Report b = report_numk(L, FieldSpec{0}, {});
    REQUIRE(a.text == b.text);
    REQUIRE(a.data == b.data);
    REQUIRE(a.exit_code == 0);
}
