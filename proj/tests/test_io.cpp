#include <doctest.h>

#include <string>

#include "gjulia/errors.hpp"
#include "gjulia/io.hpp"

using namespace gjulia;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_sequence(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("input_digest") {
  // Published FNV-1a 64 test vectors.
  CHECK(input_digest("") == "fnv1a64:cbf29ce484222325");
  CHECK(input_digest("a") == "fnv1a64:af63dc4c8601ec8c");
  CHECK(input_digest("foobar") == "fnv1a64:85944171f73967e8");
}

TEST_CASE("parse k1_gamma") {
  auto in = parse_sequence(R"({"family":"k1_gamma","gamma":["1/4"],"tail":"repeat-last"})");
  REQUIRE(in.gamma);
  CHECK(*in.gamma->gamma_exact(7) == Rational(1, 4));
  CHECK(in.spec.family() == Family::kK1Gamma);
  CHECK(in.spec.generator(3).exact->coefficients()(2) == Rational(2));

  auto geo = parse_sequence(
      R"({"family":"k1_gamma","epsilon":{"kind":"geometric","scale":"1/4","ratio":"1/4"}})");
  CHECK(geo.gamma->tail() == GammaTail::kEpsilonGeometric);
  CHECK(*geo.gamma->gamma_exact(1) == Rational(3, 16));
  auto pow = parse_sequence(
      R"({"family":"k1_gamma","epsilon":{"kind":"power","scale":"1","power":"2","offset":2}})");
  CHECK(pow.gamma->epsilon(2) == doctest::Approx(1.0 / 16));
}

TEST_CASE("parse polynomial families") {
  auto a = parse_sequence(R"({"family":"autonomous","polynomial":["-2","0","1"]})");
  CHECK(*a.spec.generator(5).exact == Polynomial<Rational>{-2, 0, 1});
  CHECK_FALSE(a.gamma);

  auto e = parse_sequence(R"({"family":"explicit","polynomials":[["0","0","1"]],"tail":"repeat-last"})");
  CHECK(*e.spec.generator(9).exact == Polynomial<Rational>{0, 0, 1});

  auto c = parse_sequence(R"({"family":"quadratic_c","c":["-1", ["0","1/2"]],"tail":"repeat-cycle"})");
  CHECK(c.spec.generator(4).numeric[0] == Complex(0, 0.5));
  CHECK_FALSE(c.spec.generator(4).exact);
  CHECK(*c.spec.generator(3).exact == Polynomial<Rational>{-1, 0, 1});

  auto k = parse_sequence(
      R"({"family":"autonomous","polynomial":["0","0","1"],"constants":{"A1":1,"A2":"1/2","A3":0.5}})");
  CHECK(k.spec.constants().A2 == 0.5);

  // Decimal coefficients convert exactly.
  auto d = parse_sequence(R"({"family":"autonomous","polynomial":["0.1","0","1"]})");
  CHECK(d.spec.generator(1).exact->coefficients()(0) == Rational(1, 10));
}

TEST_CASE("document round trip") {
  const std::string text = R"({"family":"explicit","polynomials":[["0","0","1"],["-1","0","1"]],"tail":"repeat-cycle"})";
  auto in = parse_sequence(text);
  auto again = parse_sequence(in.document.dump());
  CHECK(*again.spec.generator(4).exact == *in.spec.generator(4).exact);
  CHECK(in.digest == input_digest(text));
}

TEST_CASE("schema diagnostics") {
  CHECK(error_of("{\"family\":\"autonomous\",\n\"polynomial\":[\"1\",\"0\",\"1\"],\n\"bogus\":1}") ==
        "line 3, field /bogus: unknown field");
  CHECK(error_of("{\"family\":\"explicit\",\n\"polynomials\":[\n[\"0\",\"0\",\"1\"],\n[\"0\",\"x\",\"1\"]]}")
            .rfind("line 4, field /polynomials/1/1:", 0) == 0);
  CHECK(error_of(R"({"family":"autonomous","polynomial":[0.5,"0","1"]})").find("/polynomial/0") !=
        std::string::npos);
  CHECK(error_of(R"({"family":"autonomous","polynomial":["1","1"]})").find("degree at least 2") !=
        std::string::npos);
  CHECK(error_of(R"({"family":"nope"})").find("field /family") != std::string::npos);
  CHECK(error_of(R"({"polynomial":["1"]})").find("missing field \"family\"") != std::string::npos);
  CHECK(error_of(R"({"family":"k1_gamma","gamma":["1/3"]})").find("line 1, field /") == 0);
  CHECK(error_of(R"({"family":"k1_gamma","gamma":["1/4"],"epsilon":{}})").find("exactly one") !=
        std::string::npos);
  CHECK(error_of(R"({"family":"explicit","polynomials":[["0","0","1"]],"tail":"loop"})")
            .find("field /tail") != std::string::npos);
  CHECK(error_of("{\"family\": ").find("malformed JSON") == 0);
  CHECK_THROWS_AS(parse_sequence_file("/nonexistent/file.json"), InputError);
}

TEST_CASE("csv_document") {
  const auto text = csv_document({"digest x", "level 3"}, {"re", "im"}, {{0.1, -2.0}, {1e-300, 3.0}});
  CHECK(text == "# digest x\n# level 3\nre,im\n0.10000000000000001,-2\n1e-300,3\n");
}

TEST_CASE("json helpers") {
  CHECK(to_json(Rational(-3, 6)) == "-1/2");
  CHECK(to_json(Complex(1, -2)) == nlohmann::json::array({1.0, -2.0}));
  CHECK(to_json(Polynomial<Rational>{1, 0, Rational(1, 2)}) ==
        nlohmann::json::array({"1", "0", "1/2"}));
}
