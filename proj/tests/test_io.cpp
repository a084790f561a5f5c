#include <catch_amalgamated.hpp>

#include <rittcalc/io.hpp>
#include <rittcalc/operators.hpp>

using namespace rittcalc;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("JSON identity") {
  const auto M = parse_matrix_text(R"({"dim": 2, "entries": [[1,0],[0,0],[0,0],[1,0]]})", "id");
  CHECK(M == ComplexMatrix::Identity(2, 2));
}

TEST_CASE("Matrix Market array matches JSON") {
  const std::string mm =
      "%%MatrixMarket matrix array complex general\n"
      "% column major\n"
      "2 2\n"
      "1 0.5\n"
      "3 0\n"
      "2 -1\n"
      "4 0.25\n";
  const auto a = parse_matrix_text(mm, "mm");
  const auto b = parse_matrix_text(
      R"({"dim": 2, "entries": [[1,0.5],[2,-1],[3,0],[4,0.25]]})", "json");
  CHECK(a == b);
}

TEST_CASE("Matrix Market coordinate and real fields") {
  const std::string mm =
      "%%MatrixMarket matrix coordinate real general\n"
      "3 3 2\n"
      "1 1 0.5\n"
      "2 3 -2\n";
  const auto M = parse_matrix_text(mm, "coo");
  CHECK(M(0, 0) == cplx(0.5, 0.0));
  CHECK(M(1, 2) == cplx(-2.0, 0.0));
  CHECK(M(2, 2) == cplx(0.0, 0.0));
}

TEST_CASE("truncated input names the byte offset") {
  CHECK_THROWS_WITH(parse_matrix_text(R"({"dim": 2, "entries": [[1,0],)", "t.json"),
                    ContainsSubstring("byte offset"));
  CHECK_THROWS_AS(parse_matrix_text(R"({"dim": 2, "entries": [[1,0],)", "t.json"), ParseError);
  const std::string mm = "%%MatrixMarket matrix array complex general\n2 2\n1 0\n0 0\n";
  CHECK_THROWS_WITH(parse_matrix_text(mm, "t.mtx"), ContainsSubstring("byte offset"));
  CHECK_THROWS_AS(parse_matrix_text("hello", "x"), ParseError);
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(parse_matrix_text(R"({"dim": 2, "entries": [[1,0],[0,0],[0,0]]})", "s"),
                  ShapeError);
  CHECK_THROWS_AS(parse_matrix_text("%%MatrixMarket matrix array real general\n2 3\n1 2 3 4 5 6\n", "s"),
                  ShapeError);
}

TEST_CASE("JSON round-trip is bit-exact") {
  for (const auto& op : factory_suite()) {
    const std::string text = serialize_matrix(op.matrix);
    const ComplexMatrix back = parse_matrix_text(text, "rt");
    CHECK(back == op.matrix);
    CHECK(serialize_matrix(back) == text);
  }
}

TEST_CASE("polynomial JSON") {
  const auto p = poly_from_json(parse_json_text(R"({"m": 2, "coeffs": [1, [0, 2]]})", "p"));
  CHECK(p.m == 2);
  CHECK(p.coeffs == std::vector<cplx>{1.0, cplx(0.0, 2.0)});
  CHECK(poly_from_json(poly_to_json(p)).coeffs == p.coeffs);
  CHECK_THROWS_AS(poly_from_json(parse_json_text(R"({"coeffs": []})", "p")), ParseError);
}

TEST_CASE("report serialization") {
  std::vector<BoundReport> reps = {
      make_report("a", 1.0, 2.0, 0.0, Params().add("k", 3).add("x", 0.1)),
      make_report("b", 3.0, 2.0, 0.0, "")};
  const std::string csv = reports_to_csv(reps);
  CHECK(csv.rfind("name,lhs,rhs,margin,pass,inputs\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK_THAT(csv, ContainsSubstring("a,1,2,1,true,\"k=3;x=0.10000000000000001\""));
  CHECK_THAT(csv, ContainsSubstring("b,3,2,-1,false,\"\""));
  const auto j = json::parse(reports_to_json(reps));
  CHECK(j.size() == 2);
  CHECK(j[1]["pass"] == false);
}
