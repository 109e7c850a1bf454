#include <random>

#include "doctest.h"
#include "linflow/matrix_io.hpp"
#include "linflow/report.hpp"
#include "support.hpp"

using namespace linflow;
namespace ts = testing_support;

TEST_SUITE("io") {

TEST_CASE("scalar tokens") {
  CHECK(parse_scalar("3") == Scalar(3.0));
  CHECK(parse_scalar("-2.5e-1") == Scalar(-0.25));
  CHECK(parse_scalar("i") == Scalar(0, 1));
  CHECK(parse_scalar("-i") == Scalar(0, -1));
  CHECK(parse_scalar("2i") == Scalar(0, 2));
  CHECK(parse_scalar("1+2i") == Scalar(1, 2));
  CHECK(parse_scalar("1.5e2-3e-1i") == Scalar(150, -0.3));
  CHECK(!parse_scalar("abc"));
  CHECK(!parse_scalar("1+"));
  CHECK(!parse_scalar(""));
}

TEST_CASE("text matrices") {
  const Mat a = parse_matrix_text("# comment\n1 2\n\n3 4  # trailing\n");
  CHECK(a == Mat::real({{1, 2}, {3, 4}}));
  CHECK(a.field() == Field::real);
  CHECK(parse_matrix_text("[1 2; 3 4]") == a);
  CHECK(parse_matrix_text("[[1,2],[3,4]]") == a);
  const Mat c = parse_matrix_text("[i]");
  CHECK(c.field() == Field::complex);
  CHECK(c(0, 0) == Scalar(0, 1));
  CHECK(parse_matrix_text("1 0\n0 1", Field::complex).field() == Field::complex);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_matrix_text("1 2\n3 x\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  try {
    parse_matrix_text("1 2\n3\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  // shape is checked by the operations, not the parser
  CHECK(parse_matrix_text("1 2 3\n4 5 6\n").cols() == 3);
  CHECK_THROWS_AS(require_square(parse_matrix_text("1 2 3\n4 5 6\n"), "input"), DimensionError);
  CHECK_THROWS_AS(parse_matrix_text(""), ParseError);
  CHECK_THROWS_AS(parse_matrix_text("1 i", Field::real), InvalidArgument);
  CHECK_THROWS_AS(parse_matrix_text("nan 0\n0 0"), ParseError);
  CHECK_THROWS_AS(parse_matrix_json("{\"field\": \"real\", \"rows\": [[1, 2], [3]]}"), ParseError);
  CHECK_THROWS_AS(parse_matrix_json("{\"rows\": "), ParseError);
}

TEST_CASE("json matrices") {
  const Mat a = parse_matrix_json(R"({"field": "complex", "rows": [[[0, 1], [1, 0]], [[0, 0], 2]]})");
  CHECK(a.field() == Field::complex);
  CHECK(a(0, 0) == Scalar(0, 1));
  CHECK(a(1, 1) == Scalar(2, 0));
  CHECK(parse_matrix_json("[[1, 2], [3, 4]]") == Mat::real({{1, 2}, {3, 4}}));
  CHECK(parse_matrix(R"({"field": "real", "rows": [[5]]})") == Mat::real({{5}}));
}

TEST_CASE("round trips") {
  std::mt19937_64 rng(71);
  for (int k = 0; k < 20; ++k) {
    const Mat a = ts::gaussian(rng, 1 + k % 4, 1 + k % 4, k % 2 ? Field::complex : Field::real);
    const Mat t = parse_matrix_text(emit_matrix_text(a));
    CHECK(t == a);
    CHECK(t.field() == a.field());
    const Mat j = parse_matrix_json(matrix_to_json(a).dump());
    CHECK(j == a);
    CHECK(j.field() == a.field());
    CHECK(emit_matrix_text(t) == emit_matrix_text(a));
  }
  CHECK(format_scalar(Scalar(1, -2), Field::complex) == "1-2i");
  CHECK(format_scalar(Scalar(0.5, 0), Field::complex) == "0.5+0i");
  CHECK(format_scalar(Scalar(-3, 0), Field::real) == "-3");
}

TEST_CASE("report envelope") {
  const Mat a = Mat::real({{0, -1}, {1, 0}});
  const auto inputs = nlohmann::json::array({input_to_json("rot", a)});
  const auto r = make_report("classify", inputs, Tolerance{}, 64, {{"x", 1}});
  CHECK(r["tool"] == "linflow");
  CHECK(r["version"] == kVersion);
  CHECK(r["command"] == "classify");
  CHECK(r["tolerances"]["qmax"] == 64);
  CHECK(r["inputs"][0]["digest"] == digest(a));
  CHECK(digest(a) != digest(a * Scalar(2.0)));
  const std::string text = render_text(r);
  CHECK(text.find("classify") != std::string::npos);
  CHECK(text.find("x: 1") != std::string::npos);
}

}
