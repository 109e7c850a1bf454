#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "linflow/commands.hpp"

using namespace linflow;
using nlohmann::json;

namespace {

struct Run {
  int code;
  json doc;
  std::string err;
};

Run run(const std::function<int(const CliOptions&, std::ostream&, std::ostream&)>& f, CliOptions opt = {}) {
  opt.json = true;
  std::ostringstream out, err;
  const int code = f(opt, out, err);
  return {code, json::parse(out.str()), err.str()};
}

Run classify(const std::string& src, CliOptions opt = {}) {
  return run([&](const CliOptions& o, std::ostream& out, std::ostream& err) { return cmd_classify(src, o, out, err); },
             opt);
}

Run compare(const std::string& a, const std::string& b, CliOptions opt = {}) {
  return run(
      [&](const CliOptions& o, std::ostream& out, std::ostream& err) { return cmd_compare(a, b, o, out, err); }, opt);
}

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("classify") {
  Run r = classify("[0 -1; 1 0]");
  CHECK(r.code == kExitOk);
  const json& res = r.doc["results"];
  CHECK(res["spectral_split"]["stable"] == 0);
  CHECK(res["spectral_split"]["central"] == 2);
  CHECK(res["spectral_split"]["unstable"] == 0);
  CHECK(!res["rational_classes"].is_null());

  r = classify("[0 0; 0 0]");
  CHECK(r.code == kExitOk);
  CHECK(r.doc["results"]["summary"].get<std::string>().find("all bounded, Fix = X") != std::string::npos);

  r = classify("[0 1 0 0; 0 0 1 0; 0 0 0 1; 0 0 0 0]");
  CHECK(r.code == kExitOk);
  const json& profile = r.doc["results"]["cores"]["profile"]["frequencies"];
  REQUIRE(profile.size() == 1);
  CHECK(profile[0]["s"] == 0.0);
  CHECK(profile[0]["c"] == json::array({1, 1, 1, 1, 0}));
  CHECK(profile[0]["d"] == json::array({0, 0, 0, 0, 1}));
  CHECK(r.doc["results"]["cores"]["zero_core"] == 2);

  r = classify("[1 0; 0 -1]");
  CHECK(r.doc["results"]["rational_classes"].is_null());
}

TEST_CASE("classify errors") {
  Run r = classify("[1 2 3; 4 5 6]");
  CHECK(r.code == kExitInputError);
  CHECK(r.doc["error"]["message"].get<std::string>().find("2x3") != std::string::npos);
  r = classify("[1 x; 0 0]");
  CHECK(r.code == kExitInputError);
  CHECK(r.doc["error"]["kind"] == "input");
  CHECK(r.doc["error"]["message"].get<std::string>().find("column 4") != std::string::npos);
  CHECK(classify("/no/such/file.txt").code == kExitInputError);
}

TEST_CASE("compare") {
  CliOptions smooth;
  smooth.relation = Relation::smooth;
  Run r = compare("[0 -1; 1 0]", "[0 -3; 3 0]", smooth);
  CHECK(r.code == kExitOk);
  CHECK(r.doc["results"]["verdict"]["equivalent"] == true);
  CHECK(r.doc["results"]["verdict"]["alpha"].get<double>() == doctest::Approx(1.0 / 3.0));
  CHECK(r.doc["results"]["residual"]["pass"] == true);

  CliOptions complex_opt;
  complex_opt.field = Field::complex;
  CHECK(compare("[i]", "[-i]", complex_opt).code == kExitOk);
  complex_opt.relation = Relation::smooth;
  CHECK(compare("[i]", "[-i]", complex_opt).code == kExitNotEquivalent);

  CHECK(compare("[1 0; 0 1]", "[-1 0; 0 -1]").code == kExitNotEquivalent);
  CHECK(compare("[1 0; 0 1]", "[1]").code == kExitInputError);
  CHECK(compare("[1]", "[i]").code == kExitInputError);
  CliOptions realified;
  realified.realify = true;
  CHECK(compare("[0 -1; 1 0]", "[i]", realified).code == kExitOk);
}

TEST_CASE("certificate output") {
  CliOptions opt;
  opt.relation = Relation::smooth;
  opt.certificate_out = "linflow_test_certificate.json";
  CHECK(compare("[2 0; 0 1]", "[1 0; 0 0.5]", opt).code == kExitOk);
  std::ifstream in(opt.certificate_out);
  REQUIRE(in);
  const json cert = json::parse(in);
  CHECK(cert["alpha"].get<double>() == doctest::Approx(2.0));
  std::remove(opt.certificate_out.c_str());
}

TEST_CASE("batch") {
  const std::string file = "linflow_test_batch.txt";
  {
    std::ofstream f(file);
    f << "# pairs\n[0 -1; 1 0]  [0 -2; 2 0]  smooth\n[1 0; 0 1]  [-1 0; 0 -1]\n";
  }
  std::ostringstream out, err;
  CliOptions opt;
  opt.json = true;
  const int code = cmd_batch(file, opt, out, err);
  const json doc = json::parse(out.str());
  CHECK(code == kExitNotEquivalent);
  REQUIRE(doc["results"]["batch"].size() == 2);
  CHECK(doc["results"]["batch"][0]["results"]["verdict"]["equivalent"] == true);
  CHECK(doc["results"]["batch"][1]["results"]["verdict"]["equivalent"] == false);
  std::remove(file.c_str());
}

TEST_CASE("enum2 and selftest") {
  Run r = run(cmd_enum2);
  CHECK(r.code == kExitOk);
  CHECK(r.doc["results"]["classes_found"] == 8);
  CHECK(r.doc["results"]["partition_matches"] == true);
  r = run(cmd_selftest);
  CHECK(r.code == kExitOk);
}

TEST_CASE("text and json carry the same numbers") {
  CliOptions opt;
  opt.relation = Relation::smooth;
  std::ostringstream text, err;
  cmd_compare("[0 -1; 1 0]", "[0 -3; 3 0]", opt, text, err);
  const Run r = compare("[0 -1; 1 0]", "[0 -3; 3 0]", opt);
  std::ostringstream alpha;
  alpha << r.doc["results"]["verdict"]["alpha"];
  CHECK(text.str().find(alpha.str()) != std::string::npos);
  // Deterministic for fixed input and flags.
  CHECK(compare("[0 -1; 1 0]", "[0 -3; 3 0]", opt).doc == r.doc);
}

}
