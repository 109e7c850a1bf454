#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "linflow/commands.hpp"
#include "linflow/report.hpp"

namespace {

void add_common(CLI::App* sub, linflow::CliOptions& opt, std::string& format, std::string& field) {
  sub->add_option("--tol-rank", opt.tol.rank_rel, "relative rank threshold")->capture_default_str();
  sub->add_option("--tol-cluster", opt.tol.eig_cluster_rel, "relative eigenvalue clustering radius")
      ->capture_default_str();
  sub->add_option("--tol-residual", opt.tol.residual_abs, "residual bound for certificates")
      ->capture_default_str();
  sub->add_option("--qmax", opt.qmax, "denominator bound for rational classes")->capture_default_str();
  sub->add_option("--field", field, "input field")->check(CLI::IsMember({"real", "complex"}));
  sub->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classification of linear flows up to topological and smooth equivalence"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(linflow::kVersion));

  linflow::CliOptions opt;
  std::string format = "text", field, relation = "topological";
  std::string input, a, b, batch;

  auto* classify = app.add_subcommand("classify", "class descriptors, Jordan structure, cores, rational classes");
  classify->add_option("input", input, "matrix file or inline matrix")->required();
  add_common(classify, opt, format, field);

  auto* compare = app.add_subcommand("compare", "decide equivalence of two generators");
  compare->add_option("a", a, "first matrix (file or inline)");
  compare->add_option("b", b, "second matrix (file or inline)");
  compare->add_option("--relation", relation, "equivalence relation")
      ->check(CLI::IsMember({"topological", "smooth"}))
      ->capture_default_str();
  compare->add_option("--certificate-out", opt.certificate_out, "write the certificate as JSON");
  compare->add_option("--batch", batch, "file with one comparison per line: A B [relation]");
  compare->add_flag("--realify", opt.realify, "compare the realifications of complex inputs");
  add_common(compare, opt, format, field);

  auto* enum2 = app.add_subcommand("enum2", "2x2 catalog with the live pairwise verdict matrix");
  enum2->add_option("--relation", relation, "equivalence relation")
      ->check(CLI::IsMember({"topological", "smooth"}))
      ->capture_default_str();
  add_common(enum2, opt, format, field);

  auto* selftest = app.add_subcommand("selftest", "identity checks for the special matrices");
  add_common(selftest, opt, format, field);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : linflow::kExitInputError;
  }

  opt.json = format == "json";
  opt.relation = relation == "smooth" ? linflow::Relation::smooth : linflow::Relation::topological;
  if (!field.empty()) opt.field = field == "complex" ? linflow::Field::complex : linflow::Field::real;

  if (*classify) return linflow::cmd_classify(input, opt, std::cout, std::cerr);
  if (*compare) {
    if (!batch.empty()) {
      if (!a.empty() || !b.empty()) {
        std::cerr << "linflow compare: --batch takes no positional matrices\n";
        return linflow::kExitInputError;
      }
      return linflow::cmd_batch(batch, opt, std::cout, std::cerr);
    }
    if (a.empty() || b.empty()) {
      std::cerr << "linflow compare: two matrices are required (or --batch FILE)\n";
      return linflow::kExitInputError;
    }
    return linflow::cmd_compare(a, b, opt, std::cout, std::cerr);
  }
  if (*enum2) return linflow::cmd_enum2(opt, std::cout, std::cerr);
  if (*selftest) return linflow::cmd_selftest(opt, std::cout, std::cerr);
  return linflow::kExitInputError;
}
