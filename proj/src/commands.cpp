#include "linflow/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <vector>

#include "linflow/canonical.hpp"
#include "linflow/cores.hpp"
#include "linflow/kernels.hpp"
#include "linflow/matrix_io.hpp"
#include "linflow/ratclass.hpp"
#include "linflow/report.hpp"
#include "linflow/special.hpp"
#include "linflow/witness.hpp"

namespace linflow {

namespace {

void emit(const json& report, const CliOptions& opt, std::ostream& out) {
  if (opt.json)
    out << report.dump(2) << "\n";
  else
    out << render_text(report);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const DimensionError*>(&e) ||
      dynamic_cast<const NonFiniteInput*>(&e) || dynamic_cast<const NotBounded*>(&e))
    return kExitInputError;
  return kExitInternal;
}

const char* error_kind(int code) { return code == kExitInputError ? "input" : "internal"; }

// Runs `body`; on an exception prints the diagnostic (and a JSON error
// report in JSON mode) and maps it to an exit code.
template <class F>
int guarded(const std::string& command, const CliOptions& opt, std::ostream& out, std::ostream& err,
            F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    err << "linflow " << command << ": " << error_kind(code) << " error: " << e.what() << "\n";
    if (opt.json) {
      json r = {{"tool", "linflow"},
                {"version", kVersion},
                {"command", command},
                {"error", {{"kind", error_kind(code)}, {"message", e.what()}, {"exit_code", code}}}};
      out << r.dump(2) << "\n";
    }
    return code;
  }
}

std::size_t fix_dim(const JordanStructure& s) {
  for (const auto& g : s.blocks)
    if (g.eigenvalue == Scalar{}) return g.sizes.size();
  return 0;
}

}  // namespace

int cmd_classify(const std::string& source, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("classify", opt, out, err, [&] {
    opt.tol.validate();
    const Mat a = load_matrix(source, opt.field);
    require_square(a, ("classify input (shape " + std::to_string(a.rows()) + "x" +
                       std::to_string(a.cols()) + ")")
                          .c_str());
    const Mat r = realify(a);
    const double scale = default_scale(r);
    const ScuSplit split = scu_split(r, opt.tol, scale);
    const JordanStructure js = jordan_structure(a, opt.tol);
    const JordanStructure real_js = a.field() == Field::real ? js : jordan_structure(r, opt.tol, scale);
    const Subspace bnd = bounded_subspace(r, opt.tol);
    json results = {
        {"dimension", a.rows()},
        {"field", to_string(a.field())},
        {"real_dimension", r.rows()},
        {"spectral_split", {{"stable", split.dim_s}, {"central", split.dim_c}, {"unstable", split.dim_u}}},
        {"jordan_structure", structure_to_json(js)},
        {"descriptors",
         {{"topological", descriptor_to_json(descriptor(a, Relation::topological, opt.tol))},
          {"smooth", descriptor_to_json(descriptor(a, Relation::smooth, opt.tol))}}},
        {"cores",
         {{"core", core(r, opt.tol).dim()},
          {"zero_core", zero_core(r, opt.tol).dim()},
          {"bounded", bnd.dim()},
          {"profile", profile_to_json(core_profile(r, opt.tol))}}}};
    if (bnd.dim() > 0) {
      const Mat ab = restrict_to(r, bnd.basis);
      results["rational_classes"] = partition_to_json(rational_partition(ab, opt.tol, opt.qmax, scale));
    } else {
      results["rational_classes"] = nullptr;
    }
    std::vector<std::string> notes;
    if (split.dim_c == 0) notes.push_back("hyperbolic");
    if (split.dim_c == r.rows()) notes.push_back("central");
    if (bnd.dim() == r.rows()) notes.push_back("all bounded");
    if (fix_dim(real_js) == r.rows()) notes.push_back("Fix = X");
    std::string summary;
    for (const auto& n : notes) summary += (summary.empty() ? "" : ", ") + n;
    results["summary"] = summary;
    emit(make_report("classify", json::array({input_to_json(source, a)}), opt.tol, opt.qmax, results), opt,
         out);
    return kExitOk;
  });
}

CompareOutcome compare_matrices(const std::string& source_a, const Mat& a_in, const std::string& source_b,
                                const Mat& b_in, const CliOptions& opt) {
  CompareOutcome oc;
  oc.inputs = json::array({input_to_json(source_a, a_in), input_to_json(source_b, b_in)});
  Mat a = a_in, b = b_in;
  if (opt.realify) {
    a = realify(a);
    b = realify(b);
  }
  if (a.field() != b.field())
    throw DimensionError(std::string("field mismatch: first input is ") + to_string(a.field()) +
                         ", second is " + to_string(b.field()) + " (use --realify or --field)");
  require_square(a, "first input");
  require_square(b, "second input");
  if (a.rows() != b.rows())
    throw DimensionError("dimension mismatch: " + std::to_string(a.rows()) + " vs " +
                         std::to_string(b.rows()));
  const Verdict v = verdict(opt.relation, a, b, opt.tol);
  oc.results = {{"verdict", verdict_to_json(v)}, {"realified", opt.realify}};
  oc.results["certificate"] = nullptr;
  oc.results["residual"] = nullptr;
  if (v.equivalent && v.certificate && v.alpha) {
    const bool central = v.relation == Relation::topological;
    const Mat& ga = central ? *v.central_a : a;
    const Mat& gb = central ? *v.central_b : b;
    if (ga.rows() > 0) {
      const ResidualReport rr = verify_conjugacy(ga, gb, *v.certificate, *v.alpha, opt.tol);
      oc.results["residual"] = residual_to_json(rr);
      oc.results["certificate"] = {{"acts_on", central ? "central parts" : "generators"},
                                   {"matrix", matrix_to_json(*v.certificate)}};
      if (central) {
        oc.results["certificate"]["central_a"] = matrix_to_json(ga);
        oc.results["certificate"]["central_b"] = matrix_to_json(gb);
      }
    }
  }
  oc.code = v.equivalent ? kExitOk : kExitNotEquivalent;
  return oc;
}

int cmd_compare(const std::string& sa, const std::string& sb, const CliOptions& opt, std::ostream& out,
                std::ostream& err) {
  return guarded("compare", opt, out, err, [&] {
    opt.tol.validate();
    const Mat a = load_matrix(sa, opt.field);
    const Mat b = load_matrix(sb, opt.field);
    CompareOutcome oc = compare_matrices(sa, a, sb, b, opt);
    json results = oc.results;
    results["relation"] = to_string(opt.relation);
    if (!opt.certificate_out.empty()) {
      std::ofstream f(opt.certificate_out);
      if (!f) throw InvalidArgument("cannot write " + opt.certificate_out);
      json cert = {{"relation", to_string(opt.relation)},
                   {"alpha", results["verdict"]["alpha"]},
                   {"certificate", results["certificate"]}};
      f << cert.dump(2) << "\n";
      results["certificate_path"] = opt.certificate_out;
    }
    emit(make_report("compare", oc.inputs, opt.tol, opt.qmax, results), opt, out);
    return oc.code;
  });
}

namespace {

struct BatchLine {
  std::size_t line = 0;
  std::string a, b;
  std::optional<Relation> relation;
};

std::string resolve(const std::string& src, const std::filesystem::path& base) {
  std::error_code ec;
  if (std::filesystem::exists(src, ec) || src.empty() || src.front() == '[' || src.front() == '{') return src;
  const auto alt = base / src;
  if (std::filesystem::exists(alt, ec)) return alt.string();
  return src;
}

// Whitespace splits fields except inside [..] or {..}, so inline matrices
// like "[0 -1; 1 0]" stay one token.
std::vector<std::string> split_batch_line(const std::string& raw, std::size_t ln) {
  std::vector<std::string> tok;
  std::string cur;
  int depth = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '[' || c == '{') ++depth;
    if (c == ']' || c == '}') {
      if (--depth < 0) throw ParseError("unbalanced bracket", ln, i + 1);
    }
    if (depth == 0 && (c == ' ' || c == '\t' || c == '\r')) {
      if (!cur.empty()) tok.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (depth != 0) throw ParseError("unbalanced bracket", ln, raw.size());
  if (!cur.empty()) tok.push_back(std::move(cur));
  return tok;
}

}  // namespace

int cmd_batch(const std::string& file, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("compare --batch", opt, out, err, [&] {
    opt.tol.validate();
    std::ifstream in(file);
    if (!in) throw InvalidArgument("cannot read batch file " + file);
    const auto base = std::filesystem::path(file).parent_path();
    std::vector<BatchLine> jobs;
    std::string raw;
    for (std::size_t ln = 1; std::getline(in, raw); ++ln) {
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.resize(hash);
      const std::vector<std::string> tok = split_batch_line(raw, ln);
      if (tok.empty()) continue;
      if (tok.size() < 2 || tok.size() > 3)
        throw ParseError("expected 'A B [relation]'", ln, 1);
      BatchLine job{ln, resolve(tok[0], base), resolve(tok[1], base), std::nullopt};
      if (tok.size() == 3) {
        if (tok[2] == "smooth") job.relation = Relation::smooth;
        else if (tok[2] == "topological") job.relation = Relation::topological;
        else throw ParseError("unknown relation '" + tok[2] + "'", ln, raw.find(tok[2]) + 1);
      }
      jobs.push_back(std::move(job));
    }
    std::vector<json> results(jobs.size());
    std::vector<int> codes(jobs.size(), kExitOk);
    kernels::for_each_parallel(jobs.size(), [&](std::size_t i) {
      const BatchLine& job = jobs[i];
      CliOptions o = opt;
      if (job.relation) o.relation = *job.relation;
      json entry = {{"line", job.line}, {"a", job.a}, {"b", job.b}, {"relation", to_string(o.relation)}};
      try {
        const Mat a = load_matrix(job.a, o.field);
        const Mat b = load_matrix(job.b, o.field);
        CompareOutcome oc = compare_matrices(job.a, a, job.b, b, o);
        entry["inputs"] = oc.inputs;
        entry["results"] = oc.results;
        codes[i] = oc.code;
      } catch (const std::exception& e) {
        codes[i] = exit_code_for(e);
        entry["error"] = {{"kind", error_kind(codes[i])}, {"message", e.what()}};
      }
      entry["exit_code"] = codes[i];
      results[i] = std::move(entry);
    });
    int code = kExitOk;
    for (int c : codes) code = std::max(code, c);
    json inputs = json::array({{{"source", file}, {"comparisons", jobs.size()}}});
    emit(make_report("compare", inputs, opt.tol, opt.qmax, {{"batch", results}}), opt, out);
    return code;
  });
}

int cmd_enum2(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("enum2", opt, out, err, [&] {
    opt.tol.validate();
    const auto cat = catalog_2x2(opt.relation);
    const std::size_t n = cat.size();
    std::vector<std::vector<bool>> eq(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        eq[i][j] = verdict(opt.relation, cat[i].matrix, cat[j].matrix, opt.tol).equivalent;
    // classes found = connected components of the verdict graph
    std::vector<std::size_t> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (eq[i][j]) {
          const std::size_t lo = std::min(comp[i], comp[j]), hi = std::max(comp[i], comp[j]);
          for (auto& c : comp)
            if (c == hi) c = lo;
        }
    std::vector<std::size_t> roots(comp);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    std::vector<std::size_t> ids;
    for (const auto& e : cat) ids.push_back(e.class_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    bool matches = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (eq[i][j] != (cat[i].class_id == cat[j].class_id)) matches = false;
    json entries = json::array();
    for (const auto& e : cat) {
      json j = {{"label", e.label}, {"matrix", matrix_to_json(e.matrix)}, {"class_id", e.class_id}};
      if (e.parameter) {
        j["parameter"] = *e.parameter;
        j["constraint"] = e.constraint;
        j["sample"] = e.sample;
      }
      entries.push_back(std::move(j));
    }
    json matrix = json::array();
    for (const auto& row : eq) {
      std::string s;
      for (bool b : row) s += b ? '1' : '0';
      matrix.push_back(s);
    }
    json results = {{"relation", to_string(opt.relation)},
                    {"entries", std::move(entries)},
                    {"verdict_matrix", std::move(matrix)},
                    {"classes_found", roots.size()},
                    {"classes_labeled", ids.size()},
                    {"partition_matches", matches}};
    emit(make_report("enum2", json::array(), opt.tol, opt.qmax, results), opt, out);
    return matches ? kExitOk : kExitInternal;
  });
}

int cmd_selftest(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("selftest", opt, out, err, [&] {
    opt.tol.validate();
    json checks = json::array();
    bool all = true;
    auto add = [&](const std::string& name, double dev, double bound) {
      const bool pass = dev <= bound;
      all = all && pass;
      checks.push_back({{"name", name}, {"max_deviation", dev}, {"bound", bound}, {"pass", pass}});
    };
    double det_dev = 0.0;
    for (std::size_t m = 1; m <= 6; ++m)
      for (double w : {0.5, 1.0, 2.25, 7.0, -0.5}) {
        const Mat d = delta_matrix({m, m, w});
        // determinant from LU of the small matrix
        Mat lu = d;
        double det = 1.0;
        for (std::size_t k = 0; k < m; ++k) {
          std::size_t p = k;
          for (std::size_t r = k + 1; r < m; ++r)
            if (std::abs(lu(r, k)) > std::abs(lu(p, k))) p = r;
          if (p != k) {
            det = -det;
            for (std::size_t c = 0; c < m; ++c) std::swap(lu(k, c), lu(p, c));
          }
          det *= lu(k, k).real();
          if (lu(k, k) == Scalar{}) break;
          for (std::size_t r = k + 1; r < m; ++r) {
            const Scalar f = lu(r, k) / lu(k, k);
            for (std::size_t c = k; c < m; ++c) lu(r, c) -= f * lu(k, c);
          }
        }
        double prod = 1.0;
        for (std::size_t j = 1; j <= m; ++j)
          prod *= std::tgamma(static_cast<double>(j)) / std::tgamma(w + static_cast<double>(j));
        det_dev = std::max(det_dev, std::abs(det - prod) / std::abs(prod));
      }
    add("det Delta_{m,m}^[w] vs product of Gamma ratios (relative)", det_dev, 1e-8);
    double part_dev = 0.0;
    for (std::size_t m = 1; m <= 7; ++m)
      for (std::size_t j = 1; j <= m; ++j)
        for (double t : {-10.0, -1.0, -0.5, 0.5, 1.0, 10.0}) {
          const Mat e = matexp(nilpotent_block(m), t);
          part_dev = std::max(part_dev, rel_diff(exp_block_partition(m, j, t), e));
        }
    add("block partition of exp(t J_m) vs matrix exponential", part_dev, 1e-9);
    double lim_dev = 0.0;
    for (std::size_t m = 2; m <= 6; ++m)
      for (double w : {1e3, 1e6}) {
        Mat d = diag_powers(m, w) * Scalar(std::pow(w, 1.0 - static_cast<double>(m)));
        d(m - 1, m - 1) -= 1.0;
        lim_dev = std::max(lim_dev, d.norm_max());
      }
    add("w^(1-m) D_m(w) vs corner limit at w = 1e3, 1e6", lim_dev, 1e-3);
    double inv_dev = 0.0;
    for (std::size_t m = 1; m <= 6; ++m)
      for (double w : {0.5, 2.0, -3.0}) inv_dev = std::max(inv_dev, rel_diff(diag_powers(m, w) * diag_powers(m, 1.0 / w), Mat::identity(m)));
    add("D_m(w) D_m(1/w) vs identity", inv_dev, 1e-12);
    json results = {{"checks", std::move(checks)}, {"pass", all}};
    emit(make_report("selftest", json::array(), opt.tol, opt.qmax, results), opt, out);
    return all ? kExitOk : kExitInternal;
  });
}

}  // namespace linflow
