#include "linflow/report.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

#include "linflow/matrix_io.hpp"

namespace linflow {

json scalar_to_json(Scalar z) { return json::array({z.real(), z.imag()}); }

json structure_to_json(const JordanStructure& s) {
  json blocks = json::array();
  for (const auto& g : s.blocks)
    blocks.push_back({{"eigenvalue", scalar_to_json(g.eigenvalue)}, {"sizes", g.sizes}});
  return {{"field", to_string(s.field)}, {"blocks", std::move(blocks)}};
}

json descriptor_to_json(const ClassDescriptor& d) {
  json j = {{"relation", to_string(d.relation)},
            {"field", to_string(d.field)},
            {"dimension", d.dimension}};
  if (d.relation == Relation::topological) {
    j["dim_s"] = d.dim_s;
    j["dim_u"] = d.dim_u;
    j["central_structure"] = structure_to_json(d.central);
  } else {
    j["structure"] = structure_to_json(d.full);
  }
  return j;
}

json residual_to_json(const ResidualReport& r) {
  return {{"max_residual", r.max_residual}, {"bound", r.bound}, {"grid", r.grid}, {"pass", r.pass}};
}

json verdict_to_json(const Verdict& v) {
  json criteria = json::array();
  for (const auto& c : v.criteria) criteria.push_back({{"name", c.name}, {"holds", c.holds}, {"detail", c.detail}});
  json j = {{"relation", to_string(v.relation)},
            {"field", to_string(v.field)},
            {"equivalent", v.equivalent},
            {"alpha", v.alpha ? json(*v.alpha) : json(nullptr)},
            {"reason", v.reason},
            {"criteria", std::move(criteria)},
            {"dims",
             {{"a", {{"stable", v.dim_s_a}, {"central", v.dim_c_a}, {"unstable", v.dim_u_a}}},
              {"b", {{"stable", v.dim_s_b}, {"central", v.dim_c_b}, {"unstable", v.dim_u_b}}}}}};
  if (!v.classes.empty()) {
    json cls = json::array();
    for (const auto& c : v.classes)
      cls.push_back({{"class_a", c.class_a},
                     {"class_b", c.class_b},
                     {"period_a", c.period_a},
                     {"period_b", c.period_b}});
    j["rational_classes"] = std::move(cls);
  }
  return j;
}

json profile_to_json(const CoreProfile& p) {
  json freqs = json::array();
  for (std::size_t f = 0; f < p.frequencies.size(); ++f)
    freqs.push_back({{"s", p.frequencies[f]}, {"c", p.c[f]}, {"d", p.d[f]}});
  return {{"ambient_dim", p.ambient_dim}, {"frequencies", std::move(freqs)}};
}

json partition_to_json(const RationalPartition& p) {
  json classes = json::array();
  for (const auto& c : p.classes) {
    json ratios = json::array();
    for (const auto& r : c.ratios) ratios.push_back({r.p, r.q});
    classes.push_back({{"members", c.members},
                       {"generator", c.generator},
                       {"ratios", std::move(ratios)},
                       {"period", c.period},
                       {"member_dims", c.member_dims},
                       {"margin", c.margin}});
  }
  return {{"fixed_dim", p.fixed_dim}, {"classes", std::move(classes)}};
}

std::string digest(const Mat& a) {
  const std::string text = std::string(to_string(a.field())) + "\n" + emit_matrix_text(a);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json input_to_json(const std::string& source, const Mat& a) {
  return {{"source", source},
          {"field", to_string(a.field())},
          {"rows", a.rows()},
          {"cols", a.cols()},
          {"digest", digest(a)}};
}

json make_report(const std::string& command, const json& inputs, const Tolerance& tol,
                 std::int64_t qmax, json results) {
  return {{"tool", "linflow"},
          {"version", kVersion},
          {"command", command},
          {"inputs", inputs},
          {"tolerances",
           {{"rank_rel", tol.rank_rel},
            {"eig_cluster_rel", tol.eig_cluster_rel},
            {"residual_abs", tol.residual_abs},
            {"qmax", qmax}}},
          {"results", std::move(results)}};
}

namespace {

bool is_flat(const json& j) {
  if (!j.is_array()) return !j.is_object();
  for (const auto& e : j)
    if (!is_flat(e)) return false;
  return true;
}

void render(const json& j, int indent, std::ostringstream& os) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (is_flat(v)) {
        os << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      } else if (v.is_array() && v.empty()) {
        os << pad << k << ": []\n";
      } else {
        os << pad << k << ":\n";
        render(v, indent + 2, os);
      }
    }
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (is_flat(e)) {
        os << pad << "- " << (e.is_string() ? e.get<std::string>() : e.dump()) << "\n";
      } else {
        os << pad << "-\n";
        render(e, indent + 2, os);
      }
    }
  } else {
    os << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

std::string render_text(const json& report) {
  std::ostringstream os;
  render(report, 0, os);
  return os.str();
}

}  // namespace linflow
