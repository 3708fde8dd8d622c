#include "qcurv/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qcurv {

namespace {

std::string fmt_float(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

void indent(std::ostream& os, int level) {
  for (int i = 0; i < level; ++i) os << "  ";
}

void dump(std::ostream& os, const Json& j, int level) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
        if (!first) os << ",\n";
        first = false;
        indent(os, level + 1);
        os << Json(it.key()).dump() << ": ";
        dump(os, it.value(), level + 1);
      }
      os << "\n";
      indent(os, level);
      os << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        indent(os, level + 1);
        dump(os, j[i], level + 1);
      }
      os << "\n";
      indent(os, level);
      os << "]";
      return;
    }
    case Json::value_t::number_float:
      os << fmt_float(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

Json complex_json(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

double d(real v) { return static_cast<double>(v); }

Json reals(const std::vector<real>& v) {
  Json a = Json::array();
  for (real x : v) a.push_back(d(x));
  return a;
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else if (j.is_number_float()) {
    out.emplace_back(prefix, fmt_float(j.get<double>()));
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

}  // namespace

void dump_json(std::ostream& os, const Json& j) {
  dump(os, j, 0);
  os << "\n";
}

std::string dump_json(const Json& j) {
  std::ostringstream os;
  dump_json(os, j);
  return os.str();
}

Json to_json(const CurvatureConstants& c) {
  return Json{{"n", c.n},           {"R", d(c.R_hyp)},     {"Q", d(c.Q_hyp)},       {"ric_sq", d(c.ric_sq)},
              {"a_n", d(c.a_n)},    {"b_n", d(c.b_n)},     {"c_laplacian", d(c.c_lap)}, {"weyl_sq", d(c.weyl_sq)}};
}

Json to_json(const BoundarySpectrum& s) {
  Json j;
  j["roots"] = Json::array();
  for (std::size_t i = 0; i < s.roots.size(); ++i) {
    Json r = complex_json(s.roots[i]);
    r["oscillatory"] = static_cast<bool>(s.oscillatory[i]);
    j["roots"].push_back(r);
  }
  j["lambda_set"] = s.lambda_set;
  j["delta_bar"] = s.delta_bar;
  j["delta_under"] = s.delta_under;
  j["log_terms_possible"] = s.log_terms_possible;
  j["holder_window"] = Json::array({s.holder_lo, s.holder_hi});
  j["factors"] = Json::array();
  for (const auto& f : s.poly.factors) j["factors"].push_back(Json{{"b", f.b}, {"c", f.c}});
  if (s.alpha) j["alpha"] = *s.alpha;
  if (s.alpha_tilde_sq) j["alpha_tilde_sq"] = *s.alpha_tilde_sq;
  return j;
}

Json to_json(const ExpansionFit& f) {
  return Json{{"leading_exponent", d(f.leading_exponent)},
              {"frequency", d(f.frequency)},
              {"a", d(f.a)},
              {"b", d(f.b)},
              {"u00", complex_json({static_cast<double>(f.u00().real()), static_cast<double>(f.u00().imag())})},
              {"x_window", Json::array({d(f.x_lo), d(f.x_hi)})},
              {"residual", d(f.residual)},
              {"remainder_exponent", d(f.remainder_exponent)},
              {"log_terms_flag", f.log_terms_flag},
              {"coefficients", reals(f.coefficients)}};
}

Json to_json(const SmallnessCheck& s) {
  return Json{{"g_norm", d(s.g_norm)},
              {"quad_constant", d(s.quad_constant)},
              {"radius", d(s.radius)},
              {"contraction_bound", d(s.contraction_bound)},
              {"target_bound", d(s.target_bound)},
              {"satisfied", s.satisfied}};
}

Json to_json(const SolveReport& r) {
  Json j{{"converged", r.converged},
         {"iterations", r.iterations},
         {"increments", reals(r.increments)},
         {"contraction_ratios", reals(r.ratios)},
         {"residual", d(r.residual)},
         {"amplitude", d(r.amplitude)},
         {"p1_amplitude", d(r.p1_amplitude)},
         {"p1_consistent", r.p1_consistent},
         {"correction_norm", d(r.correction_norm)},
         {"smallness", to_json(r.smallness)},
         {"log_terms_possible", r.log_terms_possible},
         {"failure", r.failure},
         {"warnings", r.warnings}};
  j["expansion"] = r.expansion ? to_json(*r.expansion) : Json(nullptr);
  return j;
}

Json to_json(const KernelElement& k, const FactoredOperator& op) {
  LeadingForm form = op.kernel_form();
  Window w = default_fit_window(op);
  return Json{{"amplitude", d(k.amplitude)},
              {"leading_form", Json{{"oscillatory", form.oscillatory},
                                    {"exponent", d(form.p)},
                                    {"frequency", d(form.beta)},
                                    {"powers", reals(form.powers)}}},
              {"leading_fit", reals(k.leading_fit)},
              {"free_fit", Json{{"exponent", k.free_fit.p}, {"frequency", k.free_fit.beta}, {"residual", k.free_fit.residual}}},
              {"envelope_exponent", k.envelope_exponent},
              {"fit_window_r", Json::array({d(w.r_lo), d(w.r_hi)})},
              {"regular_at_origin", k.regular_at_origin},
              {"domain", op.grid()->has_origin() ? "ball" : "end"}};
}

void write_profile_csv(std::ostream& os, const Profile& p) {
  os << "r,x";
  for (const auto& c : p.columns) os << "," << c.first;
  os << "\n";
  for (std::size_t i = 0; i < p.grid->size(); ++i) {
    os << fmt_float(d(p.grid->r(i))) << "," << fmt_float(d(p.grid->x(i)));
    for (const auto& c : p.columns) os << "," << fmt_float(d(c.second[i]));
    os << "\n";
  }
}

void write_table_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt_float(row[i]);
    os << "\n";
  }
}

void write_flat_csv(std::ostream& os, const Json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  os << "key,value\n";
  for (const auto& [k, v] : rows) os << k << "," << v << "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os << text;
    if (!os) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace qcurv
