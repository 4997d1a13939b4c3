#include "flaglab/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "flaglab/errors.hpp"

namespace flaglab {

namespace {

template <class F>
auto guarded(const char* what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string(what) + ": " + e.what());
  }
}

std::vector<std::vector<double>> to_rows(const Matrix& m) {
  std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

Matrix square_from(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InvalidInput(std::string(what) + " must be a nonempty array of rows");
  const std::size_t n = j.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw InvalidInput(std::string(what) + " is not square");
    for (std::size_t k = 0; k < n; ++k) {
      if (!j[i][k].is_number()) throw InvalidInput(std::string(what) + " has a non-numeric entry");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

RationalMatrix rational_from(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("exact entries must be a nonempty array of rows");
  const int n = static_cast<int>(j.size());
  RationalMatrix q(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != n) throw InvalidInput("exact entries are not square");
    for (int k = 0; k < n; ++k) {
      const Json& e = j[i][k];
      if (e.is_string())
        q(i, k) = parse_rational(e.get<std::string>());
      else if (e.is_number_integer())
        q(i, k) = Rational(e.get<long long>());
      else
        throw InvalidInput("exact entries must be strings 'p/q' or integers");
    }
  }
  return q;
}

bool all_strings(const Json& j) {
  for (const auto& row : j) {
    if (!row.is_array()) return false;
    for (const auto& e : row)
      if (!e.is_string()) return false;
  }
  return true;
}

Json rational_to_json(const RationalMatrix& q) {
  Json rows = Json::array();
  for (int i = 0; i < q.dim(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < q.dim(); ++k) row.push_back(to_string(q(i, k)));
    rows.push_back(row);
  }
  return rows;
}

Json table(const std::vector<std::vector<double>>& t) { return Json(t); }

std::vector<std::vector<double>> table_from(const Json& j) { return j.get<std::vector<std::vector<double>>>(); }

}  // namespace

Matrix matrix_from_json(const Json& j) { return square_from(j, "matrix"); }

Json matrix_to_json(const Matrix& m) { return Json(to_rows(m)); }

GroupElement element_from_json(const Json& j) {
  if (j.is_array()) {
    if (all_strings(j)) return GroupElement::from_exact(rational_from(j));
    return GroupElement::from_matrix(square_from(j, "matrix"));
  }
  if (!j.is_object()) throw InvalidInput("matrix must be an array of rows or an object");
  if (!j.contains("exact")) {
    if (!j.contains("entries")) throw InvalidInput("matrix object needs 'entries' or 'exact'");
    return GroupElement::from_matrix(square_from(j.at("entries"), "entries"));
  }
  const RationalMatrix q = rational_from(j.at("exact"));
  if (j.contains("entries")) {
    const Matrix m = square_from(j.at("entries"), "entries");
    const Matrix image = q.to_double();
    if (m.rows() != image.rows()) throw InvalidInput("entries and exact entries differ in size");
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        if (std::abs(m(r, c) - image(r, c)) > 1e-12 * std::max(1.0, std::abs(image(r, c))))
          throw InvalidInput("entries are not the floating image of the exact entries");
  }
  return GroupElement::from_exact(q);
}

Json element_to_json(const GroupElement& g) {
  Json j;
  j["entries"] = matrix_to_json(g.matrix());
  if (g.has_exact()) j["exact"] = rational_to_json(g.exact());
  return j;
}

std::vector<GroupElement> generators_from_json(const Json& j) {
  const Json& list = j.is_object() ? j.at("generators") : j;
  if (!list.is_array() || list.empty()) throw InvalidInput("generator list must be a nonempty array");
  std::vector<GroupElement> out;
  for (const auto& g : list) out.push_back(element_from_json(g));
  for (const auto& g : out)
    if (g.dim() != out.front().dim()) throw InvalidInput("generators have different dimensions");
  return out;
}

std::vector<GroupElement> load_generators(const std::string& path) {
  return guarded("generators", [&] { return generators_from_json(read_json_file(path)); });
}

Json flag_to_json(const Flag& f) { return {{"frame", matrix_to_json(f.frame())}, {"kind", "flag"}}; }

Json flag_to_json(const OppositeFlag& f) { return {{"frame", matrix_to_json(f.frame())}, {"kind", "opposite"}}; }

Flag flag_from_json(const Json& j) {
  return guarded("flag", [&] {
    if (j.at("kind").get<std::string>() != "flag") throw InvalidInput("expected kind 'flag'");
    return Flag::from_orthonormal(square_from(j.at("frame"), "frame"));
  });
}

OppositeFlag opposite_flag_from_json(const Json& j) {
  return guarded("opposite flag", [&] {
    if (j.at("kind").get<std::string>() != "opposite") throw InvalidInput("expected kind 'opposite'");
    return OppositeFlag::from_orthonormal(square_from(j.at("frame"), "frame"));
  });
}

Json cartan_to_json(const CartanVector& h) {
  return std::vector<double>(h.coords().data(), h.coords().data() + h.coords().size());
}

Json to_json(const ContractionCertificate& c) {
  return {{"epsilon", c.epsilon},
          {"element_id", c.element_id},
          {"attracting", flag_to_json(c.attracting)},
          {"repelling", flag_to_json(c.repelling)},
          {"margin_a", c.margin_a},
          {"image_radius", c.image_radius},
          {"max_ratio", c.max_ratio},
          {"lipschitz_bound", c.lipschitz_bound},
          {"samples", c.samples},
          {"seed", c.seed},
          {"verdict", c.pass ? "pass" : "fail"}};
}

ContractionCertificate contraction_certificate_from_json(const Json& j) {
  return guarded("contraction certificate", [&] {
    ContractionCertificate c;
    c.epsilon = j.at("epsilon").get<double>();
    c.element_id = j.at("element_id").get<std::string>();
    c.attracting = flag_from_json(j.at("attracting"));
    c.repelling = opposite_flag_from_json(j.at("repelling"));
    c.margin_a = j.at("margin_a").get<double>();
    c.image_radius = j.at("image_radius").get<double>();
    c.max_ratio = j.at("max_ratio").get<double>();
    c.lipschitz_bound = j.at("lipschitz_bound").get<double>();
    c.samples = j.at("samples").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.pass = j.at("verdict").get<std::string>() == "pass";
    return c;
  });
}

Json to_json(const ExactCrosscheck& x) {
  Json w = Json::array();
  for (const auto& [a, b] : x.witnesses) w.push_back({a, b});
  return {{"max_len", x.max_len}, {"words", x.words}, {"collisions", x.collisions}, {"witnesses", w}};
}

Json to_json(const FreenessCertificate& c) {
  Json per = Json::array();
  for (const auto& p : c.per_generator) per.push_back(to_json(p));
  Json j = {{"epsilon", c.epsilon},
            {"generators", c.generator_ids},
            {"per_generator", per},
            {"pairwise_separation", table(c.pairwise_separation)},
            {"shadow_disjointness", table(c.shadow_disjointness)},
            {"shadow_radii", c.shadow_radii},
            {"failures", c.failures},
            {"verdict", c.pass ? "pass" : "fail"}};
  j["exact_crosscheck"] = c.exact_crosscheck ? to_json(*c.exact_crosscheck) : Json(nullptr);
  return j;
}

FreenessCertificate freeness_certificate_from_json(const Json& j) {
  return guarded("freeness certificate", [&] {
    FreenessCertificate c;
    c.epsilon = j.at("epsilon").get<double>();
    c.generator_ids = j.at("generators").get<std::vector<std::string>>();
    for (const auto& p : j.at("per_generator")) c.per_generator.push_back(contraction_certificate_from_json(p));
    c.pairwise_separation = table_from(j.at("pairwise_separation"));
    c.shadow_disjointness = table_from(j.at("shadow_disjointness"));
    c.shadow_radii = j.at("shadow_radii").get<std::vector<double>>();
    c.failures = j.at("failures").get<std::vector<std::string>>();
    c.pass = j.at("verdict").get<std::string>() == "pass";
    const std::size_t k = c.per_generator.size();
    if (c.generator_ids.size() != k || c.pairwise_separation.size() != k || c.shadow_disjointness.size() != k ||
        c.shadow_radii.size() != k)
      throw InvalidInput("certificate tables do not match the generator count");
    for (std::size_t i = 0; i < k; ++i)
      if (c.pairwise_separation[i].size() != k || c.shadow_disjointness[i].size() != k)
        throw InvalidInput("certificate tables are not square");
    const Json& x = j.at("exact_crosscheck");
    if (!x.is_null()) {
      ExactCrosscheck e;
      e.max_len = x.at("max_len").get<int>();
      e.words = x.at("words").get<std::size_t>();
      e.collisions = x.at("collisions").get<std::size_t>();
      for (const auto& w : x.at("witnesses")) e.witnesses.push_back({w.at(0).get<Word>(), w.at(1).get<Word>()});
      c.exact_crosscheck = e;
    }
    return c;
  });
}

Json to_json(const OrbitRecord& r) {
  return {{"word", r.word},
          {"matrix", element_to_json(r.matrix)},
          {"kappa", cartan_to_json(r.kappa)},
          {"kflag", flag_to_json(r.kflag)},
          {"lflag", flag_to_json(r.lflag)}};
}

Json to_json(const GrowthReport& r) {
  Json by_radius = Json::object();
  for (const auto& [len, count] : r.counts_by_radius) by_radius[std::to_string(len)] = count;
  return {{"delta_hat", r.delta_hat},
          {"fit_window", {r.fit_window.first, r.fit_window.second}},
          {"fit_residual", r.fit_residual},
          {"bin_width", r.bin_width},
          {"sample_size", r.sample_size},
          {"counts_by_radius", by_radius}};
}

Json to_json(const AnosovFit& f) {
  Json by_len = Json::object();
  for (const auto& [len, m] : f.min_root_by_length) by_len[std::to_string(len)] = m;
  return {{"C_hat", f.C_hat},         {"c_hat", f.c_hat},           {"min_ratio", f.min_ratio},
          {"head_slope", f.head_slope}, {"tail_slope", f.tail_slope}, {"min_root_by_length", by_len},
          {"verdict", f.pass ? "pass" : "fail"}};
}

Json to_json(const DefectStats& d) {
  return {{"max_defect", d.max_defect},
          {"mean_defect", d.mean_defect},
          {"histogram_bin", d.histogram_bin},
          {"histogram", d.histogram},
          {"pairs", d.pairs}};
}

Json to_json(const ZariskiReport& z) {
  return {{"span_dimension", z.span_dimension}, {"full_dimension", z.full_dimension},
          {"jordan_rank", z.jordan_rank},       {"loxodromic_count", z.loxodromic_count},
          {"verdict", z.verdict}};
}

void write_growth_csv(std::ostream& out, const GrowthReport& r) {
  out << "T,N,logN\n";
  out.precision(17);
  for (std::size_t i = 0; i < r.edges.size(); ++i) {
    out << r.edges[i] << ',' << r.cumulative[i] << ',';
    if (r.cumulative[i] > 0) out << std::log(static_cast<double>(r.cumulative[i]));
    out << '\n';
  }
}

void write_cone_csv(std::ostream& out, const std::vector<IndicatorPoint>& curve) {
  out << "angle,tau_hat,sample_size\n";
  out.precision(17);
  for (const auto& p : curve) {
    out << p.angle << ',';
    if (p.tau_hat) out << *p.tau_hat;
    out << ',' << p.sample_size << '\n';
  }
}

void write_calibration_csv(std::ostream& out, const std::vector<CalibrationRow>& rows) {
  out << "epsilon,n,R_min_zero_violation,probes\n";
  out.precision(17);
  for (const auto& r : rows) {
    out << r.epsilon << ',' << r.n << ',';
    if (r.R_min) out << *r.R_min;
    out << ',' << r.probes << '\n';
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidInput("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

}  // namespace flaglab
