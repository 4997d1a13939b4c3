#include "flaglab/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "flaglab/errors.hpp"

namespace flaglab {

namespace fs = std::filesystem;

namespace {

void log_stage(const std::string& line) { std::cerr << "[flaglab] " << line << '\n'; }

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

Dedup parse_dedup(const std::string& s) {
  if (s == "exact") return Dedup::Exact;
  if (s == "float" || s == "float-tolerant") return Dedup::Float;
  if (s == "none") return Dedup::None;
  throw InvalidInput("unknown dedup policy '" + s + "'");
}

const char* dedup_name(Dedup d) {
  switch (d) {
    case Dedup::Exact:
      return "exact";
    case Dedup::Float:
      return "float";
    case Dedup::None:
      return "none";
  }
  return "none";
}

bool all_exact(const std::vector<GroupElement>& gens) {
  return std::all_of(gens.begin(), gens.end(), [](const GroupElement& g) { return g.has_exact(); });
}

EnumerateOptions enumerate_options(const PipelineConfig& c) {
  EnumerateOptions o;
  o.radius = c.radius;
  o.include_inverses = c.include_inverses;
  o.node_cap = c.node_cap;
  o.dedup = c.dedup ? *c.dedup : (all_exact(c.generators) ? Dedup::Exact : Dedup::Float);
  return o;
}

SamplingBudget sampling_budget(const PipelineConfig& c) {
  SamplingBudget b;
  b.samples = c.samples;
  b.seed = c.seed;
  return b;
}

Json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void write_json(const fs::path& path, const Json& j) { write_text_file(path.string(), j.dump(2) + "\n"); }

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const BudgetExceeded*>(&e) || dynamic_cast<const InsufficientBudget*>(&e)) return kExitBudget;
  return kExitConfig;
}

Json config_echo(const PipelineConfig& c) {
  Json j = {{"target_delta", c.target_delta},
            {"epsilon", c.epsilon},
            {"radius", c.radius},
            {"include_inverses", c.include_inverses},
            {"dedup", dedup_name(enumerate_options(c).dedup)},
            {"samples", c.samples},
            {"node_cap", c.node_cap},
            {"retries", c.retries},
            {"probes", c.probes},
            {"width", c.width},
            {"seed", c.seed},
            {"bin_width", c.bin_width},
            {"generators", c.generators.size()},
            {"n", c.generators.empty() ? 0 : c.generators.front().dim()}};
  j["exact_check"] = c.exact_check ? Json(*c.exact_check) : Json(nullptr);
  j["n_min"] = c.n_min ? Json(*c.n_min) : Json("auto");
  j["R"] = c.R ? Json(*c.R) : Json("auto");
  j["cone"] = c.cone ? Json{{"axis", cartan_to_json(c.cone->axis())}, {"half_angle", c.cone->half_angle()}}
                     : Json("auto");
  j["anchors"] = c.anchor_x ? "explicit" : "auto";
  j["shadow_mode"] = c.shadow_mode == ShadowMode::Flag ? "flag" : "symmetric-space";
  return j;
}

// Barycentre of the sampled limit-cone directions, or the chamber's
// barycentric direction when that is not interior.
Vector indicator_direction(const PipelineConfig& c, const LimitConeSample& cone, int n) {
  if (c.direction) return *c.direction;
  Vector mean = Vector::Zero(n);
  for (const auto& v : cone.cartan) mean += v.coords();
  bool interior = mean.norm() > 0;
  for (int i = 0; interior && i + 1 < n; ++i) interior = mean(i) - mean(i + 1) > 1e-9;
  if (interior) return mean / mean.norm();
  Vector bary(n);
  for (int i = 0; i < n; ++i) bary(i) = (n - 1) - 2.0 * i;
  return bary / bary.norm();
}

struct GrowthOutputs {
  std::optional<GrowthReport> growth;
  std::vector<IndicatorPoint> curve;
  std::string error;
};

GrowthOutputs growth_outputs(const PipelineConfig& c, const std::vector<OrbitRecord>& records, const Vector& dir) {
  GrowthOutputs out;
  try {
    out.growth = estimate_delta(records, c.bin_width);
  } catch (const TooFewRecords& e) {
    out.error = e.what();
  }
  out.curve = growth_indicator_estimate(records, dir, c.angles, c.bin_width);
  return out;
}

Json curve_json(const std::vector<IndicatorPoint>& curve) {
  Json arr = Json::array();
  for (const auto& p : curve) {
    Json j = {{"angle", p.angle}, {"sample_size", p.sample_size}};
    j["tau_hat"] = p.tau_hat ? Json(*p.tau_hat) : Json(nullptr);
    if (!p.error.empty()) j["error"] = p.error;
    arr.push_back(j);
  }
  return arr;
}

void write_growth_files(const fs::path& dir, const GrowthOutputs& g) {
  std::ostringstream growth_csv, cone_csv;
  if (g.growth)
    write_growth_csv(growth_csv, *g.growth);
  else
    growth_csv << "T,N,logN\n";
  write_cone_csv(cone_csv, g.curve);
  write_text_file((dir / "growth.csv").string(), growth_csv.str());
  write_text_file((dir / "cone.csv").string(), cone_csv.str());
}

fs::path prepare_output(const PipelineConfig& c) {
  fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create output directory " + c.output_dir);
  return dir;
}

struct Anchors {
  Flag x;
  OppositeFlag y;
  std::optional<std::size_t> source;  // record index for automatic anchors
};

std::optional<Anchors> choose_anchors(const PipelineConfig& c, const std::vector<OrbitRecord>& records) {
  if (c.anchor_x && c.anchor_y) return Anchors{*c.anchor_x, *c.anchor_y, std::nullopt};
  std::optional<std::size_t> best;
  double best_root = -1.0;
  Anchors a;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double root = min_root_value(records[i].kappa);
    if (root <= best_root) continue;
    if (!is_loxodromic(records[i].matrix, 1e-6)) continue;
    const Flag x = attracting_flag(records[i].matrix, 1e-6);
    const OppositeFlag y = repelling_flag(records[i].matrix, 1e-6);
    if (!(c.epsilon / 2 < transversality_margin(x, y) / 8.0)) continue;
    best = i;
    best_root = root;
    a.x = x;
    a.y = y;
  }
  if (!best) return std::nullopt;
  a.source = best;
  return a;
}

std::vector<std::size_t> pinned_indices(const PipelineConfig& c, const std::vector<OrbitRecord>& cands) {
  std::vector<std::size_t> out;
  for (const auto& w : c.pinned)
    for (std::size_t i = 0; i < cands.size(); ++i)
      if (cands[i].word == w) {
        out.push_back(i);
        break;
      }
  return out;
}

double generator_sum(const std::vector<OrbitRecord>& s, double delta) {
  double sum = 0.0;
  for (const auto& r : s) sum += std::exp(-delta * r.kappa.norm());
  return sum;
}

// Largest radius L with sum_{l <= L} k^l <= cap, at most max_len.
int semigroup_radius(std::size_t k, int max_len, double cap) {
  int L = 1;
  double total = static_cast<double>(k);
  while (L < max_len) {
    const double next = total + std::pow(static_cast<double>(k), L + 1);
    if (next > cap) break;
    total = next;
    ++L;
  }
  return L;
}

Json checklist(const PipelineConfig& c, const FreenessCertificate& cert, const std::vector<OrbitRecord>& packed,
               const Flag& anchor_x, double sum) {
  std::vector<GroupElement> gens;
  for (const auto& r : packed) gens.push_back(r.matrix);
  EnumerateOptions o;
  o.radius = semigroup_radius(gens.size(), 6, 2e4);
  o.dedup = Dedup::None;
  const auto words = enumerate_ball(gens, o);

  Json j;
  bool contraction_ok = std::all_of(cert.per_generator.begin(), cert.per_generator.end(),
                                    [](const ContractionCertificate& p) { return p.pass; });
  j["1_contraction"] = {{"pass", contraction_ok}, {"generators", cert.per_generator.size()}};

  const ZariskiReport z = zariski_heuristic(words);
  j["2_zariski"] = to_json(z);

  // Discrete check of the growth property on short words.
  std::size_t checked = 0, violations = 0;
  for (const auto& r : words) {
    if (r.length() > std::min(4, o.radius - 1)) continue;
    double s = 0.0;
    for (const auto& g : gens) s += std::exp(-c.target_delta * cartan_projection(r.matrix * g).norm());
    ++checked;
    if (s < std::exp(-c.target_delta * r.kappa.norm()) * (1 - 1e-12)) ++violations;
  }
  j["3_generator_sum"] = {{"sum", sum},
                          {"pass", sum >= 1.0},
                          {"words_checked", checked},
                          {"word_violations", violations}};

  const AnosovFit fit = anosov_slope(words);
  j["4_anosov"] = to_json(fit);

  std::vector<GroupElement> short_words;
  for (const auto& r : words)
    if (r.length() <= 3) short_words.push_back(r.matrix);
  const DefectStats defect = subadditivity_defect(short_words, 100000, c.seed);
  const double busemann = busemann_cartan_constant(short_words, anchor_x);
  j["subadditivity"] = to_json(defect);
  j["subadditivity"]["busemann_cartan_constant"] = busemann;
  j["subadditivity"]["within_three_constants"] = defect.max_defect <= 3 * busemann;
  j["semigroup_radius"] = o.radius;
  return j;
}

}  // namespace

PipelineConfig config_from_json(const Json& j, const std::string& base_dir) {
  try {
    if (!j.is_object()) throw InvalidInput("config must be a JSON object");
    PipelineConfig c;
    const Json& g = j.at("generators");
    if (g.is_string()) {
      fs::path p(g.get<std::string>());
      if (p.is_relative()) p = fs::path(base_dir) / p;
      c.generators = load_generators(p.string());
    } else {
      c.generators = generators_from_json(g);
    }
    const int n = c.generators.front().dim();
    if (j.contains("n") && j.at("n").get<int>() != n) throw InvalidInput("config n does not match the generators");
    c.target_delta = j.value("target_delta", c.target_delta);
    c.epsilon = j.value("epsilon", c.epsilon);
    if (j.contains("cone") && !j.at("cone").is_string()) {
      const Json& cj = j.at("cone");
      const auto axis = cj.at("axis").get<std::vector<double>>();
      if (static_cast<int>(axis.size()) != n) throw InvalidInput("cone axis has the wrong length");
      c.cone = Cone::make(Eigen::Map<const Vector>(axis.data(), n), cj.at("half_angle").get<double>());
    }
    if (j.contains("anchor_x") && !j.at("anchor_x").is_string()) c.anchor_x = flag_from_json(j.at("anchor_x"));
    if (j.contains("anchor_y") && !j.at("anchor_y").is_string())
      c.anchor_y = opposite_flag_from_json(j.at("anchor_y"));
    if (c.anchor_x.has_value() != c.anchor_y.has_value())
      throw InvalidInput("anchor_x and anchor_y must both be explicit or both auto");
    if (j.contains("n_min") && !j.at("n_min").is_string()) c.n_min = j.at("n_min").get<double>();
    c.width = j.value("width", c.width);
    c.radius = j.value("radius", c.radius);
    c.include_inverses = j.value("include_inverses", c.include_inverses);
    if (j.contains("dedup")) c.dedup = parse_dedup(j.at("dedup").get<std::string>());
    if (j.contains("budgets")) {
      const Json& b = j.at("budgets");
      c.samples = b.value("samples", c.samples);
      c.node_cap = b.value("node_cap", c.node_cap);
      c.retries = b.value("retries", c.retries);
      c.probes = b.value("probes", c.probes);
    }
    if (j.contains("R") && !j.at("R").is_string()) c.R = j.at("R").get<double>();
    if (j.contains("R_grid")) c.R_grid = j.at("R_grid").get<std::vector<double>>();
    if (j.contains("shadow_mode")) {
      const auto m = j.at("shadow_mode").get<std::string>();
      if (m == "flag")
        c.shadow_mode = ShadowMode::Flag;
      else if (m == "symmetric-space")
        c.shadow_mode = ShadowMode::SymmetricSpace;
      else
        throw InvalidInput("unknown shadow_mode '" + m + "'");
    }
    if (j.contains("pinned")) c.pinned = j.at("pinned").get<std::vector<Word>>();
    if (j.contains("exact_check") && !j.at("exact_check").is_null()) c.exact_check = j.at("exact_check").get<int>();
    c.seed = j.value("seed", c.seed);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.bin_width = j.value("bin_width", c.bin_width);
    if (j.contains("angles")) c.angles = j.at("angles").get<std::vector<double>>();
    if (j.contains("direction")) {
      const auto d = j.at("direction").get<std::vector<double>>();
      if (static_cast<int>(d.size()) != n) throw InvalidInput("direction has the wrong length");
      c.direction = Eigen::Map<const Vector>(d.data(), n);
    }
    validate_config(c);
    return c;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

PipelineConfig load_config(const std::string& path) {
  return config_from_json(read_json_file(path), fs::path(path).parent_path().string());
}

void validate_config(const PipelineConfig& c) {
  if (c.generators.empty()) throw InvalidInput("no generators");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw InvalidInput("epsilon must lie in (0, 1)");
  if (!(c.target_delta >= 0.0)) throw InvalidInput("target_delta must be nonnegative");
  if (c.radius < 1) throw InvalidInput("radius must be at least 1");
  if (!(c.width > 0.0)) throw InvalidInput("width must be positive");
  if (c.retries < 0) throw InvalidInput("retries must be nonnegative");
  if (c.samples < 1000) throw InvalidInput("sampling budget must be at least 1000");
  if (!(c.bin_width > 0.0)) throw InvalidInput("bin_width must be positive");
  if (c.exact_check && *c.exact_check < 2) throw InvalidInput("exact check length must be at least 2");
  if (c.anchor_x && c.anchor_y) {
    const double z = transversality_margin(*c.anchor_x, *c.anchor_y);
    if (!(c.epsilon < z / 8.0))
      throw InvalidInput("epsilon must be below zeta(anchor_x, anchor_y) / 8 = " + std::to_string(z / 8.0));
  }
}

RunResult run_analyze(const PipelineConfig& config) {
  RunResult res;
  try {
    const fs::path dir = prepare_output(config);
    log_stage("enumerate radius " + std::to_string(config.radius));
    const auto records = enumerate_ball(config.generators, enumerate_options(config));
    log_stage("records " + std::to_string(records.size()));
    const LimitConeSample cone = limit_cone_sample(records);
    const Vector dir_v = indicator_direction(config, cone, config.generators.front().dim());
    log_stage("estimate growth");
    const GrowthOutputs g = growth_outputs(config, records, dir_v);
    if (!g.growth) throw TooFewRecords(g.error);
    write_growth_files(dir, g);

    double min_root = INFINITY;
    for (const auto& v : cone.cartan) min_root = std::min(min_root, min_root_value(v));
    Json rep = {{"command", "analyze"},
                {"config", config_echo(config)},
                {"records", records.size()},
                {"growth", to_json(*g.growth)},
                {"limit_cone",
                 {{"cartan_samples", cone.cartan.size()},
                  {"jordan_samples", cone.jordan.size()},
                  {"empty", cone.empty},
                  {"min_root_value", cone.empty ? Json(nullptr) : Json(min_root)}}},
                {"indicator_direction", vector_json(dir_v)},
                {"growth_indicator", curve_json(g.curve)},
                {"generated_at", timestamp()}};
    write_json(dir / "report.json", rep);
    res.report = rep;
    res.message = "delta_hat = " + std::to_string(g.growth->delta_hat);
  } catch (const Error& e) {
    res.exit_code = exit_code_for(e);
    res.message = e.what();
  }
  return res;
}

RunResult run_certify(const PipelineConfig& config) {
  RunResult res;
  try {
    const fs::path dir = prepare_output(config);
    std::optional<int> exact;
    if (config.exact_check) exact = config.exact_check;
    FreenessCertificate cert;
    try {
      cert = pingpong_certificate(config.generators, config.epsilon, sampling_budget(config), exact);
    } catch (const NotLoxodromic& e) {
      res.exit_code = kExitCertificateFail;
      res.message = "NotLoxodromic at generator " + std::to_string(e.index()) + ": " + e.what();
      res.report = {{"command", "certify"}, {"verdict", "fail"}, {"failures", {"NotLoxodromic"}},
                    {"index", e.index()}, {"generated_at", timestamp()}};
      write_json(dir / "report.json", res.report);
      return res;
    }
    Json gens = Json::array();
    for (const auto& g : config.generators) gens.push_back(element_to_json(g));
    write_json(dir / "certificate.json", {{"certificate", to_json(cert)}, {"generators", gens}});
    res.report = {{"command", "certify"},
                  {"config", config_echo(config)},
                  {"verdict", cert.pass ? "pass" : "fail"},
                  {"failures", cert.failures},
                  {"generated_at", timestamp()}};
    write_json(dir / "report.json", res.report);
    if (cert.pass) {
      res.message = "certificate passes";
    } else {
      res.exit_code = kExitCertificateFail;
      std::string names;
      for (const auto& f : cert.failures) names += (names.empty() ? "" : ", ") + f;
      res.message = "certificate fails: " + names;
    }
  } catch (const ExactEntriesMissing& e) {
    res.exit_code = kExitConfig;
    res.message = e.what();
  } catch (const Error& e) {
    res.exit_code = exit_code_for(e);
    res.message = e.what();
  }
  return res;
}

RunResult run_build_semigroup(const PipelineConfig& config) {
  RunResult res;
  Json rep = {{"command", "build-semigroup"}, {"config", config_echo(config)}};
  try {
    const fs::path dir = prepare_output(config);
    const int n = config.generators.front().dim();
    const SamplingBudget budget = sampling_budget(config);
    const double eps = config.epsilon;

    log_stage("enumerate radius " + std::to_string(config.radius));
    const auto records = enumerate_ball(config.generators, enumerate_options(config));
    rep["records"] = records.size();
    log_stage("records " + std::to_string(records.size()));

    const auto finish = [&](int code, const std::string& msg) {
      rep["exit_code"] = code;
      rep["message"] = msg;
      rep["generated_at"] = timestamp();
      write_json(dir / "report.json", rep);
      res.exit_code = code;
      res.message = msg;
      res.report = rep;
      return res;
    };

    const auto anchors = choose_anchors(config, records);
    if (!anchors) return finish(kExitExhausted, "no loxodromic record gives admissible anchors");
    rep["anchors"] = {{"x", flag_to_json(anchors->x)},
                      {"y", flag_to_json(anchors->y)},
                      {"zeta", transversality_margin(anchors->x, anchors->y)}};
    if (anchors->source) rep["anchors"]["source_word"] = records[*anchors->source].word;

    Cone cone;
    if (config.cone) {
      cone = *config.cone;
    } else {
      const Vector axis = anchors->source ? records[*anchors->source].kappa.coords()
                                          : indicator_direction(config, limit_cone_sample(records), n);
      cone = Cone::make(axis, config.auto_cone_half_angle);
    }
    rep["cone"] = {{"axis", cartan_to_json(cone.axis())}, {"half_angle", cone.half_angle()}};

    const FilterSpec open_spec = FilterSpec::make(cone, anchors->x, anchors->y, 0.0, std::nullopt, eps / 2);
    const auto admissible = filter_gamma_set(records, open_spec);
    rep["admissible"] = admissible.size();
    log_stage("admissible records " + std::to_string(admissible.size()));
    if (admissible.empty()) return finish(kExitExhausted, "no record passes the cone and flag filters");

    double n_min = 0.0;
    if (config.n_min) {
      n_min = *config.n_min;
    } else {
      for (const auto& r : admissible) n_min = std::max(n_min, r.kappa.norm());
      n_min *= 0.6;
    }
    rep["n_min"] = n_min;

    // Shadow radius: smallest grid value whose symmetric shadow swallows the
    // sampled 2 eps flag shadow of a low-norm admissible element.
    double R = config.R ? *config.R : config.R_grid.back();
    if (!config.R) {
      Json cal = Json::object();
      cal["calibrated"] = false;
      if (2 * eps < 1.0) {
        int tried = 0;
        std::vector<const OrbitRecord*> order;
        for (const auto& r : admissible) order.push_back(&r);
        std::stable_sort(order.begin(), order.end(),
                         [](auto* a, auto* b) { return a->kappa.norm() < b->kappa.norm(); });
        for (const auto* r : order) {
          if (tried++ >= 5) break;
          try {
            const CalibrationRow row = calibrate_shadow_radius(r->matrix, eps, config.R_grid, config.probes, config.seed);
            if (row.R_min) {
              R = *row.R_min;
              cal = {{"calibrated", true}, {"word", r->word}, {"R", R}, {"probes", row.probes}};
              break;
            }
          } catch (const NotCertified&) {
          } catch (const InsufficientBudget&) {
          }
        }
      }
      rep["calibration"] = cal;
    }
    rep["R"] = R;
    log_stage("shadow radius R = " + std::to_string(R));

    Json attempts = Json::array();
    double width = config.width;
    for (int attempt = 0; attempt <= config.retries; ++attempt, width *= 2) {
      Json a = {{"width", width}};
      const FilterSpec spec = FilterSpec::make(cone, anchors->x, anchors->y, n_min, width, eps / 2);
      const auto cands = filter_gamma_set(records, spec);
      a["candidates"] = cands.size();
      log_stage("annulus width " + std::to_string(width) + ": " + std::to_string(cands.size()) + " candidates");
      if (cands.empty()) {
        a["outcome"] = "empty annulus";
        attempts.push_back(a);
        continue;
      }
      const auto packed_all = greedy_disjoint_pack(cands, R, config.shadow_mode, pinned_indices(config, cands));
      std::vector<OrbitRecord> packed;
      for (const auto& r : packed_all) {
        try {
          if (check_contracting(r.matrix, eps, budget).pass) packed.push_back(r);
        } catch (const NotLoxodromic&) {
        } catch (const InsufficientBudget&) {
        }
      }
      a["packed"] = packed_all.size();
      a["certified"] = packed.size();
      const double sum = generator_sum(packed, config.target_delta);
      a["generator_sum"] = sum;
      if (packed.size() < 2 || sum < 1.0) {
        a["outcome"] = packed.size() < 2 ? "fewer than two certified generators" : "generator sum below 1";
        attempts.push_back(a);
        continue;
      }
      std::vector<GroupElement> gens;
      for (const auto& r : packed) gens.push_back(r.matrix);
      std::optional<int> exact;
      if (config.exact_check && all_exact(gens)) exact = config.exact_check;
      FreenessCertificate cert;
      try {
        cert = pingpong_certificate(gens, eps, budget, exact);
      } catch (const BudgetExceeded&) {
        cert = pingpong_certificate(gens, eps, budget);
        a["exact_check"] = "skipped: word budget exceeded";
      }
      if (config.exact_check && !exact) a["exact_check"] = "skipped: generators lack exact entries";
      a["certificate"] = cert.pass ? "pass" : "fail";
      a["failures"] = cert.failures;
      if (!cert.pass) {
        a["outcome"] = "ping-pong certificate failed";
        attempts.push_back(a);
        continue;
      }
      a["outcome"] = "selected";
      attempts.push_back(a);
      rep["attempts"] = attempts;

      log_stage("certificate passes with " + std::to_string(gens.size()) + " generators");
      Json gens_json = Json::array(), words = Json::array();
      for (const auto& r : packed) {
        gens_json.push_back(element_to_json(r.matrix));
        words.push_back(r.word);
      }
      write_json(dir / "certificate.json", {{"certificate", to_json(cert)}, {"generators", gens_json}, {"words", words}});
      std::string lines;
      for (const auto& r : packed) lines += to_json(r).dump() + "\n";
      write_text_file((dir / "packing.jsonl").string(), lines);

      const GrowthOutputs g = growth_outputs(config, records, cone.axis().coords());
      write_growth_files(dir, g);
      rep["growth"] = g.growth ? to_json(*g.growth) : Json({{"error", g.error}});
      rep["growth_indicator"] = curve_json(g.curve);

      rep["selected_words"] = words;
      rep["cone_spread"] = measured_cone_spread(packed, n_min + width);
      Rng lip_rng(config.seed);
      Json lips = Json::array();
      for (const auto& r : packed) lips.push_back(sampled_lipschitz(r.matrix, 200, lip_rng));
      rep["lipschitz_estimates"] = lips;
      rep["certificate"] = {{"verdict", "pass"}, {"generators", gens.size()}};
      rep["checklist"] = checklist(config, cert, packed, anchors->x, sum);
      return finish(kExitPass, "semigroup certified");
    }
    rep["attempts"] = attempts;
    return finish(kExitExhausted, "no annulus within the retry budget yields a certified generator set");
  } catch (const Error& e) {
    res.exit_code = exit_code_for(e);
    res.message = e.what();
    return res;
  }
}

bool revalidate_certificate(const Json& certificate_file) {
  if (!certificate_file.is_object() || !certificate_file.contains("certificate"))
    throw InvalidInput("certificate file lacks a 'certificate' entry");
  const FreenessCertificate c = freeness_certificate_from_json(certificate_file.at("certificate"));
  for (const auto& p : c.per_generator)
    if (p.verdict_from_margins() != p.pass) return false;
  const auto failures = c.failures_from_margins();
  return failures == c.failures && failures.empty() == c.pass;
}

}  // namespace flaglab
