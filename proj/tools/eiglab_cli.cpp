// Batch driver: parse a JSON experiment config, run measurements and audits,
// emit CSV tables, JSON reports, and two-column plot-data files.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "eiglab/analysis.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eiglab;

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt12(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string p_label(double p) {
  if (std::isinf(p)) return "inf";
  if (p == std::floor(p) && std::fabs(p) < 1e6)
    return std::to_string(static_cast<long long>(p));
  return fmt12(p);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct RandomWindowSpec {
  double lambda = 32.0;
  double width = 1.0;
  int count = 3;
};

struct ExperimentConfig {
  ManifoldModel model;
  std::vector<int> zonal_k;
  std::vector<int> hw_k;
  std::vector<std::vector<int>> torus_modes;
  std::vector<RandomWindowSpec> windows;
  std::vector<double> p_list;
  std::vector<double> r_grid;
  RhoSpec rho;
  int resolution = 128;
  std::uint64_t seed = 0;
  double filter_lambda = 32.0;
  int filter_trials = 20;
  std::string hash;
};

double parse_p(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return INFINITY;
    throw ConfigError("p entries must be numbers or \"inf\"");
  }
  if (!j.is_number()) throw ConfigError("p entries must be numbers or \"inf\"");
  const double p = j.get<double>();
  if (p < 1.0) throw ConfigError("p must be >= 1");
  return p;
}

ExperimentConfig load_config(const std::string& path, std::uint64_t seed_override,
                             bool has_seed, int resolution_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    const json& jm = j.at("model");
    const std::string kind = jm.value("kind", "sphere");
    const int n = jm.value("n", 2);
    if (kind == "sphere")
      cfg.model = ManifoldModel::sphere(n);
    else if (kind == "torus")
      cfg.model = ManifoldModel::torus(n);
    else
      throw ConfigError("model.kind must be \"sphere\" or \"torus\"");

    const json jf = j.value("fields", json::object());
    cfg.zonal_k = jf.value("zonal_degrees", std::vector<int>{});
    cfg.hw_k = jf.value("highest_weight_degrees", std::vector<int>{});
    if (jf.contains("torus_modes"))
      cfg.torus_modes = jf.at("torus_modes").get<std::vector<std::vector<int>>>();
    if (jf.contains("random_windows")) {
      for (const json& jw : jf.at("random_windows")) {
        RandomWindowSpec w;
        w.lambda = jw.value("lambda", 32.0);
        w.width = jw.value("width", 1.0);
        w.count = jw.value("count", 3);
        cfg.windows.push_back(w);
      }
    }

    if (!j.contains("p") || !j.at("p").is_array() || j.at("p").empty())
      throw ConfigError("config needs a nonempty \"p\" array");
    for (const json& jp : j.at("p")) cfg.p_list.push_back(parse_p(jp));

    if (j.contains("r_grid") && j.at("r_grid").is_array()) {
      cfg.r_grid = j.at("r_grid").get<std::vector<double>>();
    } else {
      const int levels = j.value("r_levels", 6);
      double r = 0.5 * cfg.model.inj;
      for (int i = 0; i < levels; ++i, r *= 0.5) cfg.r_grid.push_back(r);
    }
    for (double r : cfg.r_grid)
      if (!(r > 0) || r > cfg.model.inj)
        throw ConfigError("r grid values must lie in (0, inj]");

    const json jr = j.value("rho", json::object());
    const std::string rk = jr.value("kind", "smooth_bump");
    if (rk == "smooth_bump")
      cfg.rho.kind = RhoKind::SmoothBump;
    else if (rk == "fejer")
      cfg.rho.kind = RhoKind::Fejer;
    else
      throw ConfigError("rho.kind must be \"smooth_bump\" or \"fejer\"");

    cfg.resolution = j.value("resolution", 128);
    cfg.seed = j.value("seed", static_cast<std::uint64_t>(0));
    const json jfa = j.value("filter", json::object());
    cfg.filter_lambda = jfa.value("lambda", 32.0);
    cfg.filter_trials = jfa.value("trials", 20);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }

  if (has_seed) cfg.seed = seed_override;
  if (resolution_override > 0) cfg.resolution = resolution_override;
  if (cfg.resolution < 2) throw ConfigError("resolution must be >= 2");

  j["seed"] = cfg.seed;
  j["resolution"] = cfg.resolution;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a64(j.dump()));
  cfg.hash = hash;
  return cfg;
}

struct Workspace {
  ExperimentConfig cfg;
  std::shared_ptr<const QuadratureGrid> grid;
  std::vector<EigenfunctionField> fields;
  int covering_A = 0;
};

Workspace build_workspace(const ExperimentConfig& cfg) {
  Workspace ws;
  ws.cfg = cfg;
  int max_degree = 0;
  for (int k : cfg.zonal_k) max_degree = std::max(max_degree, k);
  for (int k : cfg.hw_k) max_degree = std::max(max_degree, k);
  if (cfg.model.is_sphere() && cfg.resolution < max_degree + 1)
    throw ResolutionError("resolution must be >= max harmonic degree + 1");
  ws.grid = std::make_shared<QuadratureGrid>(build_grid(cfg.model, cfg.resolution));

  if (cfg.model.is_sphere()) {
    const Point pole = Point::north_pole(cfg.model.n);
    for (int k : cfg.zonal_k)
      ws.fields.push_back(zonal_field(cfg.model, k, pole, ws.grid));
    for (int k : cfg.hw_k)
      ws.fields.push_back(highest_weight_field(cfg.model, k, ws.grid));
  } else {
    for (const auto& m : cfg.torus_modes)
      ws.fields.push_back(torus_wave(cfg.model, m, ws.grid));
  }
  std::uint64_t s = cfg.seed;
  for (const auto& w : cfg.windows)
    for (int i = 0; i < w.count; ++i)
      ws.fields.push_back(random_window_field(cfg.model, w.lambda, w.width, s++, ws.grid));

  try {
    const double r_ref = 0.25 * cfg.model.inj;
    if (r_ref >= 4.0 * ws.grid->spacing)
      ws.covering_A = build_covering(cfg.model, r_ref, *ws.grid).overlap_A;
  } catch (const std::exception&) {
    ws.covering_A = 0;  // reference covering unavailable at this resolution
  }
  return ws;
}

json base_report(const Workspace& ws, const std::string& name) {
  json j;
  j["schema"] = 1;
  j["name"] = name;
  j["config_hash"] = ws.cfg.hash;
  j["seed"] = ws.cfg.seed;
  j["resolution"] = ws.cfg.resolution;
  j["rho_kind"] = ws.cfg.rho.kind == RhoKind::SmoothBump ? "smooth_bump" : "fejer";
  j["covering_A"] = ws.covering_A;
  return j;
}

json audit_json(const AuditReport& rep) {
  json j;
  j["id"] = rep.id;
  j["max_ratio"] = rep.max_ratio;
  j["aux"] = rep.aux;
  j["flag_ok"] = rep.flag_ok;
  json pts = json::array();
  for (const auto& pt : rep.points) {
    json q;
    q["field"] = pt.field_id;
    q["lambda"] = pt.lambda;
    q["r"] = pt.r;
    q["p"] = std::isinf(pt.p) ? json("inf") : json(pt.p);
    q["ratio"] = pt.ratio;
    pts.push_back(std::move(q));
  }
  j["points"] = std::move(pts);
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string family_of(const EigenfunctionField& f) {
  switch (f.kind) {
    case FieldKind::Zonal: return "zonal";
    case FieldKind::HighestWeight: return "hw";
    case FieldKind::TorusWave: return "torus";
    case FieldKind::RandomWindow: return "rw";
    default: return "filtered";
  }
}

void run_norms(const Workspace& ws, const fs::path& out) {
  std::string csv = "field,lambda,p,r,value\n";
  for (const auto& f : ws.fields)
    for (double p : ws.cfg.p_list)
      csv += f.id + "," + fmt12(f.freq) + "," + p_label(p) + ",0," +
             fmt12(lp_norm_value(f, p)) + "\n";
  write_text(out / "norms.csv", csv);
  write_json(out / "run_meta.json", base_report(ws, "norms"));
}

void run_scaling(const Workspace& ws, const fs::path& out) {
  std::map<std::string, std::vector<const EigenfunctionField*>> families;
  for (const auto& f : ws.fields) families[family_of(f)].push_back(&f);
  json meta = base_report(ws, "scaling");
  json fits = json::object();
  for (const auto& [fam, fields] : families) {
    for (double p : ws.cfg.p_list) {
      std::vector<std::pair<double, double>> pts;
      for (const auto* f : fields) pts.push_back({f->freq, lp_norm_value(*f, p)});
      std::string dat = "# family=" + fam + " p=" + p_label(p) + "\n";
      try {
        const ScalingFit fit = fit_scaling(pts);
        dat += "# slope=" + fmt12(fit.slope) + " stderr=" + fmt12(fit.stderr_) + "\n";
        fits[fam + "_" + p_label(p)] = {{"slope", fit.slope}, {"stderr", fit.stderr_}};
      } catch (const std::invalid_argument&) {
        dat += "# slope=nan (family too small for a fit)\n";
      }
      for (const auto& [l, v] : pts)
        dat += fmt12(std::log(l)) + " " + fmt12(std::log(v)) + "\n";
      write_text(out / ("scaling_" + fam + "_" + p_label(p) + ".dat"), dat);
    }
  }
  meta["fits"] = std::move(fits);
  write_json(out / "run_meta.json", meta);
}

void run_filter_audit(const Workspace& ws, const fs::path& out) {
  json rep = base_report(ws, "filter");
  json audits = json::array();
  const double lambda = ws.cfg.filter_lambda;
  for (double p : ws.cfg.p_list) {
    if (p <= 2.0 && !std::isinf(p)) continue;
    for (double r : ws.cfg.r_grid) {
      if (r < 1.0 / lambda || r > ws.cfg.model.inj) continue;
      AuditReport a = audit_operator_bound(ws.cfg.model, ws.grid, ws.cfg.rho, p,
                                           lambda, r, ws.cfg.seed, ws.cfg.filter_trials);
      a.resolution = ws.cfg.resolution;
      audits.push_back(audit_json(a));
    }
  }
  // filter identity check on a centered eigenfunction
  const EigenfunctionField* probe = nullptr;
  for (const auto& f : ws.fields)
    if (f.kind == FieldKind::Zonal || f.kind == FieldKind::TorusWave) probe = &f;
  if (probe) {
    WindowFilterSpec spec;
    spec.rho = ws.cfg.rho;
    spec.lambda = probe->freq;
    spec.r = std::min(0.5, ws.cfg.model.inj);
    const RhoEvaluator rho = make_rho(spec);
    const EigenfunctionField tf = apply_filter(*probe, spec, rho);
    const double mult = filter_multiplier(spec, rho, probe->freq);
    double err = 0;
    for (std::size_t i = 0; i < probe->samples.size(); ++i)
      err = std::max(err, std::abs(tf.samples[i] - mult * probe->samples[i]));
    json id;
    id["field"] = probe->id;
    id["multiplier"] = mult;
    id["max_abs_error"] = err;
    rep["identity_check"] = std::move(id);
  }
  rep["audits"] = std::move(audits);
  write_json(out / "audit_filter.json", rep);
}

void run_covering_audit(const Workspace& ws, const fs::path& out) {
  json rep = base_report(ws, "covering");
  json sweeps = json::array();
  const EigenfunctionField* probe = ws.fields.empty() ? nullptr : &ws.fields.front();
  const double pc = critical_exponent(ws.cfg.model.n);
  for (double r : ws.cfg.r_grid) {
    if (r < 4.0 * ws.grid->spacing || r > 0.5 * ws.cfg.model.inj) continue;
    const BallCovering cov = build_covering(ws.cfg.model, r, *ws.grid);
    json e;
    e["r"] = r;
    e["count"] = cov.count;
    e["overlap_A"] = cov.overlap_A;
    e["coverage_total"] = cov.coverage_total;
    if (probe) {
      const ChainAuditReport chain = covering_chain_audit(*probe, cov, pc);
      e["chain"] = {{"field", probe->id},
                    {"subadditivity_ratio", chain.subadditivity_ratio},
                    {"l2_overlap_ratio", chain.l2_overlap_ratio},
                    {"sup_factor_ratio", chain.sup_factor_ratio}};
    }
    sweeps.push_back(std::move(e));
  }
  rep["sweep"] = std::move(sweeps);
  write_json(out / "audit_covering.json", rep);
}

void run_theorem_audit(const Workspace& ws, const fs::path& out) {
  json rep = base_report(ws, "theorem");
  std::vector<const EigenfunctionField*> ptrs;
  for (const auto& f : ws.fields) ptrs.push_back(&f);
  AuditReport main = audit_critical_norm(ptrs, ws.cfg.r_grid);
  main.resolution = ws.cfg.resolution;
  rep["theorem"] = audit_json(main);
  json localized = json::array();
  for (const auto& f : ws.fields)
    for (double p : ws.cfg.p_list) {
      if (p <= 2.0 && !std::isinf(p)) continue;
      localized.push_back(audit_json(audit_localized(f, ws.cfg.r_grid, p)));
    }
  rep["localized"] = std::move(localized);
  if (!ws.cfg.model.is_sphere() && !ws.fields.empty()) {
    // flat-model ball law check: r(lambda) = lambda^{-1/2} schedule
    std::vector<const EigenfunctionField*> fam;
    std::vector<double> sched;
    for (const auto& f : ws.fields)
      if (f.kind == FieldKind::TorusWave && f.freq >= 1.0) {
        fam.push_back(&f);
        sched.push_back(1.0 / std::sqrt(f.freq));
      }
    if (!fam.empty())
      rep["ball_law"] = audit_json(audit_ball_law_implication(fam, sched));
  }
  write_json(out / "audit_theorem.json", rep);
}

void run_qe(const Workspace& ws, const fs::path& out) {
  json rep = base_report(ws, "qe");
  json rows = json::array();
  for (const auto& f : ws.fields) {
    std::vector<Region> regions;
    if (ws.cfg.model.is_sphere()) {
      regions.push_back(BallSpec{Point::north_pole(ws.cfg.model.n), 0.25 * ws.cfg.model.inj});
      regions.push_back(BallSpec{Point::north_pole(ws.cfg.model.n), 1.0 / std::sqrt(f.freq)});
    } else {
      const double pi = 3.14159265358979323846;
      regions.push_back(RectRegion{{0.0, 0.0}, {pi, pi}});
      regions.push_back(RectRegion{{0.0, 0.0}, {0.5 * pi, 2.0 * pi}});
    }
    for (const auto& region : regions) {
      json e;
      e["field"] = f.id;
      e["lambda"] = f.freq;
      e["region"] = region_label(region);
      e["reference"] = region_measure(ws.cfg.model, region) / ws.cfg.model.volume;
      e["statistic"] = qe_statistic(f, region);
      rows.push_back(std::move(e));
    }
  }
  rep["statistics"] = std::move(rows);
  write_json(out / "audit_qe.json", rep);
}

void run_report(const Workspace& ws, const fs::path& out) {
  run_norms(ws, out);
  run_scaling(ws, out);
  run_filter_audit(ws, out);
  run_covering_audit(ws, out);
  run_theorem_audit(ws, out);
  run_qe(ws, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eiglab: localized eigenfunction norm measurements and audits"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed_override = 0;
  bool has_seed = false;
  int resolution_override = 0;
  int threads = 0;

  const std::vector<std::string> names = {"norms",          "scaling",
                                          "filter-audit",   "covering-audit",
                                          "theorem-audit",  "qe",
                                          "report"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed_override, "override config seed")
        ->each([&](const std::string&) { has_seed = true; });
    sub->add_option("--resolution", resolution_override, "override grid resolution");
    sub->add_option("--threads", threads, "worker threads (0 = auto)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const ExperimentConfig cfg =
        load_config(config_path, seed_override, has_seed, resolution_override);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
      throw ConfigError("cannot create output directory: " + out_dir);
    const Workspace ws = build_workspace(cfg);
    const fs::path out(out_dir);
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "norms")
      run_norms(ws, out);
    else if (sub == "scaling")
      run_scaling(ws, out);
    else if (sub == "filter-audit")
      run_filter_audit(ws, out);
    else if (sub == "covering-audit")
      run_covering_audit(ws, out);
    else if (sub == "theorem-audit")
      run_theorem_audit(ws, out);
    else if (sub == "qe")
      run_qe(ws, out);
    else
      run_report(ws, out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ResolutionError& e) {
    std::fprintf(stderr, "resolution error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
