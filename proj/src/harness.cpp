// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "xlmimo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <thread>
#include <tuple>

namespace xlmimo {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

void require_keys(const json& obj, const char* section,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known)
      throw ConfigError(std::string("unknown key '") + it.key() + "' in " +
                        section);
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& into) {
  if (obj.contains(key)) into = obj.at(key).get<T>();
}

SweepVariable sweep_variable_from_string(const std::string& s) {
  if (s == "delta_sin_theta") return SweepVariable::kDeltaSinTheta;
  if (s == "delta_r_m") return SweepVariable::kDeltaRm;
  if (s == "observe_r_m") return SweepVariable::kObserveRm;
  throw ConfigError("unknown sweep variable: " + s);
}

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kDeltaSinTheta: return "delta_sin_theta";
    case SweepVariable::kDeltaRm: return "delta_r_m";
    case SweepVariable::kObserveRm: return "observe_r_m";
  }
  return "unknown";
}

PatternMode pattern_mode_from_string(const std::string& s) {
  if (s == "ff_ff") return PatternMode::kFfFf;
  if (s == "nf_ff") return PatternMode::kNfFf;
  if (s == "nf_nf") return PatternMode::kNfNf;
  throw ConfigError("unknown pattern mode: " + s);
}

const char* to_string(PatternMode m) {
  switch (m) {
    case PatternMode::kFfFf: return "ff_ff";
    case PatternMode::kNfFf: return "nf_ff";
    case PatternMode::kNfNf: return "nf_nf";
  }
  return "unknown";
}

SweepSpec parse_sweep(const json& obj) {
  require_keys(obj, "sweep", {"variable", "start", "stop", "points"});
  SweepSpec s;
  std::string var = to_string(s.variable);
  read_field(obj, "variable", var);
  s.variable = sweep_variable_from_string(var);
  read_field(obj, "start", s.start);
  read_field(obj, "stop", s.stop);
  read_field(obj, "points", s.points);
  if (s.points < 1) throw ConfigError("sweep: points must be >= 1");
  if (s.points >= 2 && !(s.stop > s.start))
    throw ConfigError("sweep: stop must exceed start");
  return s;
}

ArrayGeometry parse_geometry(const json& obj) {
  require_keys(obj, "geometry",
               {"num_modules", "elements_per_module", "gamma", "d_m", "lambda_m"});
  int n = 32, m = 4, gamma = 13;
  double lambda = 0.1256;
  read_field(obj, "num_modules", n);
  read_field(obj, "elements_per_module", m);
  read_field(obj, "gamma", gamma);
  read_field(obj, "lambda_m", lambda);
  double d = lambda / 2.0;
  read_field(obj, "d_m", d);
  return ArrayGeometry(n, m, gamma, d, lambda);
}

json geometry_json(const ArrayGeometry& g) {
  return json{{"num_modules", g.num_modules()},
              {"elements_per_module", g.elements_per_module()},
              {"gamma", g.gamma()},
              {"d_m", g.d_m()},
              {"lambda_m", g.lambda_m()}};
}

struct Stats {
  int n = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
};

Stats compute_stats(const std::vector<double>& xs) {
  Stats s;
  s.n = static_cast<int>(xs.size());
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stderr_ = std::sqrt(ss / (s.n - 1)) / std::sqrt(double(s.n));
  }
  return s;
}

// adaptive Simpson quadrature, used as the independent route for Fresnel
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

std::complex<double> fresnel_by_quadrature(double x) {
  // panels of width <= 1 keep the oscillatory integrand well resolved
  double c = 0.0, s = 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(x))));
  for (int p = 0; p < panels; ++p) {
    const double a = x * p / panels, b = x * (p + 1) / panels;
    c += integrate([](double t) { return std::cos(t * t); }, a, b, 1e-13);
    s += integrate([](double t) { return std::sin(t * t); }, a, b, 1e-13);
  }
  return {c, s};
}

}  // namespace

std::vector<double> SweepSpec::grid() const {
  std::vector<double> xs(points);
  if (points == 1) {
    xs[0] = start;
    return xs;
  }
  const double step = (stop - start) / (points - 1);
  for (int i = 0; i < points; ++i) xs[i] = start + i * step;
  return xs;
}

std::string MultiuserCombo::id() const {
  return array + "/" + xlmimo::to_string(scheme) + "/" + xlmimo::to_string(csi) +
         "/" + (grouping == GroupingMethod::kGreedy ? "greedy" : "random");
}

json RunConfig::resolved() const {
  json doc;
  doc["geometry"] = geometry_json(geometry);
  json sc{{"num_users", scenario.num_users},
          {"num_rbs", scenario.num_rbs},
          {"nlos_paths", scenario.nlos_paths},
          {"layout", scenario.layout == Layout::kDisk ? "disk" : "line"},
          {"r_c_m", scenario.r_c_m},
          {"r_max_m", scenario.r_max_m},
          {"r_line_m", scenario.r_line_m},
          {"pt_db", scenario.pt_db},
          {"scatterer_r_min_m", scenario.scatterer_r_min_m},
          {"scatterer_r_max_m", scenario.scatterer_r_max_m},
          {"scatterer_theta_min_rad", scenario.scatterer_theta_min_rad},
          {"scatterer_theta_max_rad", scenario.scatterer_theta_max_rad},
          {"rcs_min_m2", scenario.rcs_min_m2},
          {"rcs_max_m2", scenario.rcs_max_m2}};
  if (scenario.beta0) sc["beta0"] = *scenario.beta0;
  doc["scenario"] = sc;
  doc["beamformer"] = json{{"scheme", xlmimo::to_string(beamformer.scheme)},
                           {"csi", xlmimo::to_string(beamformer.csi)}};
  json pt{{"mode", to_string(pattern.mode)},
          {"focus_r_m", pattern.focus_r_m},
          {"focus_theta_rad", pattern.focus_theta_rad},
          {"observe_r_m", pattern.observe_r_m},
          {"variants", pattern.variants},
          {"sweep", json{{"variable", to_string(pattern.sweep.variable)},
                         {"start", pattern.sweep.start},
                         {"stop", pattern.sweep.stop},
                         {"points", pattern.sweep.points}}}};
  if (pattern.sweep2)
    pt["sweep2"] = json{{"variable", to_string(pattern.sweep2->variable)},
                        {"start", pattern.sweep2->start},
                        {"stop", pattern.sweep2->stop},
                        {"points", pattern.sweep2->points}};
  doc["pattern"] = pt;
  json combos = json::array();
  for (const auto& c : multiuser.combos)
    combos.push_back(json{{"array", c.array},
                          {"scheme", xlmimo::to_string(c.scheme)},
                          {"csi", xlmimo::to_string(c.csi)},
                          {"grouping", c.grouping == GroupingMethod::kGreedy
                                           ? "greedy"
                                           : "random"}});
  doc["multiuser"] = json{{"sweep_variable", multiuser.sweep_variable},
                          {"sweep_values", multiuser.sweep_values},
                          {"combos", combos}};
  doc["resolution"] = json{{"theta_primes_rad", resolution.theta_primes_rad},
                           {"focus_r_m", resolution.focus_r_m}};
  doc["seeds"] = seeds;
  // threads and the output path are execution details: identical documents
  // must regenerate identical bytes regardless of either
  return doc;
}

RunConfig parse_config(const json& doc) {
  require_keys(doc, "config",
               {"geometry", "scenario", "beamformer", "pattern", "multiuser",
                "resolution", "seeds", "threads", "out"});
  RunConfig cfg;
  if (doc.contains("geometry")) cfg.geometry = parse_geometry(doc.at("geometry"));
  cfg.scenario.geometry = cfg.geometry;

  if (doc.contains("scenario")) {
    const json& sc = doc.at("scenario");
    require_keys(sc, "scenario",
                 {"num_users", "num_rbs", "nlos_paths", "layout", "r_c_m",
                  "r_max_m", "r_line_m", "pt_db", "scatterer_r_min_m",
                  "scatterer_r_max_m", "scatterer_theta_min_rad",
                  "scatterer_theta_max_rad", "rcs_min_m2", "rcs_max_m2", "beta0"});
    read_field(sc, "num_users", cfg.scenario.num_users);
    read_field(sc, "num_rbs", cfg.scenario.num_rbs);
    read_field(sc, "nlos_paths", cfg.scenario.nlos_paths);
    if (sc.contains("layout")) {
      const std::string l = sc.at("layout").get<std::string>();
      if (l == "disk")
        cfg.scenario.layout = Layout::kDisk;
      else if (l == "line")
        cfg.scenario.layout = Layout::kLine;
      else
        throw ConfigError("unknown layout: " + l);
    }
    read_field(sc, "r_c_m", cfg.scenario.r_c_m);
    read_field(sc, "r_max_m", cfg.scenario.r_max_m);
    read_field(sc, "r_line_m", cfg.scenario.r_line_m);
    read_field(sc, "pt_db", cfg.scenario.pt_db);
    read_field(sc, "scatterer_r_min_m", cfg.scenario.scatterer_r_min_m);
    read_field(sc, "scatterer_r_max_m", cfg.scenario.scatterer_r_max_m);
    read_field(sc, "scatterer_theta_min_rad", cfg.scenario.scatterer_theta_min_rad);
    read_field(sc, "scatterer_theta_max_rad", cfg.scenario.scatterer_theta_max_rad);
    read_field(sc, "rcs_min_m2", cfg.scenario.rcs_min_m2);
    read_field(sc, "rcs_max_m2", cfg.scenario.rcs_max_m2);
    if (sc.contains("beta0")) cfg.scenario.beta0 = sc.at("beta0").get<double>();
  }

  if (doc.contains("beamformer")) {
    const json& bf = doc.at("beamformer");
    require_keys(bf, "beamformer", {"scheme", "csi"});
    std::string s = "mmse", c = "near_field";
    read_field(bf, "scheme", s);
    read_field(bf, "csi", c);
    cfg.beamformer.scheme = scheme_from_string(s);
    cfg.beamformer.csi = csi_from_string(c);
  }

  if (doc.contains("pattern")) {
    const json& pt = doc.at("pattern");
    require_keys(pt, "pattern",
                 {"mode", "focus_r_m", "focus_theta_rad", "observe_r_m",
                  "variants", "sweep", "sweep2"});
    std::string mode = to_string(cfg.pattern.mode);
    read_field(pt, "mode", mode);
    cfg.pattern.mode = pattern_mode_from_string(mode);
    read_field(pt, "focus_r_m", cfg.pattern.focus_r_m);
    read_field(pt, "focus_theta_rad", cfg.pattern.focus_theta_rad);
    read_field(pt, "observe_r_m", cfg.pattern.observe_r_m);
    read_field(pt, "variants", cfg.pattern.variants);
    if (pt.contains("sweep")) cfg.pattern.sweep = parse_sweep(pt.at("sweep"));
    if (pt.contains("sweep2")) cfg.pattern.sweep2 = parse_sweep(pt.at("sweep2"));
  }

  if (doc.contains("multiuser")) {
    const json& mu = doc.at("multiuser");
    require_keys(mu, "multiuser", {"sweep_variable", "sweep_values", "combos"});
    read_field(mu, "sweep_variable", cfg.multiuser.sweep_variable);
    if (cfg.multiuser.sweep_variable != "pt_db" &&
        cfg.multiuser.sweep_variable != "r_max_m" &&
        cfg.multiuser.sweep_variable != "r_line_m")
      throw ConfigError("multiuser: unknown sweep_variable " +
                        cfg.multiuser.sweep_variable);
    read_field(mu, "sweep_values", cfg.multiuser.sweep_values);
    if (mu.contains("combos")) {
      cfg.multiuser.combos.clear();
      for (const json& c : mu.at("combos")) {
        require_keys(c, "combo", {"array", "scheme", "csi", "grouping"});
        MultiuserCombo combo;
        read_field(c, "array", combo.array);
        if (combo.array != "modular" && combo.array != "collocated")
          throw ConfigError("combo: array must be modular or collocated");
        std::string s = "mmse", csi = "near_field", grouping = "greedy";
        read_field(c, "scheme", s);
        read_field(c, "csi", csi);
        read_field(c, "grouping", grouping);
        combo.scheme = scheme_from_string(s);
        combo.csi = csi_from_string(csi);
        if (grouping == "greedy")
          combo.grouping = GroupingMethod::kGreedy;
        else if (grouping == "random")
          combo.grouping = GroupingMethod::kRandom;
        else
          throw ConfigError("combo: grouping must be greedy or random");
        cfg.multiuser.combos.push_back(combo);
      }
    }
  }

  if (doc.contains("resolution")) {
    const json& rs = doc.at("resolution");
    require_keys(rs, "resolution", {"theta_primes_rad", "focus_r_m"});
    read_field(rs, "theta_primes_rad", cfg.resolution.theta_primes_rad);
    read_field(rs, "focus_r_m", cfg.resolution.focus_r_m);
  }

  read_field(doc, "seeds", cfg.seeds);
  if (cfg.seeds.empty()) throw ConfigError("seeds must be non-empty");
  read_field(doc, "threads", cfg.threads);
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  read_field(doc, "out", cfg.out_path);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

namespace {

struct VariantCurve {
  std::string name;
  std::function<double(double, double)> gain;  // (axis1, axis2) -> gain
};

std::vector<VariantCurve> make_variant_curves(const RunConfig& cfg) {
  const ArrayGeometry& g = cfg.geometry;
  const ArrayGeometry gc = g.collocated();
  const PatternConfig& pc = cfg.pattern;
  const double sin_focus = std::sin(pc.focus_theta_rad);
  const PolarLocation focus{pc.focus_r_m, pc.focus_theta_rad};

  auto observe_at = [pc, sin_focus](double axis1, double axis2) -> PolarLocation {
    switch (pc.sweep.variable) {
      case SweepVariable::kDeltaSinTheta: {
        const double s = sin_focus + axis1;
        const double r = pc.sweep2 ? axis2 : pc.observe_r_m;
        return {r, std::asin(std::clamp(s, -1.0, 1.0))};
      }
      case SweepVariable::kDeltaRm:
        return {pc.focus_r_m + axis1, pc.focus_theta_rad};
      case SweepVariable::kObserveRm:
        return {axis1, pc.focus_theta_rad};
    }
    throw InvalidArgumentError("pattern sweep: unknown variable");
  };

  std::vector<VariantCurve> curves;
  auto add = [&curves](std::string name, std::function<double(double, double)> f) {
    curves.push_back({std::move(name), std::move(f)});
  };

  for (const std::string& v : pc.variants) {
    switch (pc.mode) {
      case PatternMode::kFfFf:
        if (v == "closed_form")
          add(v, [g](double x, double) { return pattern_ff_ff(g, x); });
        else if (v == "direct_sum")
          add(v, [g](double x, double) {
            return pattern_ff_ff(g, x, Evaluation::kDirectSum);
          });
        else if (v == "collocated")
          add(v, [gc](double x, double) { return pattern_ff_ff(gc, x); });
        else
          throw ConfigError("ff_ff: unknown variant " + v);
        break;
      case PatternMode::kNfFf: {
        auto run = [g, pc, observe_at](NfVariant nv, double x, double y) {
          return pattern_nf_ff(g, pc.focus_theta_rad, observe_at(x, y), nv);
        };
        if (v == "exact")
          add(v, [run](double x, double y) { return run(NfVariant::kExact, x, y); });
        else if (v == "distinct")
          add(v, [run](double x, double y) { return run(NfVariant::kDistinct, x, y); });
        else if (v == "common")
          add(v, [run](double x, double y) { return run(NfVariant::kCommon, x, y); });
        else if (v == "collocated_exact")
          add(v, [gc, pc, observe_at](double x, double y) {
            return pattern_nf_ff(gc, pc.focus_theta_rad, observe_at(x, y),
                                 NfVariant::kExact);
          });
        else
          throw ConfigError("nf_ff: unknown variant " + v);
        break;
      }
      case PatternMode::kNfNf: {
        auto run = [g, focus, observe_at](NfVariant nv, double x, double y) {
          return pattern_nf_nf(g, focus, observe_at(x, y), nv);
        };
        if (v == "exact")
          add(v, [run](double x, double y) { return run(NfVariant::kExact, x, y); });
        else if (v == "distinct")
          add(v, [run](double x, double y) { return run(NfVariant::kDistinct, x, y); });
        else if (v == "common")
          add(v, [run](double x, double y) { return run(NfVariant::kCommon, x, y); });
        else if (v == "closed_form")
          add(v, [run](double x, double y) {
            return run(NfVariant::kClosedForm, x, y);
          });
        else if (v == "collocated_exact")
          add(v, [gc, focus, observe_at](double x, double y) {
            return pattern_nf_nf(gc, focus, observe_at(x, y), NfVariant::kExact);
          });
        else
          throw ConfigError("nf_nf: unknown variant " + v);
        break;
      }
    }
  }
  if (curves.empty()) throw ConfigError("pattern: no variants requested");
  return curves;
}

bool observation_valid(const PatternConfig& pc, double axis1) {
  if (pc.mode == PatternMode::kFfFf) return std::abs(axis1) <= 2.0;
  if (pc.sweep.variable == SweepVariable::kDeltaSinTheta) {
    // near-field rows need a physical observation angle
    const double s = std::sin(pc.focus_theta_rad) + axis1;
    return std::abs(s) <= 1.0;
  }
  if (pc.sweep.variable == SweepVariable::kDeltaRm)
    return pc.focus_r_m + axis1 > 0.0;
  return axis1 > 0.0;
}

}  // namespace

void run_pattern_sweep(const RunConfig& cfg, std::ostream& os) {
  const PatternConfig& pc = cfg.pattern;
  if (pc.mode == PatternMode::kFfFf &&
      pc.sweep.variable != SweepVariable::kDeltaSinTheta)
    throw ConfigError("ff_ff sweeps run over delta_sin_theta");
  if (pc.sweep2 && !(pc.mode == PatternMode::kNfNf &&
                     pc.sweep.variable == SweepVariable::kDeltaSinTheta &&
                     pc.sweep2->variable == SweepVariable::kObserveRm))
    throw ConfigError(
        "sweep2 is supported for nf_nf location grids "
        "(delta_sin_theta x observe_r_m)");

  const std::vector<VariantCurve> curves = make_variant_curves(cfg);
  os.precision(17);
  os << "# xlmimo pattern sweep\n";
  os << "# config = " << cfg.resolved().dump() << "\n";
  if (pc.sweep2) {
    os << "sweep_value,sweep2_value,variant,gain\n";
    for (double x : pc.sweep.grid()) {
      if (!observation_valid(pc, x)) continue;
      for (double y : pc.sweep2->grid())
        for (const VariantCurve& c : curves)
          os << x << ',' << y << ',' << c.name << ',' << c.gain(x, y) << '\n';
    }
  } else {
    os << "sweep_value,variant,gain\n";
    for (double x : pc.sweep.grid()) {
      if (!observation_valid(pc, x)) continue;
      for (const VariantCurve& c : curves)
        os << x << ',' << c.name << ',' << c.gain(x, 0.0) << '\n';
    }
  }
}

nlohmann::json run_resolution_report(const RunConfig& cfg) {
  const ArrayGeometry& g = cfg.geometry;
  json report;
  report["schema"] = "xlmimo-resolution-v1";
  report["config"] = cfg.resolved();
  json entries = json::array();
  for (double tp : cfg.resolution.theta_primes_rad) {
    const HalfPowerDistance hp = half_power_distance(g, tp);
    json analytic{{"r_hp_m", hp.r_hp_m},
                  {"singular_direction", hp.singular_direction},
                  {"angular_res", angular_resolution(g)},
                  {"angular_res_collocated", angular_resolution_collocated(g)}};
    json grating = json::array();
    for (double d : grating_lobe_directions(g)) grating.push_back(d);
    analytic["grating_directions"] = grating;

    json entry{{"theta_prime_rad", tp}, {"analytic", analytic}};
    if (!hp.singular_direction) {
      // numeric half-power of the distance pattern in z
      const double z_hi = 4.0 / hp.r_hp_m;
      const double z_num = find_half_power(
          [&](double z) { return distance_pattern(g, tp, z); }, 0.0, z_hi, 1e-15);
      json numeric{{"z_half_power", z_num},
                   {"inv_r_hp", 1.0 / hp.r_hp_m},
                   {"rel_err_z", std::abs(z_num * hp.r_hp_m - 1.0)}};
      json focus_entries = json::array();
      for (double rp : cfg.resolution.focus_r_m) {
        const PolarLocation focus{rp, tp};
        const DistanceResolution res = distance_resolution(g, focus);
        auto curve = [&](double dr) {
          return distance_pattern(g, tp, 1.0 / (rp + dr) - 1.0 / rp);
        };
        json fe{{"focus_r_m", rp},
                {"dist_res_minus_m", res.minus_m},
                {"bw_distance_m", res.beam_width_m()}};
        fe["dist_res_plus_m"] =
            std::isinf(res.plus_m) ? json("inf") : json(res.plus_m);
        const double minus_num =
            -find_half_power(curve, 0.0, -rp * (1.0 - 1e-9), 1e-9);
        fe["dist_res_minus_num_m"] = minus_num;
        fe["rel_err_minus"] = std::abs(res.minus_m - minus_num) / res.minus_m;
        const double dr_hi = 1000.0 * rp;
        if (curve(dr_hi) < 0.5) {
          const double plus_num = find_half_power(curve, 0.0, dr_hi, 1e-9);
          fe["dist_res_plus_num_m"] = plus_num;
          if (!std::isinf(res.plus_m))
            fe["rel_err_plus"] = std::abs(res.plus_m - plus_num) / res.plus_m;
        } else {
          fe["dist_res_plus_num_m"] = "inf";
        }
        focus_entries.push_back(fe);
      }
      numeric["focus"] = focus_entries;
      entry["numeric"] = numeric;
    }
    entries.push_back(entry);
  }
  report["entries"] = entries;
  return report;
}

namespace {

struct MuRow {
  double sweep_value;
  std::string combo;
  std::uint64_t seed;
  double sum_rate;
};

}  // namespace

nlohmann::json run_multiuser_experiment(const RunConfig& cfg, std::ostream& csv_os) {
  const MultiuserConfig& mu = cfg.multiuser;
  if (mu.sweep_values.empty()) throw ConfigError("multiuser: no sweep values");
  if (mu.combos.empty()) throw ConfigError("multiuser: no combos");

  const int num_seeds = static_cast<int>(cfg.seeds.size());
  const int num_values = static_cast<int>(mu.sweep_values.size());
  const int num_combos = static_cast<int>(mu.combos.size());
  std::vector<MuRow> rows(static_cast<std::size_t>(num_seeds) * num_values *
                          num_combos);

  auto task = [&](int si) {
    const std::uint64_t seed = cfg.seeds[si];
    for (int vi = 0; vi < num_values; ++vi) {
      const double value = mu.sweep_values[vi];
      // channels depend on (array, sweep value); share across combos
      std::map<std::string, std::vector<UserChannel>> channel_cache;
      for (int ci = 0; ci < num_combos; ++ci) {
        const MultiuserCombo& combo = mu.combos[ci];
        ScenarioConfig sc = cfg.scenario;
        sc.geometry = combo.array == "modular" ? cfg.geometry
                                               : cfg.geometry.collocated();
        sc.seed = seed;
        if (mu.sweep_variable == "pt_db")
          sc.pt_db = value;
        else if (mu.sweep_variable == "r_max_m")
          sc.r_max_m = value;
        else
          sc.r_line_m = value;
        auto [it, inserted] = channel_cache.try_emplace(combo.array);
        if (inserted) it->second = build_channels(sc);
        const std::vector<UserChannel>& users = it->second;
        const std::vector<double> powers =
            uniform_powers(sc.num_users, sc.pt_db);
        const BeamformerSpec spec{combo.scheme, combo.csi};
        GroupingAssignment assignment =
            combo.grouping == GroupingMethod::kGreedy
                ? greedy_grouping(users, powers, sc.num_rbs, spec, seed)
                : random_grouping(sc.num_users, sc.num_rbs, seed);
        const GroupingEvaluation eval =
            evaluate_grouping(assignment, users, powers, spec);
        rows[(static_cast<std::size_t>(si) * num_values + vi) * num_combos + ci] =
            {value, combo.id(), seed, eval.sum_rate_bps_hz};
      }
    }
  };

  const int workers = std::min(cfg.threads, num_seeds);
  if (workers <= 1) {
    for (int si = 0; si < num_seeds; ++si) task(si);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int si = next.fetch_add(1); si < num_seeds; si = next.fetch_add(1))
          task(si);
      });
    for (auto& t : pool) t.join();
  }

  csv_os.precision(17);
  csv_os << "# xlmimo multiuser experiment\n";
  csv_os << "# config = " << cfg.resolved().dump() << "\n";
  csv_os << "sweep_value,combo,seed,sum_rate_bps_hz\n";
  std::vector<const MuRow*> ordered;
  ordered.reserve(rows.size());
  for (const MuRow& r : rows) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](const MuRow* a, const MuRow* b) {
    return std::tie(a->sweep_value, a->combo, a->seed) <
           std::tie(b->sweep_value, b->combo, b->seed);
  });
  for (const MuRow* r : ordered)
    csv_os << r->sweep_value << ',' << r->combo << ',' << r->seed << ','
           << r->sum_rate << '\n';

  json summary;
  summary["schema"] = "xlmimo-multiuser-summary-v1";
  summary["config"] = cfg.resolved();
  if (mu.sweep_variable == "pt_db") {
    // reference receive SNR at the disk center, computed from the link budget
    json pr = json::array();
    for (double pt : mu.sweep_values)
      pr.push_back(pt + 20.0 * std::log10(cfg.geometry.lambda_m() /
                                          (4.0 * kPi * cfg.scenario.r_c_m)));
    summary["pr_db_computed"] = pr;
  }
  json cells = json::array();
  for (int vi = 0; vi < num_values; ++vi) {
    for (int ci = 0; ci < num_combos; ++ci) {
      std::vector<double> rates;
      rates.reserve(num_seeds);
      for (int si = 0; si < num_seeds; ++si)
        rates.push_back(
            rows[(static_cast<std::size_t>(si) * num_values + vi) * num_combos + ci]
                .sum_rate);
      const Stats st = compute_stats(rates);
      cells.push_back(json{{"sweep_value", mu.sweep_values[vi]},
                           {"combo", mu.combos[ci].id()},
                           {"n", st.n},
                           {"mean_sum_rate_bps_hz", st.mean},
                           {"stderr_sum_rate_bps_hz", st.stderr_}});
    }
  }
  summary["cells"] = cells;
  return summary;
}

bool OracleReport::all_pass() const {
  for (const OracleCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

void print_oracle_report(const OracleReport& report, std::ostream& os) {
  for (const OracleCheck& c : report.checks) {
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": measured "
       << c.measured << " vs tolerance " << c.tolerance;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  os << (report.all_pass() ? "all checks passed" : "CHECK FAILURES PRESENT")
     << "\n";
}

namespace {

void add_check(OracleReport& rep, std::string name, double measured,
               double tolerance, std::string detail = "") {
  rep.checks.push_back({std::move(name), measured, tolerance,
                        measured <= tolerance, std::move(detail)});
}

ScenarioConfig two_user_scenario(std::uint64_t seed) {
  ScenarioConfig sc{ArrayGeometry{32, 4, 13, 0.0628, 0.1256}};
  sc.num_users = 2;
  sc.num_rbs = 1;
  sc.nlos_paths = 3;
  sc.seed = seed;
  return sc;
}

}  // namespace

OracleReport validate_oracles(OracleLevel level) {
  OracleReport rep;
  const ArrayGeometry g_fig3(4, 4, 13, 0.0628, 0.1256);
  const ArrayGeometry g_ref(32, 4, 13, 0.0628, 0.1256);

  {  // closed form vs explicit double sum, and the collocated degeneracy
    double dev_closed = 0.0, dev_col = 0.0;
    const ArrayGeometry g_col = g_fig3.collocated();
    for (int i = 0; i < 4001; ++i) {
      const double dth = -2.0 + i * (4.0 / 4000.0);
      dev_closed = std::max(
          dev_closed, std::abs(pattern_ff_ff(g_fig3, dth) -
                               pattern_ff_ff(g_fig3, dth, Evaluation::kDirectSum)));
      dev_col = std::max(
          dev_col, std::abs(pattern_ff_ff(g_col, dth) -
                            std::abs(dirichlet_kernel(16, 0.5, dth))));
    }
    add_check(rep, "ff_closed_vs_double_sum", dev_closed, 1e-12);
    add_check(rep, "collocated_degeneracy", dev_col, 1e-12);
  }

  {  // Fresnel vs adaptive quadrature of the defining integrals
    double dev = 0.0;
    for (double x : {0.1, 0.5, 1.0, 1.95, 2.5, 3.0, 3.2, 3.21, 4.0, 5.0, 6.5, 10.0})
      dev = std::max(dev, std::abs(fresnel(x) - fresnel_by_quadrature(x)));
    add_check(rep, "fresnel_vs_quadrature", dev, 1e-10);
    const std::complex<double> f195 = fresnel(1.95);
    add_check(rep, "halfpower_constant", std::abs(std::abs(f195) / 1.95 - 0.5),
              0.005, "|F(1.95)/1.95| vs 1/2");
  }

  {  // beamformer reduction identities on random two-user instances
    double rel_mrc = 0.0, rel_zf = 0.0, rel_mmse = 0.0;
    double nulling = 0.0, mmse_deficit = 0.0;
    const std::vector<int> group{0, 1};
    for (int t = 0; t < 200; ++t) {
      const auto users = build_channels(two_user_scenario(10000 + t));
      const auto powers = uniform_powers(2, 90.0);
      const double rho = correlation(users[0].h_nf, users[1].h_nf);
      const double n0 = users[0].h_nf.squaredNorm();
      const double n1 = users[1].h_nf.squaredNorm();

      const BeamformerSpec mrc{Scheme::kMrc, Csi::kNearField};
      const BeamformerSpec zf{Scheme::kZf, Csi::kNearField};
      const BeamformerSpec mmse{Scheme::kMmse, Csi::kNearField};
      const double g_mrc =
          sinr(beamform(mrc, users, powers, group, 0), users, powers, group, 0);
      const Eigen::VectorXcd v_zf = beamform(zf, users, powers, group, 0);
      const double g_zf = sinr(v_zf, users, powers, group, 0);
      const double g_mmse =
          sinr(beamform(mmse, users, powers, group, 0), users, powers, group, 0);

      const double ir = powers[1] * rho * rho * n1;
      const double c_mrc = powers[0] * n0 * (1.0 - ir / (ir + 1.0));
      const double c_zf = powers[0] * n0 * (1.0 - rho * rho);
      const double b_mmse = powers[1] * n1 * rho * rho / (1.0 + powers[1] * n1);
      const double c_mmse = powers[0] * n0 * (1.0 - b_mmse);

      rel_mrc = std::max(rel_mrc, std::abs(g_mrc - c_mrc) / c_mrc);
      rel_zf = std::max(rel_zf, std::abs(g_zf - c_zf) / c_zf);
      rel_mmse = std::max(rel_mmse, std::abs(g_mmse - c_mmse) / c_mmse);
      nulling = std::max(nulling, std::abs(v_zf.dot(users[1].h_nf)) /
                                      users[1].h_nf.norm());
      mmse_deficit = std::max(
          mmse_deficit, (std::max(g_mrc, g_zf) - g_mmse) / std::max(g_mmse, 1e-300));
    }
    add_check(rep, "mrc_reduction_identity", rel_mrc, 1e-8);
    add_check(rep, "zf_reduction_identity", rel_zf, 1e-8);
    add_check(rep, "mmse_reduction_identity", rel_mmse, 1e-8);
    add_check(rep, "zf_nulling_residual", nulling, 1e-9);
    add_check(rep, "mmse_dominance_deficit", std::max(0.0, mmse_deficit), 1e-9);
  }

  {  // Fresnel closed form vs direct sum on the reference sweep windows
    const PolarLocation focus{200.0, 0.0};
    double dev_theta = 0.0;
    for (int i = 0; i < 2001; ++i) {
      const double dth = -0.05 + i * (0.10 / 2000.0);
      const PolarLocation obs{200.0, std::asin(dth)};
      dev_theta = std::max(dev_theta,
                           std::abs(pattern_nf_nf(g_ref, focus, obs,
                                                  NfVariant::kClosedForm) -
                                    pattern_nf_nf(g_ref, focus, obs,
                                                  NfVariant::kCommon)));
    }
    add_check(rep, "closedform_vs_directsum_theta", dev_theta, 1e-2);
    double dev_r = 0.0;
    for (int i = 0; i < 2001; ++i) {
      const double dr = -80.0 + i * (430.0 / 2000.0);
      const PolarLocation obs{200.0 + dr, 0.0};
      dev_r = std::max(
          dev_r, std::abs(pattern_nf_nf(g_ref, focus, obs, NfVariant::kClosedForm) -
                          pattern_nf_nf(g_ref, focus, obs, NfVariant::kCommon)));
    }
    add_check(rep, "closedform_vs_directsum_dr", dev_r, 1e-2);

    double dev_ring = 0.0;
    for (double dth : {0.0, 0.05, 0.1538, 0.3}) {
      const double th = std::asin(dth);
      const PolarLocation obs{200.0 * std::cos(th) * std::cos(th), th};
      const double dk =
          std::abs(dirichlet_kernel(32, 6.5, dth)) *
          std::abs(dirichlet_kernel(4, 0.5, dth));
      dev_ring = std::max(
          dev_ring,
          std::abs(pattern_nf_nf(g_ref, focus, obs, NfVariant::kClosedForm) - dk));
    }
    add_check(rep, "same_ring_branch_exact", dev_ring, 1e-15);
  }

  if (level == OracleLevel::kFull) {
    {  // Theorem 6 cross-check: numeric half-power of E(z) vs 1/r_hp
      const double r_hp = half_power_distance(g_ref, 0.0).r_hp_m;
      const double z_num = find_half_power(
          [&](double z) { return distance_pattern(g_ref, 0.0, z); }, 0.0,
          4.0 / r_hp, 1e-15);
      add_check(rep, "theorem6_z_halfpower", std::abs(z_num * r_hp - 1.0), 0.02,
                "numeric -3 dB point vs 1/r_hp");
    }
    {  // Theorem 7 formulas vs bisection
      double worst = 0.0;
      for (double rp : {100.0, 200.0, 400.0}) {
        const DistanceResolution res =
            distance_resolution(g_ref, PolarLocation{rp, 0.0});
        auto curve = [&](double dr) {
          return distance_pattern(g_ref, 0.0, 1.0 / (rp + dr) - 1.0 / rp);
        };
        const double plus_num = find_half_power(curve, 0.0, 1000.0 * rp, 1e-9);
        const double minus_num =
            -find_half_power(curve, 0.0, -rp * (1.0 - 1e-9), 1e-9);
        worst = std::max(worst, std::abs(res.plus_m - plus_num) / res.plus_m);
        worst = std::max(worst, std::abs(res.minus_m - minus_num) / res.minus_m);
      }
      add_check(rep, "theorem7_vs_bisection", worst, 0.05);
    }
    {  // greedy never exceeds, and stays within 0.8 of, the exhaustive optimum
      double min_ratio = 1.0, exceed = 0.0;
      const BeamformerSpec spec{Scheme::kMmse, Csi::kNearField};
      for (int inst = 0; inst < 30; ++inst) {
        ScenarioConfig sc{ArrayGeometry{9, 3, 13, 0.0628, 0.1256}};
        sc.num_users = 6;
        sc.num_rbs = 3;
        sc.nlos_paths = 3;
        sc.seed = 40000 + inst;
        const auto users = build_channels(sc);
        const auto powers = uniform_powers(sc.num_users, sc.pt_db);
        double best = 0.0;
        std::vector<int> asg(sc.num_users, 0);
        for (int code = 0; code < 729; ++code) {
          int c = code;
          for (int k = 0; k < 6; ++k) {
            asg[k] = c % 3;
            c /= 3;
          }
          best = std::max(best, sum_rate(asg, 3, spec, users, powers));
        }
        const GroupingAssignment greedy =
            greedy_grouping(users, powers, 3, spec, sc.seed);
        min_ratio = std::min(min_ratio, greedy.sum_rate_bps_hz / best);
        exceed = std::max(exceed, greedy.sum_rate_bps_hz - best);
      }
      add_check(rep, "greedy_optimality_ratio", 1.0 - min_ratio, 0.2,
                "1 - min(greedy/optimal) over 30 instances");
      add_check(rep, "greedy_never_exceeds_optimum", exceed, 1e-9);
    }
    {  // greedy vs random across seeds, paired margin in standard errors
      const BeamformerSpec spec{Scheme::kMmse, Csi::kNearField};
      std::vector<double> diffs;
      for (int s = 0; s < 20; ++s) {
        ScenarioConfig sc{g_ref};
        sc.seed = 70000 + s;
        const auto users = build_channels(sc);
        const auto powers = uniform_powers(sc.num_users, sc.pt_db);
        const double rg =
            greedy_grouping(users, powers, sc.num_rbs, spec, sc.seed)
                .sum_rate_bps_hz;
        const GroupingAssignment rnd =
            random_grouping(sc.num_users, sc.num_rbs, sc.seed);
        const double rr = evaluate_grouping(rnd, users, powers, spec).sum_rate_bps_hz;
        diffs.push_back(rg - rr);
      }
      const Stats st = compute_stats(diffs);
      const double margin = st.mean / st.stderr_;
      rep.checks.push_back({"greedy_vs_random_margin", margin, 3.0, margin >= 3.0,
                            "paired mean improvement in standard errors"});
    }
  }
  return rep;
}

}  // namespace xlmimo
