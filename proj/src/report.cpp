#include "modeguide/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "modeguide/acceptance.hpp"
#include "modeguide/asymptotics.hpp"
#include "modeguide/geometry.hpp"
#include "modeguide/oracle_fd.hpp"
#include "modeguide/parallel.hpp"
#include "modeguide/simd.hpp"
#include "modeguide/solver.hpp"

namespace modeguide {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kCriticalAMax = 12.0;
constexpr double kCriticalStep = 0.05;
constexpr double kCriticalResidual = 1e-9;

double number(const json& cfg, const char* key) {
  const json& v = cfg.at(key);
  if (!v.is_number()) throw UsageError(std::string("--") + key + " is required");
  return v.get<double>();
}

int integer(const json& cfg, const char* key) { return cfg.at(key).get<int>(); }

Truncation truncation(const json& cfg) {
  Truncation t;
  t.N = integer(cfg, "modes");
  t.J = integer(cfg, "region_modes");
  try {
    t.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return t;
}

double tolerance(const json& cfg) {
  const double tol = number(cfg, "tol");
  if (!(tol >= 1e-12 && tol < 1e-2)) throw UsageError("constraint violated: 1e-12 <= tol < 1e-2");
  return tol;
}

int jobs(const json& cfg) { return std::max(1, integer(cfg, "jobs")); }

double strip_width(const json& cfg) {
  const double d = number(cfg, "d");
  if (!(d > 0) || !std::isfinite(d)) throw UsageError("constraint violated: d > 0");
  return d;
}

bool physical(double d) { return d != kPi; }

ScanOptions scan_options(int j) {
  ScanOptions s;
  s.jobs = j;
  return s;
}

json scan_provenance() {
  const ScanOptions s;
  return {{"step", s.step}, {"eps", s.eps}, {"log_hi", s.log_hi}, {"log_lo", s.log_lo},
          {"per_decade", s.per_decade}};
}

json base_provenance(const json& cfg) {
  json p;
  p["version"] = kVersion;
  p["truncation"] = {{"N", cfg.at("modes")}, {"J", cfg.at("region_modes")}};
  p["tol"] = cfg.at("tol");
  p["scan"] = scan_provenance();
  p["kernels"] = simd::backend_name(simd::active_backend());
  return p;
}

const char* parity_name(bool odd) { return odd ? "odd" : "even"; }

std::vector<double> l_values(const json& cfg) {
  const std::string s = cfg.at("l").get<std::string>();
  if (s.empty()) throw UsageError("--l is required (start:stop:step)");
  return parse_range(s);
}

// ---------------------------------------------------------------- single

RunRecord cmd_single(const json& cfg) {
  const double d = strip_width(cfg);
  const double a = number(cfg, "a");
  const Truncation tr = truncation(cfg);
  const double tol = tolerance(cfg);
  std::vector<Eigenpair> all;
  CanonicalConfig cc;
  for (Kind k : {Kind::SingleWindowEven, Kind::SingleWindowOdd}) {
    StripConfig sc;
    sc.d = d;
    sc.a = a;
    sc.kind = k;
    cc = canonicalize(sc);
    auto v = find_eigenvalues(cc, tr, tol, scan_options(jobs(cfg)));
    all.insert(all.end(), v.begin(), v.end());
  }
  std::stable_sort(all.begin(), all.end(), [](const Eigenpair& x, const Eigenpair& y) { return x.gap > y.gap; });

  Table t;
  t.columns = {"j", "parity", "lambda", "gap", "alpha", "mu_alpha", "mu_integral", "window_integral", "residual"};
  if (physical(d)) t.columns.push_back("lambda_phys");
  long j = 0;
  for (const Eigenpair& p : all) {
    const double kappa = std::sqrt(p.gap);
    const double alpha = extract_tail(p).alpha;
    const double I = window_integral(p, kappa);
    std::vector<Cell> row{++j, std::string(parity_name(p.odd)), p.lambda, p.gap, alpha,
                          mu_from_alpha(p.lambda, alpha), mu_from_integral(p.lambda, I), I, p.residual};
    if (physical(d)) row.push_back(cc.to_physical(p.lambda));
    t.rows.push_back(std::move(row));
  }
  RunRecord r;
  r.provenance = base_provenance(cfg);
  r.provenance["canonical_a"] = cc.a();
  r.provenance["lambda_scale"] = cc.lambda_scale;
  r.outputs["table"] = t.to_json();
  return r;
}

// ---------------------------------------------------------------- split

json fit_json(long j, const std::string& series, const FitResult& f, double rate, double prefactor) {
  return {{"j", j},          {"series", series},       {"rate", f.rate},
          {"prefactor", f.prefactor()}, {"r2", f.r2}, {"n_points", f.n_points},
          {"predicted_rate", rate}, {"predicted_prefactor", prefactor}};
}

RunRecord cmd_split(const json& cfg) {
  const double d = strip_width(cfg);
  const double a = number(cfg, "a");
  const std::vector<double> ls = l_values(cfg);
  const Truncation tr = truncation(cfg);
  const double tol = tolerance(cfg);
  const double to_canon = kPi / d;
  StripConfig base;
  base.d = d;
  base.a = a;
  base.validate();
  for (double l : ls)
    if (!(l > a)) throw UsageError("constraint violated: l > a (l = " + format_double(l) + ")");

  const CanonicalConfig c0 = canonicalize(base);
  const std::vector<Eigenpair> singles = find_spectrum(c0.a(), std::nullopt, tr, tol, scan_options(jobs(cfg)));
  if (singles.empty()) throw PreconditionError("no single-window eigenvalue at a = " + format_double(a));

  struct Point {
    std::vector<Eigenpair> even, odd;
  };
  const std::vector<Point> pts = parallel_map<Point>(ls.size(), jobs(cfg), [&](std::size_t i) {
    Point p;
    const double l = ls[i] * to_canon;
    p.even = find_eigenvalues(canonical(c0.a(), Kind::TwoWindowEven, l), tr, tol, scan_options(1));
    p.odd = find_eigenvalues(canonical(c0.a(), Kind::TwoWindowOdd, l), tr, tol, scan_options(1));
    return p;
  });

  Table t;
  t.columns = {"j", "l", "lambda_j", "lambda_plus", "lambda_minus", "delta_plus", "delta_minus", "delta_pred"};
  if (physical(d)) {
    t.columns.push_back("l_canonical");
    t.columns.push_back("lambda_plus_phys");
    t.columns.push_back("lambda_minus_phys");
  }
  json fits = json::array();
  for (size_t jj = 0; jj < singles.size(); ++jj) {
    const Eigenpair& s = singles[jj];
    const double kappa = std::sqrt(s.gap);
    const SplittingPrediction pred = predict_splitting(s.lambda, extract_tail(s).alpha, window_integral(s, kappa));
    std::vector<std::pair<double, double>> dp, dm;
    for (size_t i = 0; i < ls.size(); ++i) {
      if (pts[i].even.size() <= jj || pts[i].odd.size() <= jj) continue;
      const Eigenpair& e = pts[i].even[jj];
      const Eigenpair& o = pts[i].odd[jj];
      const double lc = ls[i] * to_canon;
      std::vector<Cell> row{long(jj + 1), ls[i], s.lambda, e.lambda, o.lambda, s.lambda - e.lambda,
                            o.lambda - s.lambda, pred.delta(lc)};
      if (physical(d)) {
        row.push_back(lc);
        row.push_back(c0.to_physical(e.lambda));
        row.push_back(c0.to_physical(o.lambda));
      }
      t.rows.push_back(std::move(row));
      if (s.lambda - e.lambda > 0) dp.push_back({lc, s.lambda - e.lambda});
      if (o.lambda - s.lambda > 0) dm.push_back({lc, o.lambda - s.lambda});
    }
    if (dp.size() >= 3) fits.push_back(fit_json(long(jj + 1), "delta_plus", fit_exponential(dp), pred.rate, pred.mu()));
    if (dm.size() >= 3) fits.push_back(fit_json(long(jj + 1), "delta_minus", fit_exponential(dm), pred.rate, pred.mu()));
  }
  RunRecord r;
  r.provenance = base_provenance(cfg);
  r.provenance["canonical_a"] = c0.a();
  r.provenance["lambda_scale"] = c0.lambda_scale;
  r.provenance["fit_units"] = "canonical";
  r.outputs["table"] = t.to_json();
  r.outputs["fits"] = fits;
  return r;
}

// ---------------------------------------------------------------- critical

RunRecord cmd_critical(const json& cfg) {
  const double d = strip_width(cfg);
  const int n = integer(cfg, "n");
  if (n < 1) throw UsageError("constraint violated: n >= 1");
  const Truncation tr = truncation(cfg);
  const double tol = tolerance(cfg);
  const CriticalSearch cs = find_critical_widths(n, tr, tol, kCriticalAMax, kCriticalStep, jobs(cfg));
  if (cs.widths.empty()) throw NonConvergence("no critical width below a = 12");

  Table t;
  t.columns = {"n", "a_n", "parity", "beta", "window_integral", "mu_beta", "mu_integral", "sqrt_mu",
               "kappa_pred", "residual"};
  if (physical(d)) t.columns.push_back("a_n_phys");
  const std::string rate = format_double(2.0 * std::sqrt(3.0));
  for (const CriticalWidth& cw : cs.widths) {
    const double I = window_integral(cw.resonance, std::sqrt(3.0));
    const ThresholdPrediction p = predict_threshold(cw.beta_n, I);
    const double sm = std::sqrt(p.mu_beta);
    std::vector<Cell> row{long(cw.n), cw.a_n, std::string(parity_name(cw.odd)), cw.beta_n, I, p.mu_beta,
                          p.mu_integral, sm, format_double(sm) + "*exp(-" + rate + "*l)", cw.residual};
    if (physical(d)) row.push_back(cw.a_n * d / kPi);
    t.rows.push_back(std::move(row));
  }
  RunRecord r;
  r.provenance = base_provenance(cfg);
  r.provenance["critical_scan"] = {{"a_max", kCriticalAMax}, {"step", kCriticalStep}};
  r.outputs["table"] = t.to_json();
  r.outputs["range_exhausted"] = cs.range_exhausted;
  return r;
}

// ---------------------------------------------------------------- threshold

RunRecord cmd_threshold(const json& cfg) {
  const double d = strip_width(cfg);
  const std::vector<double> ls = l_values(cfg);
  const Truncation tr = truncation(cfg);
  const double tol = tolerance(cfg);
  const double to_canon = kPi / d;
  CriticalWidth cw;
  if (cfg.at("a").is_number()) {
    const double a = number(cfg, "a");
    if (!(a > 0)) throw UsageError("constraint violated: a > 0");
    const double ac = a * to_canon;
    const CriticalWidth e = resolve_critical(ac, false, tr);
    const CriticalWidth o = resolve_critical(ac, true, tr);
    cw = e.residual <= o.residual ? e : o;
    if (!(cw.residual <= kCriticalResidual))
      throw PreconditionError("a = " + format_double(a) +
                              " is not a critical width (threshold residual " + format_double(cw.residual) +
                              "); run `modeguide critical` first and pass its a_n");
    cw.n = 0;
  } else {
    const int n = integer(cfg, "n");
    if (n < 1) throw UsageError("constraint violated: n >= 1");
    const CriticalSearch cs = find_critical_widths(n, tr, tol, kCriticalAMax, kCriticalStep, jobs(cfg));
    if (static_cast<int>(cs.widths.size()) < n) throw NonConvergence("fewer than n critical widths below a = 12");
    cw = cs.widths[n - 1];
  }
  for (double l : ls)
    if (!(l * to_canon > cw.a_n)) throw UsageError("constraint violated: l > a (l = " + format_double(l) + ")");
  const ThresholdPrediction pred = predict_threshold(cw.beta_n, window_integral(cw.resonance, std::sqrt(3.0)));

  const std::vector<Eigenpair> near = parallel_map<Eigenpair>(ls.size(), jobs(cfg), [&](std::size_t i) {
    const double l = ls[i] * to_canon;
    const auto v = find_eigenvalues(canonical(cw.a_n, Kind::TwoWindowEven, l), tr, tol, scan_options(1));
    const auto it = std::min_element(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.gap < y.gap; });
    if (it == v.end() || it->gap > 1e-2)
      throw NonConvergence("no near-threshold eigenvalue at l = " + format_double(ls[i]));
    return *it;
  });

  Table t;
  t.columns = {"l", "gap", "lambda_plus", "gap_pred", "kappa", "kappa_pred"};
  if (physical(d)) t.columns.push_back("l_canonical");
  std::vector<std::pair<double, double>> s;
  for (size_t i = 0; i < ls.size(); ++i) {
    const double lc = ls[i] * to_canon;
    const double gp = pred.mu_beta * std::exp(-pred.rate * lc);
    std::vector<Cell> row{ls[i], near[i].gap, near[i].lambda, gp, std::sqrt(near[i].gap), std::sqrt(gp)};
    if (physical(d)) row.push_back(lc);
    t.rows.push_back(std::move(row));
    s.push_back({lc, near[i].gap});
  }
  json fits = json::array();
  if (s.size() >= 3) fits.push_back(fit_json(1, "gap", fit_exponential(s), pred.rate, pred.mu_beta));
  RunRecord r;
  r.provenance = base_provenance(cfg);
  r.provenance["critical"] = {{"a_n", cw.a_n}, {"parity", parity_name(cw.odd)}, {"beta", cw.beta_n},
                              {"residual", cw.residual}};
  r.provenance["fit_units"] = "canonical";
  r.outputs["table"] = t.to_json();
  r.outputs["fits"] = fits;
  return r;
}

// ---------------------------------------------------------------- oracle

RunRecord cmd_oracle(const json& cfg) {
  const double d = strip_width(cfg);
  const double a = number(cfg, "a");
  const std::string lstr = cfg.at("l").get<std::string>();
  std::optional<double> l;
  if (!lstr.empty()) {
    const auto v = parse_range(lstr);
    if (v.size() != 1) throw UsageError("oracle takes a single --l value");
    l = v.front();
  }
  const double h = number(cfg, "h");
  const int levels = integer(cfg, "levels");
  const int k = integer(cfg, "k");
  if (!(h > 0)) throw UsageError("constraint violated: h > 0");
  if (levels < 2) throw UsageError("constraint violated: levels >= 2");
  if (k < 1) throw UsageError("constraint violated: k >= 1");
  const std::string parity = cfg.at("parity").get<std::string>();
  if (parity != "even" && parity != "odd" && parity != "both")
    throw UsageError("--parity must be even, odd or both");

  StripConfig sc;
  sc.d = d;
  sc.a = a;
  sc.l = l;
  sc.kind = l ? Kind::TwoWindowEven : Kind::SingleWindowEven;
  const CanonicalConfig c0 = canonicalize(sc);
  double L = std::ceil(c0.l() + c0.a()) + 16.0;
  if (cfg.at("L").is_number()) L = number(cfg, "L");

  std::vector<double> hs;
  for (int i = levels - 1; i >= 0; --i) hs.push_back(h * std::ldexp(1.0, i));

  Table t;
  t.columns = {"parity", "index"};
  for (double hh : hs) t.columns.push_back("lambda_h" + format_double(hh));
  for (const char* c : {"extrapolated", "error_bound", "order", "flagged", "threshold"}) t.columns.push_back(c);
  if (physical(d)) t.columns.push_back("extrapolated_phys");

  std::vector<bool> sectors;
  if (parity != "odd") sectors.push_back(false);
  if (parity != "even") sectors.push_back(true);
  json solves = json::array();
  for (bool odd : sectors) {
    const Kind kind = l ? (odd ? Kind::TwoWindowOdd : Kind::TwoWindowEven)
                        : (odd ? Kind::SingleWindowOdd : Kind::SingleWindowEven);
    const CanonicalConfig cc = canonical(c0.a(), kind, l ? std::optional<double>(c0.l()) : std::nullopt);
    std::vector<std::vector<double>> vals;
    double thr = 1.0;
    for (double hh : hs) {
      OracleConfig oc;
      oc.h = hh;
      oc.L = L;
      oc.k = k;
      const FdOperator op = discretize(cc, oc);
      LanczosInfo info;
      vals.push_back(lowest_eigenvalues(op, k, oc, &info));
      thr = op.threshold();
      solves.push_back({{"parity", parity_name(odd)}, {"h", hh}, {"unknowns", op.A.rows()},
                        {"iterations", info.iterations}, {"restarts", info.restarts}});
    }
    for (int i = 0; i < k; ++i) {
      if (!(vals.back()[i] < thr)) break;
      std::vector<double> seq;
      for (const auto& v : vals) seq.push_back(v[i]);
      const Extrapolation e = refine_and_extrapolate(seq);
      std::vector<Cell> row{std::string(parity_name(odd)), long(i + 1)};
      for (double v : seq) row.push_back(v);
      row.push_back(e.value);
      row.push_back(e.error_bound);
      row.push_back(e.order);
      row.push_back(long(e.flagged));
      row.push_back(thr);
      if (physical(d)) row.push_back(c0.to_physical(e.value));
      t.rows.push_back(std::move(row));
    }
  }
  RunRecord r;
  r.provenance = base_provenance(cfg);
  r.provenance["oracle"] = {{"L", L}, {"grids", hs}, {"k", k}, {"sigma", OracleConfig{}.sigma},
                            {"lanczos_tol", OracleConfig{}.tol}, {"seed", OracleConfig{}.seed}};
  r.provenance["solves"] = solves;
  r.outputs["table"] = t.to_json();
  return r;
}

// ---------------------------------------------------------------- verify

RunRecord cmd_verify(const json& cfg, const LogFn& log) {
  AcceptanceOptions opt;
  opt.quick = cfg.at("quick").get<bool>();
  opt.jobs = jobs(cfg);
  opt.trunc = truncation(cfg);
  opt.tol = tolerance(cfg);
  opt.on_result = [&](const CriterionResult& c) {
    if (log) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " (%.1f s)", c.seconds);
      log(c.status() + " " + std::to_string(c.id) + " " + c.name + ": " + c.detail + buf);
    }
  };
  const auto results = run_acceptance(opt);
  Table t;
  t.columns = {"id", "name", "status", "detail"};
  json failed = json::array();
  for (const auto& c : results) {
    t.rows.push_back({long(c.id), c.name, c.status(), c.detail});
    if (!c.passed && !c.skipped) failed.push_back(c.id);
  }
  RunRecord r;
  r.provenance = base_provenance(cfg);
  r.outputs["table"] = t.to_json();
  r.outputs["failed"] = failed;
  r.outputs["all_passed"] = failed.empty();
  return r;
}

RunRecord compute(const std::string& command, const json& cfg, const LogFn& log) {
  RunRecord r;
  if (command == "single") r = cmd_single(cfg);
  else if (command == "split") r = cmd_split(cfg);
  else if (command == "critical") r = cmd_critical(cfg);
  else if (command == "threshold") r = cmd_threshold(cfg);
  else if (command == "oracle") r = cmd_oracle(cfg);
  else if (command == "verify") r = cmd_verify(cfg, log);
  else throw UsageError("unknown command: " + command);
  r.command = command;
  r.config = cfg;
  return r;
}

// ---------------------------------------------------------------- rendering

int column(const Table& t, const std::string& name) {
  for (size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return static_cast<int>(i);
  return -1;
}

double as_double(const Cell& c) {
  if (std::holds_alternative<double>(c)) return std::get<double>(c);
  if (std::holds_alternative<long>(c)) return double(std::get<long>(c));
  return std::nan("");
}

std::string ln_or_nan(double v) { return v > 0 ? format_double(std::log(v)) : "NaN"; }

std::string fits_csv(const json& fits) {
  Table f;
  f.columns = {"j", "series", "rate", "prefactor", "r2", "n_points", "predicted_rate", "predicted_prefactor"};
  for (const auto& x : fits)
    f.rows.push_back({x.at("j").get<long>(), x.at("series").get<std::string>(), x.at("rate").get<double>(),
                      x.at("prefactor").get<double>(), x.at("r2").get<double>(), x.at("n_points").get<long>(),
                      x.at("predicted_rate").get<double>(), x.at("predicted_prefactor").get<double>()});
  return f.to_csv();
}

std::string split_plot(const Table& t) {
  const int cj = column(t, "j"), cl = column(t, "l_canonical") >= 0 ? column(t, "l_canonical") : column(t, "l");
  const int cp = column(t, "delta_plus"), cm = column(t, "delta_minus"), cq = column(t, "delta_pred");
  std::ostringstream os, plots;
  os << "# gnuplot script: ln delta versus l (canonical units)\n";
  os << "set xlabel \"l\"\nset ylabel \"ln delta\"\nset key top right\n";
  long current = -1;
  for (const auto& row : t.rows) {
    const long j = std::get<long>(row[cj]);
    if (j != current) {
      if (current >= 0) os << "EOD\n";
      current = j;
      os << "$j" << j << " << EOD\n";
      if (plots.tellp() > 0) plots << ", \\\n     ";
      plots << "$j" << j << " using 1:2 with points title \"j=" << j << " delta+\", "
            << "$j" << j << " using 1:3 with points title \"j=" << j << " delta-\", "
            << "$j" << j << " using 1:4 with lines title \"j=" << j << " predicted\"";
    }
    os << format_double(as_double(row[cl])) << " " << ln_or_nan(as_double(row[cp])) << " "
       << ln_or_nan(as_double(row[cm])) << " " << ln_or_nan(as_double(row[cq])) << "\n";
  }
  if (current >= 0) os << "EOD\n";
  os << "plot " << plots.str() << "\n";
  return os.str();
}

std::string threshold_plot(const Table& t) {
  const int cl = column(t, "l_canonical") >= 0 ? column(t, "l_canonical") : column(t, "l");
  const int cg = column(t, "gap"), cp = column(t, "gap_pred");
  std::ostringstream os;
  os << "# gnuplot script: ln(1 - lambda) versus l (canonical units)\n";
  os << "set xlabel \"l\"\nset ylabel \"ln(1 - lambda)\"\nset key top right\n";
  os << "$gap << EOD\n";
  for (const auto& row : t.rows)
    os << format_double(as_double(row[cl])) << " " << ln_or_nan(as_double(row[cg])) << " "
       << ln_or_nan(as_double(row[cp])) << "\n";
  os << "EOD\n";
  os << "plot $gap using 1:2 with points title \"measured\", $gap using 1:3 with lines title \"predicted\"\n";
  return os.str();
}

json load_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

void write_file(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> n{"single", "split", "critical", "threshold", "oracle", "verify"};
  return n;
}

json default_config() {
  return {{"d", kPi},      {"a", nullptr},     {"l", ""},          {"n", 1},
          {"modes", 40},   {"region_modes", 512}, {"tol", 1e-12}, {"jobs", 1},
          {"format", "csv"}, {"quick", false},  {"h", 1.0 / 64},    {"L", nullptr},
          {"k", 2},        {"levels", 3},      {"parity", "both"}};
}

std::vector<double> parse_range(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (!s.empty() && s.back() == ':') parts.push_back("");
  auto num = [&](const std::string& p) {
    size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(p, &pos);
    } catch (const std::exception&) {
      throw UsageError("invalid range '" + s + "': expected start:stop:step");
    }
    if (pos != p.size() || !std::isfinite(v)) throw UsageError("invalid range '" + s + "': expected start:stop:step");
    return v;
  };
  if (parts.size() == 1) return {num(parts[0])};
  if (parts.size() != 3) throw UsageError("invalid range '" + s + "': expected start:stop:step");
  const double a = num(parts[0]), b = num(parts[1]), st = num(parts[2]);
  if (!(st > 0)) throw UsageError("invalid range '" + s + "': step must be positive");
  if (b < a) throw UsageError("empty range '" + s + "'");
  const long n = static_cast<long>(std::floor((b - a) / st + 1e-9)) + 1;
  if (n > 100000) throw UsageError("range '" + s + "' has too many points");
  std::vector<double> v;
  for (long i = 0; i < n; ++i) v.push_back(a + i * st);
  return v;
}

RunRecord run_command(const std::string& command, const json& config, const LogFn& log) {
  const char* dir = std::getenv("MODEGUIDE_CACHE");
  const bool cacheable = dir && *dir && command != "verify";
  fs::path path;
  if (cacheable) {
    path = fs::path(dir) / (cache_key(command, config) + ".json");
    std::error_code ec;
    if (fs::exists(path, ec)) {
      try {
        RunRecord r = RunRecord::from_json(load_json(path));
        if (r.command == command && r.config == config) {
          if (log) log("cache hit: " + path.string());
          return r;
        }
      } catch (const std::exception&) {
        // unreadable entry, recompute
      }
    }
  }
  RunRecord r = compute(command, config, log);
  if (cacheable) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp";
    write_file(tmp, r.to_json(false).dump(2) + "\n");
    fs::rename(tmp, path, ec);
  }
  return r;
}

RunRecord replay(const RunRecord& record, const LogFn& log) { return compute(record.command, record.config, log); }

Rendered render(const RunRecord& record, const std::string& format) {
  Rendered out;
  const Table t = Table::from_json(record.outputs.at("table"));
  if (format == "json") {
    out.primary = record.to_json(false).dump(2) + "\n";
    out.extension = "json";
  } else {
    out.primary = t.to_csv();
    out.extension = "csv";
  }
  if (record.outputs.contains("fits") && !record.outputs.at("fits").empty())
    out.fits = fits_csv(record.outputs.at("fits"));
  if (record.command == "split" && !t.rows.empty()) out.plot = split_plot(t);
  if (record.command == "threshold" && !t.rows.empty()) out.plot = threshold_plot(t);
  return out;
}

int outcome(const RunRecord& record) {
  if (record.command == "verify" && !record.outputs.value("all_passed", false)) return kExitFailed;
  return kExitOk;
}

void write_outputs(const RunRecord& record, const Rendered& r, const std::string& dir, const std::string& timestamp) {
  const fs::path base(dir);
  fs::create_directories(base);
  write_file(base / (record.command + "." + r.extension), r.primary);
  if (!r.fits.empty()) write_file(base / (record.command + "_fit.csv"), r.fits);
  if (!r.plot.empty()) write_file(base / (record.command + "_plot.gp"), r.plot);
  RunRecord side = record;
  side.timestamp = timestamp;
  write_file(base / (record.command + ".record.json"), side.to_json(true).dump(2) + "\n");
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace modeguide
