#include "modeguide/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "modeguide/asymptotics.hpp"
#include "modeguide/oracle_fd.hpp"
#include "modeguide/run_record.hpp"
#include "modeguide/solver.hpp"

namespace modeguide {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string g(double v) { return format_double(v); }

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

const Eigenpair* lowest(const std::vector<Eigenpair>& v) {
  return v.empty() ? nullptr : &*std::max_element(v.begin(), v.end(), [](const auto& x, const auto& y) {
    return x.gap < y.gap;
  });
}

const Eigenpair* nearest_threshold(const std::vector<Eigenpair>& v) {
  return v.empty() ? nullptr : &*std::min_element(v.begin(), v.end(), [](const auto& x, const auto& y) {
    return x.gap < y.gap;
  });
}

struct Sectors {
  std::vector<Eigenpair> even, odd;
};

class Context {
 public:
  explicit Context(const AcceptanceOptions& o) : opt_(o) {
    scan_.jobs = o.jobs;
  }

  const AcceptanceOptions& opt() const { return opt_; }

  const std::vector<Eigenpair>& single(double a) {
    auto it = single_.find(a);
    if (it == single_.end()) it = single_.emplace(a, find_spectrum(a, std::nullopt, opt_.trunc, opt_.tol, scan_)).first;
    return it->second;
  }

  const Sectors& pair(double a, double l) {
    const auto key = std::make_pair(a, l);
    auto it = two_.find(key);
    if (it == two_.end()) {
      const auto t0 = Clock::now();
      Sectors s;
      s.even = find_eigenvalues(canonical(a, Kind::TwoWindowEven, l), opt_.trunc, opt_.tol, scan_);
      s.odd = find_eigenvalues(canonical(a, Kind::TwoWindowOdd, l), opt_.trunc, opt_.tol, scan_);
      it = two_.emplace(key, std::move(s)).first;
      pair_seconds_[key] = seconds_since(t0);
    }
    return it->second;
  }

  // wall time spent computing pair(a, l), cached or not
  double pair_seconds(double a, double l) {
    pair(a, l);
    return pair_seconds_[std::make_pair(a, l)];
  }

  const CriticalWidth& first_critical() {
    if (!crit_) {
      CriticalSearch cs = find_critical_widths(1, opt_.trunc, opt_.tol, 12.0, 0.05, opt_.jobs);
      if (cs.widths.empty()) throw NonConvergence("no critical width below a = 12");
      crit_ = cs.widths.front();
    }
    return *crit_;
  }

  // near-threshold even eigenvalue at the first critical width
  const Eigenpair& threshold_pair(double l) {
    auto it = near_.find(l);
    if (it == near_.end()) {
      const double a1 = first_critical().a_n;
      auto v = find_eigenvalues(canonical(a1, Kind::TwoWindowEven, l), opt_.trunc, opt_.tol, scan_);
      const Eigenpair* p = nearest_threshold(v);
      if (!p || p->gap > 1e-2) throw NonConvergence("no near-threshold eigenvalue at l = " + g(l));
      it = near_.emplace(l, *p).first;
      near_count_[l] = static_cast<int>(v.size());
    }
    return it->second;
  }

  const ScanOptions& scan() const { return scan_; }

 private:
  AcceptanceOptions opt_;
  ScanOptions scan_;
  std::map<double, std::vector<Eigenpair>> single_;
  std::map<std::pair<double, double>, Sectors> two_;
  std::map<std::pair<double, double>, double> pair_seconds_;
  std::optional<CriticalWidth> crit_;
  std::map<double, Eigenpair> near_;
  std::map<double, int> near_count_;
};

struct Check {
  std::ostringstream detail;
  bool ok = true;
  void expect(bool cond, const std::string& what) {
    if (!detail.str().empty()) detail << "; ";
    detail << what << (cond ? "" : " [violated]");
    ok = ok && cond;
  }
};

// extrapolated lowest FD eigenvalue on h = 1/16, 1/32, 1/64
Extrapolation fd_lowest(const CanonicalConfig& cfg, double L) {
  std::vector<double> v;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    OracleConfig oc;
    oc.h = h;
    oc.L = L;
    oc.k = 1;
    v.push_back(oracle_eigenvalues(cfg, oc).front());
  }
  return refine_and_extrapolate(v);
}

double fd_box(double a, double l, double lambda) {
  const double kappa = std::sqrt(1.0 - lambda);
  return std::ceil(l + a + std::max(12.0, 6.0 / kappa));
}

CriterionResult oracle_equivalence(Context& cx) {
  CriterionResult r{1, "oracle equivalence", false, false, "", 0.0};
  if (cx.opt().quick) {
    r.skipped = true;
    r.detail = "finite-difference refinement skipped in quick mode";
    return r;
  }
  const auto t0 = Clock::now();
  Check c;
  for (double a : {1.0, 2.0}) {
    const Eigenpair* p = lowest(cx.single(a));
    if (!p) {
      c.expect(false, "no eigenvalue at a=" + g(a));
      continue;
    }
    const auto e = fd_lowest(canonical(a, Kind::SingleWindowEven), fd_box(a, 0, p->lambda));
    c.expect(std::abs(e.value - p->lambda) <= 1e-3 && !e.flagged,
             "a=" + g(a) + " solver " + g(p->lambda) + " fd " + g(e.value) + " bound " + g(e.error_bound));
  }
  const Sectors& s = cx.pair(1.0, 6.0);
  for (bool odd : {false, true}) {
    const Eigenpair* p = lowest(odd ? s.odd : s.even);
    if (!p) {
      c.expect(false, std::string("no two-window eigenvalue ") + (odd ? "odd" : "even"));
      continue;
    }
    const auto e = fd_lowest(canonical(1.0, odd ? Kind::TwoWindowOdd : Kind::TwoWindowEven, 6.0),
                             fd_box(1.0, 6.0, p->lambda));
    c.expect(std::abs(e.value - p->lambda) <= 1e-3 && !e.flagged,
             std::string(odd ? "l=6 odd" : "l=6 even") + " solver " + g(p->lambda) + " fd " + g(e.value) +
                 " bound " + g(e.error_bound));
  }
  r.seconds = seconds_since(t0);
  c.expect(r.seconds <= 300.0, "runtime " + g(std::round(r.seconds)) + " s");
  r.passed = c.ok;
  r.detail = c.detail.str();
  return r;
}

CriterionResult bracketing(Context& cx) {
  CriterionResult r{2, "bracketing and monotonicity", false, false, "", 0.0};
  const auto t0 = Clock::now();
  const Eigenpair* p1 = lowest(cx.single(1.0));
  if (!p1) throw NonConvergence("no single-window eigenvalue at a = 1");
  int violations = 0;
  double prev_plus = -1.0, prev_minus = 2.0;
  for (int l = 4; l <= 10; ++l) {
    const Sectors& s = cx.pair(1.0, l);
    const Eigenpair* plus = lowest(s.even);
    const Eigenpair* minus = lowest(s.odd);
    if (!plus || !minus) {
      ++violations;
      continue;
    }
    if (!(plus->lambda <= p1->lambda && p1->lambda <= minus->lambda)) ++violations;
    if (plus->lambda < prev_plus || minus->lambda > prev_minus) ++violations;
    prev_plus = plus->lambda;
    prev_minus = minus->lambda;
  }
  r.seconds = seconds_since(t0);
  r.passed = violations == 0;
  r.detail = "l=4..10, a=1: " + std::to_string(violations) + " violations";
  return r;
}

struct SplitFits {
  FitResult plus, minus, half;
  SplittingPrediction pred;
  double seconds = 0.0;
};

SplitFits split_fits(Context& cx) {
  const auto t0 = Clock::now();
  const Eigenpair* p1 = lowest(cx.single(1.0));
  if (!p1) throw NonConvergence("no single-window eigenvalue at a = 1");
  const double kappa = std::sqrt(p1->gap);
  std::vector<std::pair<double, double>> dp, dm, dh;
  double sweep = 0.0;
  for (int l = 4; l <= 9; ++l) {
    sweep += cx.pair_seconds(1.0, l);
    const Sectors& s = cx.pair(1.0, l);
    const Eigenpair* plus = lowest(s.even);
    const Eigenpair* minus = lowest(s.odd);
    if (!plus || !minus) throw NonConvergence("missing two-window eigenvalue at l = " + std::to_string(l));
    dp.push_back({double(l), p1->lambda - plus->lambda});
    dm.push_back({double(l), minus->lambda - p1->lambda});
    dh.push_back({double(l), 0.5 * (minus->lambda - plus->lambda)});
  }
  SplitFits f;
  f.plus = fit_exponential(dp);
  f.minus = fit_exponential(dm);
  f.half = fit_exponential(dh);
  f.pred = predict_splitting(p1->lambda, extract_tail(*p1).alpha, window_integral(*p1, kappa));
  f.seconds = sweep + seconds_since(t0);
  return f;
}

CriterionResult splitting_rate(Context& cx, const SplitFits& f) {
  CriterionResult r{3, "splitting rate", false, false, "", f.seconds};
  Check c;
  c.expect(rel(f.plus.rate, f.pred.rate) <= 0.02 && f.plus.r2 >= 0.999,
           "delta+ rate " + g(f.plus.rate) + " r2 " + g(f.plus.r2));
  c.expect(rel(f.minus.rate, f.pred.rate) <= 0.02 && f.minus.r2 >= 0.999,
           "delta- rate " + g(f.minus.rate) + " r2 " + g(f.minus.r2));
  c.expect(true, "predicted " + g(f.pred.rate) + ", half-splitting rate " + g(f.half.rate));
  c.expect(f.seconds <= 120.0, "runtime " + g(std::round(f.seconds)) + " s");
  (void)cx;
  r.passed = c.ok;
  r.detail = c.detail.str();
  return r;
}

CriterionResult splitting_prefactor(const SplitFits& f) {
  CriterionResult r{4, "splitting prefactor", false, false, "", 0.0};
  Check c;
  const double mu = f.pred.mu_integral;
  c.expect(rel(f.plus.prefactor(), mu) <= 0.10, "delta+ prefactor " + g(f.plus.prefactor()));
  c.expect(rel(f.minus.prefactor(), mu) <= 0.10, "delta- prefactor " + g(f.minus.prefactor()));
  c.expect(true, "half-splitting prefactor " + g(f.half.prefactor()));
  c.expect(rel(f.pred.mu_alpha, f.pred.mu_integral) <= 1e-3,
           "mu(integral) " + g(f.pred.mu_integral) + " mu(alpha) " + g(f.pred.mu_alpha));
  r.passed = c.ok;
  r.detail = c.detail.str();
  return r;
}

CriterionResult identity(Context& cx) {
  CriterionResult r{5, "window integral identity", false, false, "", 0.0};
  const auto t0 = Clock::now();
  Check c;
  for (double a : {1.0, 2.0}) {
    const Eigenpair* p = lowest(cx.single(a));
    if (!p) {
      c.expect(false, "no eigenvalue at a=" + g(a));
      continue;
    }
    const double kappa = std::sqrt(p->gap);
    const double lhs = window_integral(*p, kappa);
    const double rhs = extract_tail(*p).alpha * kPi * kappa;
    c.expect(rel(lhs, rhs) <= 1e-6, "a=" + g(a) + " rel " + g(rel(lhs, rhs)));
  }
  r.seconds = seconds_since(t0);
  r.passed = c.ok;
  r.detail = c.detail.str();
  return r;
}

int odd_count_below_threshold(double a, double h) {
  OracleConfig oc;
  oc.h = h;
  oc.L = a + 10.0;
  oc.far = FarFace::Neumann;
  const FdOperator op = discretize(canonical(a, Kind::SingleWindowOdd), oc);
  return count_below(op.A, op.threshold());
}

CriterionResult critical_width(Context& cx) {
  CriterionResult r{6, "first critical width", false, false, "", 0.0};
  const auto t0 = Clock::now();
  Check c;
  const CriticalWidth& cw = cx.first_critical();
  const double I = window_integral(cw.resonance, std::sqrt(3.0));
  const double Ib = std::sqrt(3.0) * kPi / 2.0 * cw.beta_n;
  const ThresholdPrediction pred = predict_threshold(cw.beta_n, I);
  c.expect(true, "a1 " + g(cw.a_n) + (cw.odd ? " odd" : " even"));
  if (cx.opt().quick) {
    c.expect(true, "fd bracket skipped in quick mode");
  } else {
    std::vector<double> crossings;
    CriticalCrossing finest;
    for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
      finest = critical_crossing(h, 1.5, 3.0, 1.0 / 16);
      if (!finest.found) break;
      crossings.push_back(finest.a);
    }
    if (crossings.size() == 3) {
      const auto e = refine_and_extrapolate(crossings);
      c.expect(std::abs(cw.a_n - e.value) <= 1e-2,
               "fd crossing " + g(e.value) + " bracket [" + g(e.value - 1e-2) + ", " + g(e.value + 1e-2) + "]");
      const int lo = odd_count_below_threshold(finest.a_lo, 1.0 / 64);
      const int hi = odd_count_below_threshold(finest.a_hi, 1.0 / 64);
      c.expect(lo == 0 && hi == 1, "fd counts " + std::to_string(lo) + " at a=" + g(finest.a_lo) + ", " +
                                       std::to_string(hi) + " at a=" + g(finest.a_hi));
    } else {
      c.expect(false, "fd threshold crossing not found");
    }
  }
  c.expect(rel(I, Ib) <= 1e-4, "beta1 " + g(cw.beta_n) + " integral rel " + g(rel(I, Ib)));
  c.expect(rel(pred.mu_integral, pred.mu_beta) <= 1e-3,
           "mu(beta) " + g(pred.mu_beta) + " mu(integral) " + g(pred.mu_integral));
  r.seconds = seconds_since(t0);
  r.passed = c.ok;
  r.detail = c.detail.str();
  return r;
}

CriterionResult threshold_asymptotics(Context& cx) {
  CriterionResult r{7, "threshold asymptotics", false, false, "", 0.0};
  const auto t0 = Clock::now();
  Check c;
  const CriticalWidth& cw = cx.first_critical();
  const ThresholdPrediction pred = predict_threshold(cw.beta_n, window_integral(cw.resonance, std::sqrt(3.0)));
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i <= 6; ++i) {
    const double l = 3.0 + 0.5 * i;
    s.push_back({l, cx.threshold_pair(l).gap});
  }
  const FitResult f = fit_exponential(s);
  c.expect(rel(f.rate, pred.rate) <= 0.03, "rate " + g(f.rate) + " r2 " + g(f.r2));
  c.expect(rel(f.prefactor(), pred.mu_beta) <= 0.15,
           "prefactor " + g(f.prefactor()) + " vs " + g(pred.mu_beta));
  const double k5 = std::sqrt(cx.threshold_pair(5.0).gap);
  const double k5p = std::sqrt(pred.mu_beta) * std::exp(-0.5 * pred.rate * 5.0);
  c.expect(rel(k5, k5p) <= 0.10, "kappa(5) " + g(k5) + " vs " + g(k5p));
  r.seconds = seconds_since(t0);
  c.expect(r.seconds <= 300.0, "runtime " + g(std::round(r.seconds)) + " s");
  r.passed = c.ok;
  r.detail = c.detail.str();
  return r;
}

CriterionResult truncation_stability(Context& cx) {
  CriterionResult r{8, "truncation stability", false, false, "", 0.0};
  const auto t0 = Clock::now();
  Truncation hi = cx.opt().trunc;
  hi.N = 2 * cx.opt().trunc.N;
  ScanOptions sc = cx.scan();
  double worst = 0.0;
  int compared = 0;
  bool count_mismatch = false;
  auto compare = [&](const std::vector<Eigenpair>& base, const std::vector<Eigenpair>& fine) {
    if (base.size() != fine.size()) {
      count_mismatch = true;
      return;
    }
    for (size_t i = 0; i < base.size(); ++i) {
      worst = std::max(worst, std::abs(base[i].lambda - fine[i].lambda));
      ++compared;
    }
  };
  for (double a : {1.0, 2.0}) compare(cx.single(a), find_spectrum(a, std::nullopt, hi, cx.opt().tol, sc));
  for (double l : {4.0, 6.0, 8.0}) {
    const Sectors& s = cx.pair(1.0, l);
    compare(s.even, find_eigenvalues(canonical(1.0, Kind::TwoWindowEven, l), hi, cx.opt().tol, sc));
    compare(s.odd, find_eigenvalues(canonical(1.0, Kind::TwoWindowOdd, l), hi, cx.opt().tol, sc));
  }
  const CriticalWidth& cw = cx.first_critical();
  const CriticalSearch cs = find_critical_widths(1, hi, cx.opt().tol, 12.0, 0.05, cx.opt().jobs);
  double da = 1.0;
  if (!cs.widths.empty()) da = std::abs(cs.widths.front().a_n - cw.a_n);
  {
    const Eigenpair& p = cx.threshold_pair(5.0);
    auto v = find_eigenvalues(canonical(cw.a_n, Kind::TwoWindowEven, 5.0), hi, cx.opt().tol, sc);
    const Eigenpair* q = nearest_threshold(v);
    if (q) {
      worst = std::max(worst, std::abs(p.gap - q->gap));
      ++compared;
    } else {
      count_mismatch = true;
    }
  }
  r.seconds = seconds_since(t0);
  r.passed = !count_mismatch && worst <= 1e-8 && da <= 1e-8;
  r.detail = "N=" + std::to_string(cx.opt().trunc.N) + " vs " + std::to_string(hi.N) + ": " +
             std::to_string(compared) + " eigenvalues, max shift " + g(worst) + ", a1 shift " + g(da) +
             (count_mismatch ? ", count mismatch" : "");
  return r;
}

CriterionResult scaling(Context& cx) {
  CriterionResult r{9, "scaling", false, false, "", 0.0};
  const auto t0 = Clock::now();
  int compared = 0, mismatched = 0;
  for (Kind k : {Kind::TwoWindowEven, Kind::TwoWindowOdd}) {
    StripConfig sc;
    sc.d = 2.0 * kPi;
    sc.a = 2.0;
    sc.l = 12.0;
    sc.kind = k;
    const CanonicalConfig cc = canonicalize(sc);
    const auto phys = find_eigenvalues(cc, cx.opt().trunc, cx.opt().tol, cx.scan());
    const Sectors& s = cx.pair(1.0, 6.0);
    const auto& ref = k == Kind::TwoWindowEven ? s.even : s.odd;
    if (phys.size() != ref.size()) {
      ++mismatched;
      continue;
    }
    for (size_t i = 0; i < ref.size(); ++i) {
      ++compared;
      if (cc.to_physical(phys[i].lambda) != ref[i].lambda / 4.0) ++mismatched;
    }
  }
  r.seconds = seconds_since(t0);
  r.passed = mismatched == 0 && compared > 0;
  r.detail = "d=2pi a=2 l=12: " + std::to_string(compared) + " eigenvalues, " + std::to_string(mismatched) +
             " differ from d=pi a=1 l=6 divided by 4";
  return r;
}

CriterionResult counts(Context& cx) {
  CriterionResult r{10, "eigenvalue counts", false, false, "", 0.0};
  const auto t0 = Clock::now();
  Check c;
  const int n1 = static_cast<int>(cx.single(1.0).size());
  const Sectors& s = cx.pair(1.0, 8.0);
  const int m1 = static_cast<int>(s.even.size() + s.odd.size());
  c.expect(m1 == 2 * n1 && n1 == 1, "a=1: n=" + std::to_string(n1) + ", l=8 count " + std::to_string(m1));
  const CriticalWidth& cw = cx.first_critical();
  const int n = static_cast<int>(cx.single(cw.a_n).size());
  const Sectors& t = cx.pair(cw.a_n, 6.0);
  const int m = static_cast<int>(t.even.size() + t.odd.size());
  const Eigenpair* top = nearest_threshold(t.even);
  const Eigenpair* top_odd = nearest_threshold(t.odd);
  const bool extra_even = top && top->gap < 1e-6 && (!top_odd || top_odd->gap > top->gap);
  c.expect(m == 2 * n + 1 && extra_even,
           "a=a1: n=" + std::to_string(n) + ", l=6 count " + std::to_string(m) +
               (top ? ", top even gap " + g(top->gap) : std::string()));
  r.seconds = seconds_since(t0);
  r.passed = c.ok;
  r.detail = c.detail.str();
  return r;
}

template <class F>
CriterionResult guarded(int id, const std::string& name, F&& f) {
  const auto t0 = Clock::now();
  try {
    return f();
  } catch (const std::exception& e) {
    CriterionResult r{id, name, false, false, std::string("error: ") + e.what(), seconds_since(t0)};
    return r;
  }
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  Context cx(opt);
  std::vector<CriterionResult> out;
  auto want = [&](int id) {
    return opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), id) != opt.only.end();
  };
  auto push = [&](CriterionResult r) {
    if (opt.on_result) opt.on_result(r);
    out.push_back(std::move(r));
  };
  if (want(1)) push(guarded(1, "oracle equivalence", [&] { return oracle_equivalence(cx); }));
  if (want(2)) push(guarded(2, "bracketing and monotonicity", [&] { return bracketing(cx); }));
  if (want(3) || want(4)) {
    std::optional<SplitFits> f;
    std::string err;
    try {
      f = split_fits(cx);
    } catch (const std::exception& e) {
      err = std::string("error: ") + e.what();
    }
    if (want(3)) push(f ? splitting_rate(cx, *f) : CriterionResult{3, "splitting rate", false, false, err, 0.0});
    if (want(4)) push(f ? splitting_prefactor(*f) : CriterionResult{4, "splitting prefactor", false, false, err, 0.0});
  }
  if (want(5)) push(guarded(5, "window integral identity", [&] { return identity(cx); }));
  if (want(6)) push(guarded(6, "first critical width", [&] { return critical_width(cx); }));
  if (want(7)) push(guarded(7, "threshold asymptotics", [&] { return threshold_asymptotics(cx); }));
  if (want(8)) push(guarded(8, "truncation stability", [&] { return truncation_stability(cx); }));
  if (want(9)) push(guarded(9, "scaling", [&] { return scaling(cx); }));
  if (want(10)) push(guarded(10, "eigenvalue counts", [&] { return counts(cx); }));
  return out;
}

}  // namespace modeguide
