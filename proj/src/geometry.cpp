#include "modeguide/geometry.hpp"

#include <sstream>

namespace modeguide {

bool is_two_window(Kind k) { return k == Kind::TwoWindowEven || k == Kind::TwoWindowOdd; }

bool is_odd(Kind k) { return k == Kind::SingleWindowOdd || k == Kind::TwoWindowOdd; }

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::SingleWindowEven: return "single_even";
    case Kind::SingleWindowOdd: return "single_odd";
    case Kind::TwoWindowEven: return "two_even";
    case Kind::TwoWindowOdd: return "two_odd";
  }
  return "unknown";
}

Kind kind_from_name(const std::string& s) {
  if (s == "single_even") return Kind::SingleWindowEven;
  if (s == "single_odd") return Kind::SingleWindowOdd;
  if (s == "two_even") return Kind::TwoWindowEven;
  if (s == "two_odd") return Kind::TwoWindowOdd;
  throw std::invalid_argument("unknown kind: " + s);
}

void StripConfig::validate() const {
  if (!(d > 0.0) || !std::isfinite(d)) throw GeometryError("constraint violated: d > 0");
  if (!(a > 0.0) || !std::isfinite(a)) throw GeometryError("constraint violated: a > 0");
  if (is_two_window(kind)) {
    if (!l) throw GeometryError("constraint violated: two-window geometry requires l");
    if (!(*l > a) || !std::isfinite(*l)) {
      std::ostringstream os;
      os << "constraint violated: l > a (l=" << *l << ", a=" << a << ")";
      throw GeometryError(os.str());
    }
  }
}

CanonicalConfig canonicalize(const StripConfig& cfg) {
  cfg.validate();
  CanonicalConfig out;
  const double s = kPi / cfg.d;
  out.base = cfg;
  out.base.d = kPi;
  out.base.a = s * cfg.a;
  if (cfg.l) out.base.l = s * *cfg.l;
  out.lambda_scale = s * s;
  return out;
}

CanonicalConfig canonical(double a, Kind kind, std::optional<double> l) {
  StripConfig c;
  c.a = a;
  c.kind = kind;
  c.l = l;
  return canonicalize(c);
}

double outside_rate(int j, double lambda) {
  const double j2 = double(j) * j;
  if (!(j2 > lambda)) throw GeometryError("outside_rate: mode not evanescent (j^2 <= lambda)");
  return std::sqrt(j2 - lambda);
}

double outside_rate(int j, const SpectralPoint& p) {
  // (j^2 - 1) + gap keeps full relative accuracy of tiny gaps
  const double v = (double(j) * j - 1.0) + p.gap;
  if (!(v > 0.0)) {
    if (j == 1 && v == 0.0) return 0.0;
    throw GeometryError("outside_rate: mode not evanescent (j^2 <= lambda)");
  }
  return std::sqrt(v);
}

double window_rate_sq(int m, double lambda) {
  const double p = m - 0.5;
  return p * p - lambda;
}

double window_rate_sq(int m, const SpectralPoint& pt) {
  const double p = m - 0.5;
  return (p * p - 1.0) + pt.gap;
}

namespace {

// cosh(sqrt(t) x) and sinh(sqrt(t) x)/sqrt(t) as power series in u = t x^2
double cosh_series(double u) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    term *= u / ((2.0 * k - 1.0) * (2.0 * k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double sinhc_series(double u) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    term *= u / ((2.0 * k) * (2.0 * k + 1.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double stable_cosh(double t, double x) {
  const double u = t * x * x;
  if (std::abs(u) < 1e-2) return cosh_series(u);
  if (t > 0) return std::cosh(std::sqrt(t) * x);
  return std::cos(std::sqrt(-t) * x);
}

double stable_sinhc(double t, double x) {
  const double u = t * x * x;
  if (std::abs(u) < 1e-2) return x * sinhc_series(u);
  if (t > 0) {
    const double r = std::sqrt(t);
    return std::sinh(r * x) / r;
  }
  const double w = std::sqrt(-t);
  return std::sin(w * x) / w;
}

double overlap(int j, int m) {
  const double p = m - 0.5;
  return (2.0 / kPi) * j / (double(j) * j - p * p);
}

}  // namespace modeguide
