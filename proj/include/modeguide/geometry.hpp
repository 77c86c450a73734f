#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace modeguide {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

enum class Kind { SingleWindowEven, SingleWindowOdd, TwoWindowEven, TwoWindowOdd };

bool is_two_window(Kind k);
bool is_odd(Kind k);
std::string kind_name(Kind k);
Kind kind_from_name(const std::string& s);

// thrown for invalid geometry or out-of-range arguments
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct StripConfig {
  double d = kPi;
  double a = 1.0;
  std::optional<double> l;
  Kind kind = Kind::SingleWindowEven;

  void validate() const;
};

struct CanonicalConfig {
  StripConfig base;            // d == pi
  double lambda_scale = 1.0;   // lambda_phys = lambda_scale * lambda_canon

  double to_physical(double lambda_canon) const { return lambda_scale * lambda_canon; }
  double to_canonical(double lambda_phys) const { return lambda_phys / lambda_scale; }
  double a() const { return base.a; }
  double l() const { return base.l.value_or(0.0); }
  Kind kind() const { return base.kind; }
};

CanonicalConfig canonicalize(const StripConfig& cfg);
CanonicalConfig canonical(double a, Kind kind, std::optional<double> l = std::nullopt);

// A spectral value carried together with its distance to the threshold.
// Near lambda = 1 the gap is the primary variable; lambda alone loses it.
struct SpectralPoint {
  double lambda = 0.0;
  double gap = 1.0;  // 1 - lambda

  static SpectralPoint from_lambda(double lam) { return {lam, 1.0 - lam}; }
  static SpectralPoint from_gap(double g) { return {1.0 - g, g}; }
};

double outside_rate(int j, double lambda);
double outside_rate(int j, const SpectralPoint& p);
double window_rate_sq(int m, double lambda);
double window_rate_sq(int m, const SpectralPoint& p);

double stable_cosh(double t, double x);
double stable_sinhc(double t, double x);

double overlap(int j, int m);

}  // namespace modeguide
