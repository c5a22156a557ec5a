#include "affeig/constants.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "affeig/errors.hpp"

namespace affeig::constants {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos coefficients for g = 7, n = 9.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos(double x) {
  if (x < 0.5) return kPi / (std::sin(kPi * x) * lanczos(1.0 - x));
  x -= 1.0;
  double sum = kLanczos[0];
  for (int i = 1; i < 9; ++i) sum += kLanczos[i] / (x + i);
  const double t = x + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * sum;
}

// Unit ball volume extended to k > -2, needed for w_{p-1} at p < 1.
double omega(double k) {
  if (k == 0.0) return 1.0;
  if (k == 1.0) return 2.0;
  if (k == 2.0) return kPi;
  return std::pow(kPi, 0.5 * k) / gamma(0.5 * k + 1.0);
}

void require_np(int n, double p, double pmin = 1.0) {
  if (n < 2) throw InvalidArgument("dimension n must be >= 2");
  if (!(p >= pmin)) throw InvalidArgument("exponent p must be >= " + std::to_string(pmin));
}

}  // namespace

double gamma(double x) {
  if (!(x > 0.0)) throw InvalidArgument("gamma: argument must be positive");
  // Integers and half-integers are exact through the product form.
  if (x <= 30.0 && std::floor(2.0 * x) == 2.0 * x) {
    double v = (std::floor(x) == x) ? 1.0 : std::sqrt(kPi);
    for (double t = (std::floor(x) == x) ? 1.0 : 0.5; t < x - 0.25; t += 1.0) v *= t;
    return v;
  }
  if (x > 140.0) return std::exp(std::lgamma(x));
  return lanczos(x);
}

double unit_ball_volume(double k) {
  if (!(k >= 0.0)) throw InvalidArgument("unit_ball_volume: k must be >= 0");
  return omega(k);
}

double c_np(int n, double p) {
  require_np(n, p);
  const double wn = omega(n);
  return std::pow(n * wn, 1.0 / n) *
         std::pow(n * wn * omega(p - 1.0) / (2.0 * omega(n + p - 2.0)), 1.0 / p);
}

double talenti_constant(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("talenti_constant: p must be >= 1");
  if (p == 1.0) return 2.0;
  return (2.0 / p) * std::pow(p - 1.0, 1.0 / p - 1.0) * (kPi - kPi / p) / std::sin(kPi / p);
}

double sphere_moment(int n, double p) {
  require_np(n, p, 0.0);
  return 2.0 * omega(n + p - 2.0) / (n * omega(n) * omega(p - 1.0));
}

ReverseZhang reverse_zhang_constants(int n, double p, double max_width) {
  require_np(n, p);
  if (!(max_width > 0.0)) throw InvalidArgument("reverse_zhang_constants: max_width must be positive");
  const double wn = omega(n);
  const double inner = (2.0 / n) * (omega(n - 1.0) / (wn * wn)) *
                       std::pow(talenti_constant(p), n - 1.0) * std::pow(sphere_moment(n, p), 1.0 / p);
  const double absolute = c_np(n, p) * std::pow(inner, 1.0 / n);
  return {absolute, absolute * std::pow(max_width, -(n - 1.0) / n)};
}

double huang_li_constant(int n, double p) {
  require_np(n, p);
  const double num = std::pow(kPi, 0.5 / p + 0.5) * std::pow(gamma(0.5 * (n + p)), 1.0 / p) *
                     std::pow(gamma(1.0 + n / p), 1.0 / n);
  const double den = std::pow(2.0, 1.0 / p + 1.0) * std::pow(gamma(1.0 + 0.5 * n), 1.0 / n + 1.0 / p) *
                     std::pow(gamma(0.5 * (p + 1.0)), 1.0 / p) * gamma(1.0 + 1.0 / p);
  return num / den;
}

CentroidNormalizers centroid_normalizers(int n, double p) {
  require_np(n, p);
  const double b = omega(n + p) / (omega(2) * omega(n) * omega(p - 1.0));
  const double r = n * omega(n + p - 2.0) / (omega(2) * omega(n - 2.0) * omega(p - 1.0));
  return {b, r};
}

double bessel_j(double order, double x) {
  if (!(order >= 0.0)) throw InvalidArgument("bessel_j: order must be >= 0");
  // Maclaurin series; cancellation limits it to moderate x.
  const long double half = 0.5L * x;
  long double term = std::pow(half, static_cast<long double>(order)) / gamma(order + 1.0);
  long double sum = term;
  const long double q = -half * half;
  for (int m = 1; m < 300; ++m) {
    term *= q / (m * (m + order));
    sum += term;
    if (std::abs(term) < 1e-20L * std::abs(sum) && m > x) break;
  }
  return static_cast<double>(sum);
}

double bessel_zero(double order, int index) {
  if (!(order >= 0.0)) throw InvalidArgument("bessel_zero: order must be >= 0");
  if (index < 1) throw InvalidArgument("bessel_zero: index must be >= 1");
  const double step = 0.05;
  double a = order + step;
  double fa = bessel_j(order, a);
  int found = 0;
  for (double b = a + step; b < 30.0; b += step) {
    const double fb = bessel_j(order, b);
    if ((fa < 0.0) != (fb < 0.0)) {
      if (++found == index) {
        double lo = a, hi = b, flo = fa;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = bessel_j(order, mid);
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      }
    }
    a = b;
    fa = fb;
  }
  throw InvalidArgument("bessel_zero: index beyond series range");
}

ConstantTable constant_table(int n, double p, std::optional<double> max_width) {
  require_np(n, p);
  ConstantTable t;
  t["omega_n"] = omega(n);
  t["omega_p_minus_1"] = omega(p - 1.0);
  t["c_np"] = c_np(n, p);
  t["talenti_C"] = talenti_constant(p);
  t["sphere_moment_a"] = sphere_moment(n, p);
  const auto rz = reverse_zhang_constants(n, p, max_width.value_or(1.0));
  t["reverse_zhang_absolute"] = rz.absolute;
  if (max_width) t["reverse_zhang_domain"] = rz.domain_dependent;
  t["huang_li_alpha"] = huang_li_constant(n, p);
  const auto cn = centroid_normalizers(n, p);
  t["centroid_b"] = cn.b;
  t["centroid_r"] = cn.r;
  return t;
}

}  // namespace affeig::constants
