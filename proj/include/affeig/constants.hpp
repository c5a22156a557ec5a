#pragma once

#include <map>
#include <optional>
#include <string>

namespace affeig::constants {

double gamma(double x);
double unit_ball_volume(double k);

// Normalizing factor of the affine energy.
double c_np(int n, double p);

// Sharp one-dimensional Poincare constant for functions vanishing off an interval of unit width.
double talenti_constant(double p);

// (1/(n w_n)) * integral over the sphere of |<e1, xi>|^p.
double sphere_moment(int n, double p);

struct ReverseZhang {
  double absolute;
  double domain_dependent;
};
ReverseZhang reverse_zhang_constants(int n, double p, double max_width);

// Constant of the Huang-Li comparison between the affine energy and min over SL_n of the gradient norm.
double huang_li_constant(int n, double p);

struct CentroidNormalizers {
  double b;
  double r;
};
CentroidNormalizers centroid_normalizers(int n, double p);

double bessel_j(double order, double x);
double bessel_zero(double order, int index);

using ConstantTable = std::map<std::string, double>;
ConstantTable constant_table(int n, double p, std::optional<double> max_width = std::nullopt);

}  // namespace affeig::constants
