/*
   Copyright 2026 the hsa authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <optional>
#include <vector>

namespace hsa {

/* Conjugate Lebesgue exponent: 1 <-> infinity, otherwise p/(p-1). */
double conjugate_exponent(double p);

/* Radial weight w on (0, infinity), tied to an ambient dimension d.

   PowerLaw: w(t) = t^{-(d+gamma)} with 0 < gamma < 1.
   Tabulated: positive samples interpolated by a monotone cubic on log-log
   axes.  Below the grid the left end slope extrapolates as a power law;
   beyond the grid the weight follows w ~ v_N (t / t_N)^{tail_exponent}
   when a (signed) tail exponent is given, and vanishes otherwise. */
class Weight {
  public:
    static Weight power_law(int dim, double gamma);
    static Weight tabulated(int dim, std::vector<double> grid, std::vector<double> values,
                            std::optional<double> tail_exponent = std::nullopt);

    int dim() const { return dim_; }
    bool is_power_law() const { return power_; }
    /* Decay order gamma for power-law weights; empty otherwise. */
    std::optional<double> gamma() const;
    /* Signed exponent of the large-t tail: -(d+gamma) for power laws, the
       declared tail exponent for tabulated weights, empty for compact
       support. */
    std::optional<double> tail_exponent() const;
    bool compact_support() const;

    /* Tabulated data access (empty for power-law weights). */
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    /* Log-log slope used to extend a tabulated weight below its grid. */
    double left_slope() const;

    double operator()(double t) const;

  private:
    Weight() = default;

    int dim_ = 0;
    bool power_ = false;
    double gamma_ = 0.0;
    std::vector<double> grid_, values_;
    std::vector<double> xs_, ys_, slopes_;  // log-log interpolation state
    std::optional<double> tail_exp_;
};

/* (int_a^b t^{d-1} w(t)^p dt)^{1/p}; at p = infinity the essential sup of
   t^{d-1} w(t) over (a, b).  Throws DivergentNorm when infinite. */
double weight_norm(const Weight& w, double a, double b, double p);

/* g_{w,h}(u) = u^{-(d-1)} int_u^h w(t) t^{d-1} dt on (0, h]. */
double g_eval(const Weight& w, double h, double u);

/* ||g_{w,h}||_{L_{p'}(0,h)} with the t^{d-1}-weighted norm family;
   endpoint-graded quadrature, DivergentNorm when infinite. */
double g_norm(const Weight& w, double h, double p_dual);

/* int_h^infty w(rho) rho^{d-1} d rho; DivergentNorm when the tail is not
   integrable. */
double tail_integral(const Weight& w, double h);

/* Class membership diagnostics: in_W certifies the finite dual-norm of the
   g-function (for power laws the analytic criterion p' < d/(d-1+gamma)),
   in_L1_tail the integrable tail.  Values are present when finite. */
struct ClassReport {
    bool in_W = false;
    bool in_L1_tail = false;
    std::optional<double> g_norm_value;
    std::optional<double> tail_value;
};
ClassReport class_check(const Weight& w, double h, double p_dual);

/* Convenience view of g_{w,h} as a callable. */
class GFunction {
  public:
    GFunction(Weight w, double h);
    double operator()(double u) const { return g_eval(w_, h_, u); }
    double horizon() const { return h_; }
    const Weight& weight() const { return w_; }

  private:
    Weight w_;
    double h_;
};

}  // namespace hsa
