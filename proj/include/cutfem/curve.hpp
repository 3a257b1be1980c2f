#pragma once

#include "cutfem/expression.hpp"
#include "cutfem/geom.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cutfem {

// A C^2 parametric interface with a side classifier. Side 1 is Omega_1
// (conventionally the bounded side), side 2 is Omega_2. The level function is
// continuous, positive exactly on side 1, and is what the edge root-finder
// brackets.
class interface_curve {
  public:
    virtual ~interface_curve() = default;

    virtual vec2 eval(double t) const = 0;
    virtual vec2 deriv(double t) const = 0;
    virtual double level(const vec2& p) const = 0;
    virtual bool closed() const = 0;
    virtual double t_min() const = 0;
    virtual double t_max() const = 0;
    // parameter of a point assumed to lie on the curve
    virtual double param_at(const vec2& p) const = 0;
    // bounding box of the curve (conservative)
    virtual rect bbox() const = 0;

    int side(const vec2& p) const { return level(p) > 0.0 ? 1 : 2; }
    double period() const { return t_max() - t_min(); }
    // unit tangent, and unit normal pointing out of Omega_1
    vec2 tangent(double t) const { return normalized(deriv(t)); }
    vec2 normal_out1(double t) const;

    virtual std::optional<double> curvature_bound() const { return std::nullopt; }
};

using curve_ptr = std::shared_ptr<const interface_curve>;

// Interface geometry for a whole problem: one or more disjoint components.
struct interface_set {
    std::vector<curve_ptr> components;

    int side(const vec2& p) const {
        for (const auto& c : components)
            if (c->side(p) == 1) return 1;
        return components.empty() ? 2 : 2;
    }
    bool empty() const { return components.empty(); }
};

// ---- concrete curves ----

// Straight line through p0 with unit direction d; side 1 is the left of d.
class line_curve final : public interface_curve {
  public:
    line_curve(vec2 p0, vec2 dir, double t_extent = 1e6);
    vec2 eval(double t) const override { return p0_ + t * d_; }
    vec2 deriv(double) const override { return d_; }
    double level(const vec2& p) const override { return cross(d_, p - p0_); }
    bool closed() const override { return false; }
    double t_min() const override { return -ext_; }
    double t_max() const override { return ext_; }
    double param_at(const vec2& p) const override { return dot(p - p0_, d_); }
    rect bbox() const override;

  private:
    vec2 p0_, d_;
    double ext_;
};

class circle_curve final : public interface_curve {
  public:
    circle_curve(vec2 center, double radius) : c_(center), r_(radius) {}
    vec2 eval(double t) const override { return c_ + vec2{r_ * std::cos(t), r_ * std::sin(t)}; }
    vec2 deriv(double t) const override { return {-r_ * std::sin(t), r_ * std::cos(t)}; }
    double level(const vec2& p) const override { return r_ - dist(p, c_); }
    bool closed() const override { return true; }
    double t_min() const override { return 0.0; }
    double t_max() const override { return 2.0 * M_PI; }
    double param_at(const vec2& p) const override {
        double a = std::atan2(p.y - c_.y, p.x - c_.x);
        return a < 0 ? a + 2.0 * M_PI : a;
    }
    rect bbox() const override { return {c_.x - r_, c_.y - r_, c_.x + r_, c_.y + r_}; }
    std::optional<double> curvature_bound() const override { return 1.0 / r_; }

  private:
    vec2 c_;
    double r_;
};

// r = R(theta) around a center, R > 0 and 2*pi periodic. Side 1 is r < R.
class polar_curve final : public interface_curve {
  public:
    polar_curve(vec2 center, std::function<double(double)> R, std::function<double(double)> dR);
    vec2 eval(double t) const override;
    vec2 deriv(double t) const override;
    double level(const vec2& p) const override;
    bool closed() const override { return true; }
    double t_min() const override { return 0.0; }
    double t_max() const override { return 2.0 * M_PI; }
    double param_at(const vec2& p) const override {
        double a = std::atan2(p.y - c_.y, p.x - c_.x);
        return a < 0 ? a + 2.0 * M_PI : a;
    }
    rect bbox() const override;

  private:
    vec2 c_;
    std::function<double(double)> R_, dR_;
};

// Cubic-perturbed chord across the corner (-2,-2) of K = (-2,2)^2:
// chord from E = (-2, -2 + sqrt(2) L) to F = (-2 + sqrt(2) L, -2) with
// L = 1/(mu^2+1), perturbed along the inward chord normal by
// w(u) = 100 (u^3 - L^2 u), u in [-L, L]. The interface deviation of the cut
// it produces in K is exactly 200 L^2 / (3 sqrt(3)) = 200/(3 sqrt(3) (mu^2+1)^2).
// Side 1 is the corner side (the triangle in the reference configuration).
class cubic_chord_curve final : public interface_curve {
  public:
    explicit cubic_chord_curve(double mu);
    vec2 eval(double u) const override;
    vec2 deriv(double u) const override;
    double level(const vec2& p) const override;
    bool closed() const override { return false; }
    double t_min() const override { return -L_; }
    double t_max() const override { return L_; }
    double param_at(const vec2& p) const override { return dot(p - m0_, that_); }
    rect bbox() const override;

    double half_window() const { return L_; }
    double exact_deviation() const { return 200.0 * L_ * L_ * L_ / (3.0 * std::sqrt(3.0)); }
    double exact_eta() const { return exact_deviation() / L_; }
    // mu that realizes a target interface deviation eta
    static double mu_for_eta(double eta);

  private:
    double mu_, L_;
    vec2 m0_, that_, nhat_;
    double w(double u) const { return 100.0 * (u * u * u - L_ * L_ * u); }
    double dw(double u) const { return 100.0 * (3.0 * u * u - L_ * L_); }
    double w_extended(double u) const;
};

// Piecewise-linear closed or open curve (test fixtures, corner-free configs).
class polyline_curve final : public interface_curve {
  public:
    polyline_curve(std::vector<vec2> pts, bool closed);
    vec2 eval(double t) const override;
    vec2 deriv(double t) const override;
    double level(const vec2& p) const override;
    bool closed() const override { return closed_; }
    double t_min() const override { return 0.0; }
    double t_max() const override { return total_; }
    double param_at(const vec2& p) const override;
    rect bbox() const override;

  private:
    std::vector<vec2> pts_;
    std::vector<double> acc_;
    bool closed_;
    double total_ = 0.0;
    int segment_count() const { return int(pts_.size()) - (closed_ ? 0 : 1); }
    vec2 seg_a(int k) const { return pts_[k]; }
    vec2 seg_b(int k) const { return pts_[(k + 1) % pts_.size()]; }
};

// Generic parametric curve from expressions x(t), y(t) on [t0,t1]. The side
// classifier is local: sign against the nearest curve point, with tangent-ray
// extension past open ends.
class parametric_curve final : public interface_curve {
  public:
    parametric_curve(expression x, expression y, double t0, double t1, bool closed);
    vec2 eval(double t) const override;
    vec2 deriv(double t) const override;
    double level(const vec2& p) const override;
    bool closed() const override { return closed_; }
    double t_min() const override { return t0_; }
    double t_max() const override { return t1_; }
    double param_at(const vec2& p) const override { return nearest_param(p); }
    rect bbox() const override { return bbox_; }

  private:
    expression x_, y_, dx_, dy_;
    double t0_, t1_;
    bool closed_;
    std::vector<vec2> samples_;
    std::vector<double> sample_t_;
    rect bbox_;
    double nearest_param(const vec2& p) const;
};

// ---- curve configuration ----
// Text forms accepted by parse_curve (one per line in problem configs):
//   line{px,py,dx,dy}
//   circle{cx,cy,r}
//   polar{expression}               (R(theta) about the origin)
//   polar{cx,cy,expression}
//   parametric{x(t);y(t);t0;t1}
//   preset:example1         cubic-perturbed chord, mu = 3.8
//   preset:example1:mu=<v>
//   preset:example2         circle radius 1.1 at the origin
//   preset:example3         five-petal polar curve r = 2/9 (3 + 4^sin(5 theta))
curve_ptr parse_curve(const std::string& spec);

curve_ptr make_example1_curve(double mu = 3.8);
curve_ptr make_example2_curve();
curve_ptr make_example3_curve();

// Smooth random closed star-shaped perturbation of a circle/ellipse
// (Fourier modes in the polar radius), for randomized reliability tests.
curve_ptr make_random_smooth_curve(unsigned seed, vec2 center = {0, 0}, double r0 = 1.1);

} // namespace cutfem
