#include "cutfem/curve.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace cutfem {

vec2 interface_curve::normal_out1(double t) const {
    vec2 n = rot90(tangent(t));
    // orient away from side 1
    vec2 p = eval(t);
    double h = 1e-6 * std::max(1.0, norm(p));
    if (level(p + h * n) > 0.0) n = vec2{-n.x, -n.y};
    return n;
}

// ---- line ----

line_curve::line_curve(vec2 p0, vec2 dir, double t_extent) : p0_(p0), d_(normalized(dir)), ext_(t_extent) {}

rect line_curve::bbox() const {
    vec2 a = eval(-ext_), b = eval(ext_);
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
}

// ---- polar ----

polar_curve::polar_curve(vec2 center, std::function<double(double)> R, std::function<double(double)> dR)
    : c_(center), R_(std::move(R)), dR_(std::move(dR)) {}

vec2 polar_curve::eval(double t) const {
    double r = R_(t);
    return c_ + vec2{r * std::cos(t), r * std::sin(t)};
}

vec2 polar_curve::deriv(double t) const {
    double r = R_(t), dr = dR_(t);
    return {dr * std::cos(t) - r * std::sin(t), dr * std::sin(t) + r * std::cos(t)};
}

double polar_curve::level(const vec2& p) const {
    vec2 q = p - c_;
    double r = norm(q);
    double th = std::atan2(q.y, q.x);
    if (th < 0) th += 2.0 * M_PI;
    return R_(th) - r;
}

rect polar_curve::bbox() const {
    double rmax = 0.0;
    for (int k = 0; k < 1024; ++k) rmax = std::max(rmax, R_(2.0 * M_PI * k / 1024.0));
    return {c_.x - rmax, c_.y - rmax, c_.x + rmax, c_.y + rmax};
}

// ---- cubic-perturbed chord ----

cubic_chord_curve::cubic_chord_curve(double mu) : mu_(mu) {
    L_ = 1.0 / (mu * mu + 1.0);
    double s2L = std::sqrt(2.0) * L_;
    vec2 E{-2.0, -2.0 + s2L};
    vec2 F{-2.0 + s2L, -2.0};
    m0_ = 0.5 * (E + F);
    that_ = normalized(F - E);           // (1,-1)/sqrt(2)
    nhat_ = rot90(that_);                // (1,1)/sqrt(2), points into the square
}

double cubic_chord_curve::w_extended(double u) const {
    if (u < -L_) return dw(-L_) * (u + L_);
    if (u > L_) return dw(L_) * (u - L_);
    return w(u);
}

vec2 cubic_chord_curve::eval(double u) const { return m0_ + u * that_ + w(u) * nhat_; }

vec2 cubic_chord_curve::deriv(double u) const { return that_ + dw(u) * nhat_; }

double cubic_chord_curve::level(const vec2& p) const {
    double u = dot(p - m0_, that_);
    double wp = dot(p - m0_, nhat_);
    // side 1 = corner side (below the extended graph)
    return w_extended(u) - wp;
}

rect cubic_chord_curve::bbox() const {
    double lo = -2.0 - 1e-9, pad = std::sqrt(2.0) * L_ + exact_deviation() + 1e-9;
    return {lo, lo, -2.0 + 2.0 * pad, -2.0 + 2.0 * pad};
}

double cubic_chord_curve::mu_for_eta(double eta) {
    // eta = 200 L^2 / (3 sqrt(3)) with L = 1/(mu^2+1)
    double L = std::sqrt(eta * 3.0 * std::sqrt(3.0) / 200.0);
    return std::sqrt(1.0 / L - 1.0);
}

// ---- polyline ----

polyline_curve::polyline_curve(std::vector<vec2> pts, bool closed) : pts_(std::move(pts)), closed_(closed) {
    if (pts_.size() < 2) throw std::invalid_argument("polyline needs at least 2 points");
    acc_.push_back(0.0);
    for (int k = 0; k < segment_count(); ++k) {
        total_ += dist(seg_a(k), seg_b(k));
        acc_.push_back(total_);
    }
}

vec2 polyline_curve::eval(double t) const {
    if (closed_) t = std::fmod(std::fmod(t, total_) + total_, total_);
    t = std::clamp(t, 0.0, total_);
    auto it = std::upper_bound(acc_.begin(), acc_.end(), t);
    int k = std::clamp(int(it - acc_.begin()) - 1, 0, segment_count() - 1);
    double s = (t - acc_[k]) / (acc_[k + 1] - acc_[k]);
    return seg_a(k) + s * (seg_b(k) - seg_a(k));
}

vec2 polyline_curve::deriv(double t) const {
    if (closed_) t = std::fmod(std::fmod(t, total_) + total_, total_);
    t = std::clamp(t, 0.0, total_);
    auto it = std::upper_bound(acc_.begin(), acc_.end(), t);
    int k = std::clamp(int(it - acc_.begin()) - 1, 0, segment_count() - 1);
    return normalized(seg_b(k) - seg_a(k));
}

double polyline_curve::level(const vec2& p) const {
    if (closed_) {
        // even-odd winding; magnitude = distance to the polyline
        bool inside = false;
        double dmin = 1e300;
        size_t n = pts_.size();
        for (size_t i = 0, j = n - 1; i < n; j = i++) {
            const vec2& a = pts_[i];
            const vec2& b = pts_[j];
            if ((a.y > p.y) != (b.y > p.y)) {
                double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if (p.x < xint) inside = !inside;
            }
            dmin = std::min(dmin, dist_point_segment(p, a, b));
        }
        return inside ? dmin : -dmin;
    }
    // open polyline: sign against the nearest segment
    double dmin = 1e300;
    double sign = 1.0;
    for (int k = 0; k < segment_count(); ++k) {
        double d = dist_point_segment(p, seg_a(k), seg_b(k));
        if (d < dmin) {
            dmin = d;
            sign = cross(seg_b(k) - seg_a(k), p - seg_a(k)) >= 0 ? 1.0 : -1.0;
        }
    }
    return sign * dmin;
}

double polyline_curve::param_at(const vec2& p) const {
    double dmin = 1e300, best = 0.0;
    for (int k = 0; k < segment_count(); ++k) {
        vec2 a = seg_a(k), b = seg_b(k);
        double L2 = dot(b - a, b - a);
        double s = std::clamp(dot(p - a, b - a) / L2, 0.0, 1.0);
        double d = dist(p, a + s * (b - a));
        if (d < dmin) {
            dmin = d;
            best = acc_[k] + s * (acc_[k + 1] - acc_[k]);
        }
    }
    return best;
}

rect polyline_curve::bbox() const {
    rect r{1e300, 1e300, -1e300, -1e300};
    for (const vec2& p : pts_) {
        r.x0 = std::min(r.x0, p.x);
        r.y0 = std::min(r.y0, p.y);
        r.x1 = std::max(r.x1, p.x);
        r.y1 = std::max(r.y1, p.y);
    }
    return r;
}

// ---- generic parametric ----

parametric_curve::parametric_curve(expression x, expression y, double t0, double t1, bool closed)
    : x_(std::move(x)), y_(std::move(y)), t0_(t0), t1_(t1), closed_(closed) {
    dx_ = x_.derivative();
    dy_ = y_.derivative();
    const int N = 4096;
    bbox_ = {1e300, 1e300, -1e300, -1e300};
    for (int k = 0; k <= N; ++k) {
        double t = t0_ + (t1_ - t0_) * k / N;
        vec2 p{x_.eval(t), y_.eval(t)};
        samples_.push_back(p);
        sample_t_.push_back(t);
        bbox_.x0 = std::min(bbox_.x0, p.x);
        bbox_.y0 = std::min(bbox_.y0, p.y);
        bbox_.x1 = std::max(bbox_.x1, p.x);
        bbox_.y1 = std::max(bbox_.y1, p.y);
    }
}

vec2 parametric_curve::eval(double t) const { return {x_.eval(t), y_.eval(t)}; }

vec2 parametric_curve::deriv(double t) const { return {dx_.eval(t), dy_.eval(t)}; }

double parametric_curve::nearest_param(const vec2& p) const {
    size_t best = 0;
    double dmin = 1e300;
    for (size_t k = 0; k < samples_.size(); ++k) {
        double d = dist(samples_[k], p);
        if (d < dmin) {
            dmin = d;
            best = k;
        }
    }
    double t = sample_t_[best];
    for (int it = 0; it < 60; ++it) {
        vec2 g = eval(t), dg = deriv(t);
        double h = 1e-6 * std::max(1.0, std::abs(t));
        vec2 d2g = (deriv(t + h) - deriv(t - h)) / (2.0 * h);
        double f1 = dot(g - p, dg);
        double f2 = dot(dg, dg) + dot(g - p, d2g);
        if (std::abs(f2) < 1e-300) break;
        double step = f1 / f2;
        t -= step;
        if (closed_) {
            double T = t1_ - t0_;
            t = t0_ + std::fmod(std::fmod(t - t0_, T) + T, T);
        } else {
            t = std::clamp(t, t0_, t1_);
        }
        if (std::abs(step) < 1e-15) break;
    }
    return t;
}

double parametric_curve::level(const vec2& p) const {
    double t = nearest_param(p);
    vec2 g = eval(t), tg = normalized(deriv(t));
    if (!closed_) {
        // tangent-ray extension past the ends
        if (t <= t0_ + 1e-14) {
            double s = dot(p - g, tg);
            if (s < 0) return cross(tg, p - (g + s * tg));
        } else if (t >= t1_ - 1e-14) {
            double s = dot(p - g, tg);
            if (s > 0) return cross(tg, p - (g + s * tg));
        }
    }
    return cross(tg, p - g);
}

// ---- presets and parsing ----

curve_ptr make_example1_curve(double mu) { return std::make_shared<cubic_chord_curve>(mu); }

curve_ptr make_example2_curve() { return std::make_shared<circle_curve>(vec2{0, 0}, 1.1); }

curve_ptr make_example3_curve() {
    auto R = [](double th) { return (2.0 / 9.0) * (3.0 + std::pow(4.0, std::sin(5.0 * th))); };
    auto dR = [](double th) {
        return (2.0 / 9.0) * std::pow(4.0, std::sin(5.0 * th)) * std::log(4.0) * 5.0 * std::cos(5.0 * th);
    };
    return std::make_shared<polar_curve>(vec2{0, 0}, R, dR);
}

curve_ptr make_random_smooth_curve(unsigned seed, vec2 center, double r0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // ellipse aspect plus a few low Fourier modes, kept small so the curve
    // stays C^2-tame and well inside (-2,2)^2
    double aspect = 0.75 + 0.5 * unif(rng);
    int nmodes = 2 + int(unif(rng) * 3);
    std::vector<double> amp(nmodes + 1, 0.0), phase(nmodes + 1, 0.0);
    for (int k = 2; k <= nmodes; ++k) {
        amp[k] = 0.08 * unif(rng) / k;
        phase[k] = 2.0 * M_PI * unif(rng);
    }
    double base = r0 * (0.75 + 0.4 * unif(rng));
    auto R = [=](double th) {
        double e = base / std::sqrt(std::pow(std::cos(th), 2) + std::pow(std::sin(th) / aspect, 2));
        double f = 1.0;
        for (int k = 2; k <= nmodes; ++k) f += amp[k] * std::cos(k * th + phase[k]);
        return e * f;
    };
    auto dR = [=](double th) {
        double c = std::cos(th), s = std::sin(th);
        double q = c * c + s * s / (aspect * aspect);
        double e = base / std::sqrt(q);
        double dq = -2.0 * c * s + 2.0 * s * c / (aspect * aspect);
        double de = -0.5 * base * dq / std::pow(q, 1.5);
        double f = 1.0, df = 0.0;
        for (int k = 2; k <= nmodes; ++k) {
            f += amp[k] * std::cos(k * th + phase[k]);
            df -= amp[k] * k * std::sin(k * th + phase[k]);
        }
        return de * f + e * df;
    };
    return std::make_shared<polar_curve>(center, R, dR);
}

namespace {

std::vector<std::string> split_args(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

curve_ptr parse_curve(const std::string& spec_in) {
    std::string spec = spec_in;
    // trim
    auto issp = [](char c) { return std::isspace((unsigned char)c); };
    while (!spec.empty() && issp(spec.front())) spec.erase(spec.begin());
    while (!spec.empty() && issp(spec.back())) spec.pop_back();

    if (spec.rfind("preset:", 0) == 0) {
        std::string rest = spec.substr(7);
        auto parts = split_args(rest, ':');
        const std::string& name = parts[0];
        if (name == "example1") {
            double mu = 3.8;
            for (size_t i = 1; i < parts.size(); ++i)
                if (parts[i].rfind("mu=", 0) == 0) mu = std::stod(parts[i].substr(3));
            return make_example1_curve(mu);
        }
        if (name == "example2") return make_example2_curve();
        if (name == "example3") return make_example3_curve();
        throw std::invalid_argument("unknown curve preset '" + name + "'");
    }
    auto brace = spec.find('{');
    if (brace == std::string::npos || spec.back() != '}')
        throw std::invalid_argument("malformed curve spec '" + spec + "'");
    std::string kind = spec.substr(0, brace);
    std::string body = spec.substr(brace + 1, spec.size() - brace - 2);
    if (kind == "line") {
        auto a = split_args(body, ',');
        if (a.size() != 4) throw std::invalid_argument("line{px,py,dx,dy}");
        return std::make_shared<line_curve>(vec2{std::stod(a[0]), std::stod(a[1])},
                                            vec2{std::stod(a[2]), std::stod(a[3])});
    }
    if (kind == "circle") {
        auto a = split_args(body, ',');
        if (a.size() != 3) throw std::invalid_argument("circle{cx,cy,r}");
        return std::make_shared<circle_curve>(vec2{std::stod(a[0]), std::stod(a[1])}, std::stod(a[2]));
    }
    if (kind == "polar") {
        auto a = split_args(body, ',');
        vec2 c{0, 0};
        std::string expr_text;
        if (a.size() == 1) {
            expr_text = a[0];
        } else if (a.size() == 3) {
            c = {std::stod(a[0]), std::stod(a[1])};
            expr_text = a[2];
        } else {
            throw std::invalid_argument("polar{expr} or polar{cx,cy,expr}");
        }
        auto R = std::make_shared<expression>(expr_text);
        auto dR = std::make_shared<expression>(R->derivative());
        return std::make_shared<polar_curve>(
            c, [R](double th) { return R->eval(th); }, [dR](double th) { return dR->eval(th); });
    }
    if (kind == "parametric") {
        auto a = split_args(body, ';');
        if (a.size() != 4 && a.size() != 5) throw std::invalid_argument("parametric{x(t);y(t);t0;t1[;closed]}");
        bool closed = a.size() == 5 && a[4] == "closed";
        return std::make_shared<parametric_curve>(expression(a[0]), expression(a[1]), std::stod(a[2]),
                                                  std::stod(a[3]), closed);
    }
    throw std::invalid_argument("unknown curve kind '" + kind + "'");
}

} // namespace cutfem
