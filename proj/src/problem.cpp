#include "cutfem/problem.hpp"

namespace cutfem {

interface_problem make_example2_problem() {
    interface_problem pb;
    pb.domain = {rect{-2, -2, 2, 2}};
    pb.interface.components = {make_example2_curve()};
    pb.a1 = 10.0;
    pb.a2 = 1.0;
    const double r0 = 1.1;
    const double r02 = r0 * r0;

    // u1 = exp(rho - r0^2) + 10 r0^2 - 1 + w,  u2 = 10 rho + w,
    // w = (rho - r0^2)^2 sin(2 pi x) sin(2 pi y),  rho = x^2 + y^2.
    auto w_parts = [=](const vec2& p, double& w, vec2& gw, double& lw) {
        double rho = p.x * p.x + p.y * p.y;
        double q = rho - r02;
        double sx = std::sin(2 * M_PI * p.x), sy = std::sin(2 * M_PI * p.y);
        double cx = std::cos(2 * M_PI * p.x), cy = std::cos(2 * M_PI * p.y);
        double S = sx * sy;
        w = q * q * S;
        gw.x = 4.0 * p.x * q * S + q * q * 2 * M_PI * cx * sy;
        gw.y = 4.0 * p.y * q * S + q * q * 2 * M_PI * sx * cy;
        lw = (8.0 * q + 8.0 * rho) * S + 16.0 * M_PI * q * (p.x * cx * sy + p.y * sx * cy) -
             8.0 * M_PI * M_PI * q * q * S;
    };

    pb.has_exact = true;
    pb.exact = [=](const vec2& p, int side) {
        double rho = p.x * p.x + p.y * p.y;
        double w, lw;
        vec2 gw;
        w_parts(p, w, gw, lw);
        if (side == 1) return std::exp(rho - r02) + 10.0 * r02 - 1.0 + w;
        return 10.0 * rho + w;
    };
    pb.exact_grad = [=](const vec2& p, int side) {
        double rho = p.x * p.x + p.y * p.y;
        double w, lw;
        vec2 gw;
        w_parts(p, w, gw, lw);
        if (side == 1) {
            double e = std::exp(rho - r02);
            return vec2{2.0 * p.x * e + gw.x, 2.0 * p.y * e + gw.y};
        }
        return vec2{20.0 * p.x + gw.x, 20.0 * p.y + gw.y};
    };
    pb.f = [=](const vec2& p, int side) {
        double rho = p.x * p.x + p.y * p.y;
        double w, lw;
        vec2 gw;
        w_parts(p, w, gw, lw);
        if (side == 1) {
            double lap = (4.0 + 4.0 * rho) * std::exp(rho - r02) + lw;
            return -10.0 * lap;
        }
        return -(40.0 + lw);
    };
    pb.g = [pb_exact = pb.exact](const vec2& p) { return pb_exact(p, 2); };
    return pb;
}

interface_problem make_example3_problem() {
    interface_problem pb;
    pb.domain = {rect{-2, -2, 2, 2}};
    pb.interface.components = {make_example3_curve()};
    pb.a1 = 10.0;
    pb.a2 = 1.0;
    pb.f = [](const vec2&, int) { return 1.0; };
    pb.g = [](const vec2&) { return 0.0; };
    return pb;
}

interface_problem make_patch_problem(const interface_set& interface,
                                     const std::vector<std::vector<double>>& c, std::vector<rect> domain) {
    interface_problem pb;
    pb.domain = std::move(domain);
    pb.interface = interface;
    pb.a1 = pb.a2 = 1.0;
    auto eval = [c](const vec2& p) {
        double v = 0;
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < c[i].size(); ++j) v += c[i][j] * std::pow(p.x, i) * std::pow(p.y, j);
        return v;
    };
    auto grad = [c](const vec2& p) {
        vec2 g{0, 0};
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < c[i].size(); ++j) {
                if (i > 0) g.x += c[i][j] * i * std::pow(p.x, i - 1) * std::pow(p.y, j);
                if (j > 0) g.y += c[i][j] * j * std::pow(p.x, i) * std::pow(p.y, j - 1);
            }
        return g;
    };
    auto lap = [c](const vec2& p) {
        double v = 0;
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < c[i].size(); ++j) {
                if (i >= 2) v += c[i][j] * i * (i - 1) * std::pow(p.x, i - 2) * std::pow(p.y, j);
                if (j >= 2) v += c[i][j] * j * (j - 1) * std::pow(p.x, i) * std::pow(p.y, j - 2);
            }
        return v;
    };
    pb.has_exact = true;
    pb.exact = [eval](const vec2& p, int) { return eval(p); };
    pb.exact_grad = [grad](const vec2& p, int) { return grad(p); };
    pb.f = [lap](const vec2& p, int) { return -lap(p); };
    pb.g = [eval](const vec2& p) { return eval(p); };
    return pb;
}

} // namespace cutfem
