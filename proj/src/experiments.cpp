#include "cutfem/experiments.hpp"

#include "cutfem/single_element.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace cutfem {

namespace {

double now_s() {
    using clk = std::chrono::steady_clock;
    return std::chrono::duration<double>(clk::now().time_since_epoch()).count();
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<double> parse_h_list(const std::string& v) {
    // "1/4..1/32" (halving), or comma list of values ("0.25,0.125" or "1/8")
    auto parse_one = [](const std::string& tok) {
        auto slash = tok.find('/');
        if (slash != std::string::npos)
            return std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1));
        return std::stod(tok);
    };
    std::vector<double> out;
    auto dots = v.find("..");
    if (dots != std::string::npos) {
        double a = parse_one(trim(v.substr(0, dots)));
        double b = parse_one(trim(v.substr(dots + 2)));
        for (double h = a; h > b * (1.0 - 1e-9); h /= 2) out.push_back(h);
        return out;
    }
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_one(trim(tok)));
    return out;
}

std::vector<int> parse_p_list(const std::string& v) {
    std::vector<int> out;
    auto dots = v.find("..");
    if (dots != std::string::npos) {
        int a = std::stoi(trim(v.substr(0, dots)));
        int b = std::stoi(trim(v.substr(dots + 2)));
        for (int p = a; p <= b; ++p) out.push_back(p);
        return out;
    }
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(trim(tok)));
    return out;
}

} // namespace

void apply_override(experiment_config& cfg, const std::string& key, const std::string& value) {
    if (key == "preset") cfg.preset = value;
    else if (key == "p") cfg.p_list = parse_p_list(value);
    else if (key == "h") cfg.h_list = parse_h_list(value);
    else if (key == "alpha0") cfg.alpha0 = std::stod(value);
    else if (key == "delta0") cfg.delta0 = std::stod(value);
    else if (key == "mu") cfg.mu = std::stod(value);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "seed") cfg.seed = unsigned(std::stoul(value));
    else if (key == "reference_mode") cfg.reference_mode = (value == "1" || value == "true");
    else if (key == "verbosity") cfg.verbosity = std::stoi(value);
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

experiment_config load_config(std::istream& is) {
    experiment_config cfg;
    std::string line;
    while (std::getline(is, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == '[') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + t);
        apply_override(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

experiment_config load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file " + path);
    return load_config(f);
}

interface_problem problem_for(const experiment_config& cfg) {
    if (cfg.preset == "example2") return make_example2_problem();
    if (cfg.preset == "example3") return make_example3_problem();
    if (cfg.preset == "example1") {
        // single-element conditioning geometry; no PDE data beyond a = 1
        interface_problem pb;
        pb.domain = {rect{-2, -2, 2, 2}};
        pb.interface.components = {make_example1_curve(cfg.mu)};
        pb.f = [](const vec2&, int) { return 0.0; };
        pb.g = [](const vec2&) { return 0.0; };
        return pb;
    }
    throw std::invalid_argument("unknown preset '" + cfg.preset + "'");
}

solve_summary solve_problem(const interface_problem& pb, double h, int p, double alpha0, double delta0,
                            Eigen::VectorXd* U_out, induced_mesh* mesh_out,
                            std::shared_ptr<ldg_system>* sys_out, int verbosity) {
    solve_summary out;
    double t0 = now_s();
    pipeline_config pc;
    pc.h0 = h;
    pc.p = p;
    pc.delta0 = delta0;
    pc.verbosity = verbosity;
    induced_mesh im = generate_mesh(pb.domain, pb.interface, pc);
    out.N = im.size();
    out.N_interface = im.n_interface();
    out.max_eta = im.max_eta;
    out.h_min = im.h_min();

    auto sys = std::make_shared<ldg_system>(pb, im, alpha0);
    assembled_system A = sys->assemble();
    out.n_dofs = A.n();
    Eigen::VectorXd U = solve_linear(A, &out.residual);
    if (pb.has_exact) out.dg_err = sys->dg_error(U).total();
    out.runtime_s = now_s() - t0;
    if (U_out) *U_out = std::move(U);
    if (mesh_out) *mesh_out = im;
    if (sys_out) *sys_out = sys;
    return out;
}

std::vector<convergence_row> run_convergence(const experiment_config& cfg, std::ostream* csv) {
    interface_problem pb = problem_for(cfg);
    std::vector<convergence_row> rows;
    for (int p : cfg.p_list) {
        double prev_err = -1;
        for (double h : cfg.h_list) {
            convergence_row row;
            row.p = p;
            row.h = h;
            if (pb.has_exact) {
                solve_summary s = solve_problem(pb, h, p, cfg.alpha0, cfg.delta0, nullptr, nullptr, nullptr,
                                                cfg.verbosity);
                row.error = s.dg_err;
                row.N = s.N;
                row.N_interface = s.N_interface;
                row.max_eta = s.max_eta;
                row.runtime_s = s.runtime_s;
            } else if (cfg.reference_mode) {
                // reference solution at (p+1, h/2)
                double t0 = now_s();
                Eigen::VectorXd U, Uref;
                induced_mesh im;
                std::shared_ptr<ldg_system> sys, sysref;
                solve_summary s = solve_problem(pb, h, p, cfg.alpha0, cfg.delta0, &U, &im, &sys,
                                                cfg.verbosity);
                solve_problem(pb, h / 2, p + 1, cfg.alpha0, cfg.delta0, &Uref, nullptr, &sysref,
                              cfg.verbosity);
                auto uref = [&](const vec2& x, int side) -> double {
                    long el = sysref->mesh().element_at(x);
                    if (el < 0) return 0.0;
                    const element_space& sp = sysref->space(el);
                    Eigen::VectorXd vals;
                    int field = sp.cut() ? side - 1 : 0;
                    sp.values(x, field, vals);
                    return vals.dot(Uref.segment(sysref->dofs().offset[el], sp.ndof()));
                };
                auto guref = [&](const vec2& x, int side) -> vec2 {
                    long el = sysref->mesh().element_at(x);
                    if (el < 0) return {0, 0};
                    const element_space& sp = sysref->space(el);
                    Eigen::MatrixX2d g;
                    int field = sp.cut() ? side - 1 : 0;
                    sp.gradients(x, field, g);
                    Eigen::VectorXd Ue = Uref.segment(sysref->dofs().offset[el], sp.ndof());
                    return {g.col(0).dot(Ue), g.col(1).dot(Ue)};
                };
                row.error = sys->dg_error_against(U, uref, guref).total();
                row.N = s.N;
                row.N_interface = s.N_interface;
                row.max_eta = s.max_eta;
                row.runtime_s = now_s() - t0;
            } else {
                throw std::invalid_argument("run_convergence: no exact solution and reference_mode off");
            }
            if (prev_err > 0) row.order = std::log2(prev_err / row.error);
            prev_err = row.error;
            rows.push_back(row);
        }
    }
    if (csv) write_convergence_csv(*csv, rows);
    return rows;
}

slope_fit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    slope_fit f;
    f.points = int(x.size());
    if (x.size() != y.size() || x.size() < 2) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int n = int(x.size());
    for (int i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    double det = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double sstot = syy - sy * sy / n;
    double ssres = 0;
    for (int i = 0; i < n; ++i) {
        double ly = std::log(y[i]);
        double fit = f.intercept + f.slope * std::log(x[i]);
        ssres += (ly - fit) * (ly - fit);
    }
    f.r2 = sstot > 0 ? 1.0 - ssres / sstot : 1.0;
    return f;
}

namespace {

conditioning_row condition_one(double mu, int p, double alpha0) {
    auto sys = build_one_element<long double>((long double)mu, p, (long double)alpha0);
    conditioning_row row;
    row.p = p;
    row.mu = mu;
    row.eta = double(sys.eta);
    row.theta = double(sys.theta);
    int n = int(sys.mass.rows());
    std::vector<long double> M(size_t(n) * n), A(size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            M[size_t(i) * n + j] = 0.5L * (sys.mass(i, j) + sys.mass(j, i));
            A[size_t(i) * n + j] = 0.5L * (sys.stiffness(i, j) + sys.stiffness(j, i));
        }
    auto evm = jacobi_eigenvalues<long double>(std::move(M), n);
    auto eva = jacobi_eigenvalues<long double>(std::move(A), n);
    row.kappa_mass = double(evm.back() / evm.front());
    row.kappa_stiffness = double(eva.back() / eva.front());
    return row;
}

} // namespace

std::vector<conditioning_row> run_conditioning_fixed(double mu, const std::vector<int>& p_list,
                                                     double alpha0) {
    std::vector<conditioning_row> rows;
    for (int p : p_list) rows.push_back(condition_one(mu, p, alpha0));
    return rows;
}

std::vector<conditioning_row> run_conditioning_small_eta(const std::vector<int>& p_list, double alpha0) {
    std::vector<conditioning_row> rows;
    for (int p : p_list) {
        double mu = cubic_chord_curve::mu_for_eta(eta_target(p));
        rows.push_back(condition_one(mu, p, alpha0));
    }
    return rows;
}

void write_convergence_csv(std::ostream& os, const std::vector<convergence_row>& rows) {
    os << "p,h,dg_error,order,N,N_interface,max_eta,runtime_s\n";
    os << std::scientific << std::setprecision(12);
    for (const auto& r : rows)
        os << r.p << ',' << r.h << ',' << r.error << ',' << r.order << ',' << r.N << ',' << r.N_interface
           << ',' << r.max_eta << ',' << r.runtime_s << '\n';
}

void write_conditioning_csv(std::ostream& os, const std::vector<conditioning_row>& rows) {
    os << "p,mu,eta,theta,kappa_mass,kappa_stiffness\n";
    os << std::scientific << std::setprecision(12);
    for (const auto& r : rows)
        os << r.p << ',' << r.mu << ',' << r.eta << ',' << r.theta << ',' << r.kappa_mass << ','
           << r.kappa_stiffness << '\n';
}

void write_gnuplot_script(std::ostream& os, const std::string& csv_name, const std::string& what) {
    os << "set datafile separator ','\n";
    os << "set logscale xy\n";
    os << "set key left top\n";
    if (what == "convergence") {
        os << "set xlabel 'h'\nset ylabel 'DG error'\n";
        os << "plot '" << csv_name << "' every ::1 using 2:3 with linespoints title 'error'\n";
    } else {
        os << "set xlabel 'Theta^2 p^4'\nset ylabel 'kappa(A)'\n";
        os << "plot '" << csv_name << "' every ::1 using ($4*$4*$1**4):6 with linespoints title 'kappa'\n";
    }
}

} // namespace cutfem
