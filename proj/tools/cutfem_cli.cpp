#include "cutfem/experiments.hpp"
#include "cutfem/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace cutfem;

namespace {

struct common_opts {
    std::string config;
    std::string preset;
    std::string h, p;
    double alpha0 = -1, delta0 = -1, mu = -1;
    std::string out;
    unsigned seed = 0;
    bool have_seed = false;
};

void add_common(CLI::App* cmd, common_opts& o) {
    cmd->add_option("--config", o.config, "config file (key=value lines)");
    cmd->add_option("--preset", o.preset, "example1 | example2 | example3");
    cmd->add_option("--h", o.h, "mesh size list, e.g. 0.25 or 1/4..1/32");
    cmd->add_option("--p", o.p, "degree list, e.g. 2 or 1..4");
    cmd->add_option("--alpha0", o.alpha0, "penalty constant");
    cmd->add_option("--delta0", o.delta0, "large-element fraction, in (0, 1/5]");
    cmd->add_option("--mu", o.mu, "cubic-chord family parameter (example1)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "seed for randomized suites")->each([&](const std::string&) {
        o.have_seed = true;
    });
}

experiment_config build_config(const common_opts& o) {
    experiment_config cfg;
    if (!o.config.empty()) cfg = load_config_file(o.config);
    if (!o.preset.empty()) apply_override(cfg, "preset", o.preset);
    if (!o.h.empty()) apply_override(cfg, "h", o.h);
    if (!o.p.empty()) apply_override(cfg, "p", o.p);
    if (o.alpha0 >= 0) cfg.alpha0 = o.alpha0;
    if (o.delta0 >= 0) cfg.delta0 = o.delta0;
    if (o.mu >= 0) cfg.mu = o.mu;
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.have_seed) cfg.seed = o.seed;
    return cfg;
}

std::ofstream open_out(const experiment_config& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream f(std::filesystem::path(cfg.out_dir) / name);
    if (!f) throw std::runtime_error("cannot write " + name + " in " + cfg.out_dir);
    return f;
}

int cmd_mesh(const experiment_config& cfg, bool bodyfit) {
    interface_problem pb = problem_for(cfg);
    pipeline_config pc;
    pc.h0 = cfg.h_list.front();
    pc.p = cfg.p_list.front();
    pc.delta0 = cfg.delta0;
    pc.verbosity = cfg.verbosity;
    induced_mesh im = generate_mesh(pb.domain, pb.interface, pc);
    auto f = open_out(cfg, "induced_mesh.txt");
    write_induced_mesh(f, im);
    std::cout << "induced mesh: " << im.size() << " elements (" << im.n_interface()
              << " interface), max eta " << im.max_eta << "\n";
    if (bodyfit) {
        mixed_mesh mm = export_body_fitted(im);
        auto g = open_out(cfg, "bodyfit_mesh.txt");
        write_mixed_mesh(g, mm);
        std::cout << "body-fitted mesh: " << mm.triangles.size() << " triangles, " << mm.quads.size()
                  << " quads, min angle " << mm.min_triangle_angle * 180.0 / M_PI << " deg\n";
    }
    return 0;
}

int cmd_solve(const experiment_config& cfg) {
    interface_problem pb = problem_for(cfg);
    Eigen::VectorXd U;
    induced_mesh im;
    std::shared_ptr<ldg_system> sys;
    solve_summary s = solve_problem(pb, cfg.h_list.front(), cfg.p_list.front(), cfg.alpha0, cfg.delta0, &U,
                                    &im, &sys, cfg.verbosity);
    assembled_system A = sys->assemble();
    {
        auto f = open_out(cfg, "stiffness.txt");
        write_matrix_coord(f, A.A_lower);
    }
    {
        auto f = open_out(cfg, "load.txt");
        write_vector(f, A.b);
    }
    {
        auto f = open_out(cfg, "solution_samples.txt");
        write_solution_samples(f, *sys, U, 120, 120);
    }
    std::cout << "N=" << s.N << " interface=" << s.N_interface << " dofs=" << s.n_dofs
              << " residual=" << s.residual;
    if (s.dg_err >= 0) std::cout << " dg_error=" << s.dg_err;
    std::cout << " runtime=" << s.runtime_s << "s\n";
    return 0;
}

int cmd_convergence(experiment_config cfg) {
    if (cfg.preset == "example3") cfg.reference_mode = true;
    auto csv = open_out(cfg, "convergence.csv");
    auto rows = run_convergence(cfg, &csv);
    auto gp = open_out(cfg, "convergence.gp");
    write_gnuplot_script(gp, "convergence.csv", "convergence");
    std::cout << "p,h,error,order\n";
    for (const auto& r : rows)
        std::cout << r.p << "," << r.h << "," << r.error << "," << r.order << "\n";
    return 0;
}

int cmd_conditioning(const experiment_config& cfg, bool small_eta) {
    std::vector<conditioning_row> rows = small_eta
                                             ? run_conditioning_small_eta(cfg.p_list, cfg.alpha0)
                                             : run_conditioning_fixed(cfg.mu, cfg.p_list, cfg.alpha0);
    auto csv = open_out(cfg, small_eta ? "conditioning_small_eta.csv" : "conditioning.csv");
    write_conditioning_csv(csv, rows);
    auto gp = open_out(cfg, "conditioning.gp");
    write_gnuplot_script(gp, "conditioning.csv", "conditioning");

    std::vector<double> theta, km, t2p4, ka, p4;
    for (const auto& r : rows) {
        theta.push_back(r.theta);
        km.push_back(r.kappa_mass);
        t2p4.push_back(r.theta * r.theta * std::pow(double(r.p), 4));
        ka.push_back(r.kappa_stiffness);
        p4.push_back(std::pow(double(r.p), 4));
    }
    std::cout << "p,mu,eta,theta,kappa_mass,kappa_stiffness\n";
    for (const auto& r : rows)
        std::cout << r.p << "," << r.mu << "," << r.eta << "," << r.theta << "," << r.kappa_mass << ","
                  << r.kappa_stiffness << "\n";
    if (rows.size() >= 2) {
        if (small_eta) {
            auto f = fit_loglog(p4, ka);
            std::cout << "slope kappa(A) vs p^4: " << f.slope << " (R^2=" << f.r2 << ")\n";
        } else {
            auto fm = fit_loglog(theta, km);
            auto fa = fit_loglog(t2p4, ka);
            std::cout << "slope kappa(M) vs Theta: " << fm.slope << " (R^2=" << fm.r2 << ")\n";
            std::cout << "slope kappa(A) vs Theta^2 p^4: " << fa.slope << " (R^2=" << fa.r2 << ")\n";
        }
    }
    return 0;
}

int cmd_validate(const experiment_config& cfg);

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"high-order unfitted FEM toolkit: merged cut-cell meshes and LDG solves"};
    app.require_subcommand(1);

    common_opts o;
    bool bodyfit = false, small_eta = false;

    auto* mesh = app.add_subcommand("mesh", "generate and serialize an induced mesh");
    add_common(mesh, o);
    mesh->add_flag("--bodyfit", bodyfit, "also export the mixed triangular-rectangular mesh");

    auto* slv = app.add_subcommand("solve", "one (p,h) solve with matrix and sample exports");
    add_common(slv, o);

    auto* conv = app.add_subcommand("convergence", "DG-error convergence table");
    add_common(conv, o);

    auto* cond = app.add_subcommand("conditioning", "single-element condition-number study");
    add_common(cond, o);
    cond->add_flag("--small-eta", small_eta, "constrain eta <= 0.1/(p(p+1)) via the family parameter");

    auto* val = app.add_subcommand("validate", "run the built-in invariant suites");
    add_common(val, o);

    CLI11_PARSE(app, argc, argv);

    try {
        experiment_config cfg = build_config(o);
        if (mesh->parsed()) return cmd_mesh(cfg, bodyfit);
        if (slv->parsed()) return cmd_solve(cfg);
        if (conv->parsed()) return cmd_convergence(cfg);
        if (cond->parsed()) return cmd_conditioning(cfg, small_eta);
        if (val->parsed()) return cmd_validate(cfg);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}

namespace {

int cmd_validate(const experiment_config& cfg) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    // quadrature exactness against the edge-sum oracle
    {
        polygon pent;
        pent.v = {{0, 0}, {1.2, 0.1}, {1.5, 0.9}, {0.7, 1.4}, {-0.2, 0.8}};
        quad_rule rule = polygon_rule(pent, 5);
        bool ok = true;
        for (int i = 0; i + 0 <= 5; ++i)
            for (int j = 0; i + j <= 5; ++j) {
                double got = 0;
                for (const auto& nd : rule.nodes) got += nd.w * std::pow(nd.p.x, i) * std::pow(nd.p.y, j);
                double want = polygon_monomial_integral(pent, i, j);
                if (std::abs(got - want) > 1e-12 * std::max(1.0, std::abs(want))) ok = false;
            }
        check("polygon quadrature exactness (degree 5)", ok);
    }
    // Gauss-Lobatto node residuals
    {
        bool ok = true;
        for (int p = 1; p <= 8; ++p)
            for (double x : gauss_lobatto_nodes<double>(p)) {
                auto [P, dP] = legendre<double>(p, x);
                if (std::abs((1 - x * x) * dP) > 1e-13) ok = false;
            }
        check("Gauss-Lobatto node residuals", ok);
    }
    // growth factor sanity
    {
        bool ok = std::abs(growth_factor(0.0, 3) - 1.0) < 1e-14;
        double prev = 0;
        for (double eta : {0.01, 0.05, 0.1, 0.16, 0.3}) {
            double th = growth_factor(eta, 3);
            if (th <= prev) ok = false;
            prev = th;
        }
        check("growth factor monotone, Theta(0) = 1", ok);
    }
    // merging reliability, small randomized batch
    {
        bool ok = true;
        int merged = 0;
        for (unsigned seed = 1; seed <= 10 && ok; ++seed) {
            interface_set iface;
            iface.components = {make_random_smooth_curve(seed)};
            pipeline_config pc;
            pc.h0 = 0.125;
            pc.p = 1;
            pc.delta0 = 0.2;
            pc.enforce_eta = false;
            try {
                induced_mesh im = generate_mesh({rect{-2, -2, 2, 2}}, iface, pc);
                for (const auto& e : im.elements)
                    if (e.cut && !is_large_element(e.bounds, *iface.components[0], pc.delta0)) ok = false;
                ++merged;
            } catch (const std::exception&) {
                ok = false;
            }
        }
        check("merging reliability (10 random interfaces)", ok && merged == 10);
    }
    // patch test on a merged circle mesh
    {
        interface_set iface;
        iface.components = {make_example2_curve()};
        interface_problem pb = make_patch_problem(iface, {{0.0, 0.0}, {1.0}});
        Eigen::VectorXd U;
        solve_summary s = solve_problem(pb, 0.5, 1, cfg.alpha0, cfg.delta0, &U);
        check("patch test u = x (DG error < 1e-8)", s.dg_err >= 0 && s.dg_err < 1e-8);
    }
    std::cout << (failures == 0 ? "validate: all suites passed\n" : "validate: FAILURES present\n");
    return failures == 0 ? 0 : 1;
}

} // namespace
