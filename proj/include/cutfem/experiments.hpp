#pragma once

#include "cutfem/pipeline.hpp"
#include "cutfem/problem.hpp"
#include "cutfem/solve.hpp"

#include <iosfwd>

namespace cutfem {

struct experiment_config {
    std::string preset = "example2"; // example1 | example2 | example3
    std::vector<int> p_list = {1};
    std::vector<double> h_list = {0.25};
    double alpha0 = 1.0;
    double delta0 = 0.2;
    double mu = 3.8; // example1 family parameter
    std::string out_dir = ".";
    unsigned seed = 1;
    bool reference_mode = false; // errors against a (p+1, h/2) reference solve
    int verbosity = 0;
};

// key=value text with optional [section] headers (sections are cosmetic);
// unknown keys are an error.
experiment_config load_config(std::istream& is);
experiment_config load_config_file(const std::string& path);
void apply_override(experiment_config& cfg, const std::string& key, const std::string& value);

interface_problem problem_for(const experiment_config& cfg);

struct convergence_row {
    int p = 1;
    double h = 0;
    double error = 0;
    double order = 0; // log2 ratio vs the previous h; 0 on the first row
    long N = 0, N_interface = 0;
    double max_eta = 0;
    double runtime_s = 0;
};

struct solve_summary {
    long N = 0, N_interface = 0;
    long n_dofs = 0;
    double max_eta = 0, h_min = 0;
    double residual = 0;
    double dg_err = -1;
    double runtime_s = 0;
};

// One (p,h) pipeline run: mesh, assemble, solve; DG error when the problem
// has an exact solution. Outputs are optional sinks for reuse.
solve_summary solve_problem(const interface_problem& pb, double h, int p, double alpha0, double delta0,
                            Eigen::VectorXd* U_out = nullptr, induced_mesh* mesh_out = nullptr,
                            std::shared_ptr<ldg_system>* sys_out = nullptr, int verbosity = 0);

std::vector<convergence_row> run_convergence(const experiment_config& cfg, std::ostream* csv = nullptr);

struct conditioning_row {
    int p = 1;
    double mu = 0, eta = 0, theta = 0;
    double kappa_mass = 0, kappa_stiffness = 0;
};

struct slope_fit {
    double slope = 0, intercept = 0, r2 = 0;
    int points = 0;
};

slope_fit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Example 1 studies: fixed deviation (eta ~ 0.16 at mu), and the
// eta <= 0.1/(p(p+1)) regime where mu is chosen per degree.
std::vector<conditioning_row> run_conditioning_fixed(double mu, const std::vector<int>& p_list,
                                                     double alpha0);
std::vector<conditioning_row> run_conditioning_small_eta(const std::vector<int>& p_list, double alpha0);

void write_conditioning_csv(std::ostream& os, const std::vector<conditioning_row>& rows);
void write_convergence_csv(std::ostream& os, const std::vector<convergence_row>& rows);
void write_gnuplot_script(std::ostream& os, const std::string& csv_name, const std::string& what);

} // namespace cutfem
