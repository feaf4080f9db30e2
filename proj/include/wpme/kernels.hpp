#pragma once

#include <cstddef>
#include <span>

namespace wpme::kern {

// Data-parallel inner kernels of the solver and diagnostics. Every kernel has
// a serial reference implementation (suffix _serial) used by the tests and
// the benchmark; the unsuffixed entry point dispatches to OpenMP above a size
// threshold and to the serial path below it, so small production grids do not
// pay fork/join overhead. Reductions use static scheduling: results are
// reproducible for a fixed thread count.

inline constexpr std::size_t kParallelThreshold = 8192;

// sum_i w_i * |u_i|^q
double weighted_pow_sum(std::span<const double> w, std::span<const double> u, double q);
double weighted_pow_sum_serial(std::span<const double> w, std::span<const double> u, double q);

// sum_i w_i * u_i
double weighted_sum(std::span<const double> w, std::span<const double> u);
double weighted_sum_serial(std::span<const double> w, std::span<const double> u);

// sum_i w_i * |u_i - v_i|
double weighted_l1_diff(std::span<const double> w, std::span<const double> u,
                        std::span<const double> v);
double weighted_l1_diff_serial(std::span<const double> w, std::span<const double> u,
                               std::span<const double> v);

// max_i |u_i|
double max_abs(std::span<const double> u);
double max_abs_serial(std::span<const double> u);

// out_i = sign(u_i) * |u_i|^p   (the signed-power convention)
void signed_pow(std::span<const double> u, double p, std::span<double> out);
void signed_pow_serial(std::span<const double> u, double p, std::span<double> out);

// sum over faces of g_f * (p[i+1] - p[i])^2
double face_energy(std::span<const double> g, std::span<const double> p);
double face_energy_serial(std::span<const double> g, std::span<const double> p);

// Backward-Euler residual of the flux form:
//   r_i = mass_i*(u_i - uprev_i) - dt*(F_{i+1/2} - F_{i-1/2}),
//   F_{i+1/2} = g_i * (phi[i+1] - phi[i]) for interior faces.
// gl/gr couple the first/last cell to a zero ghost value (0 for no-flux).
void be_residual(std::span<const double> mass, std::span<const double> g,
                 double gl, double gr, std::span<const double> uprev,
                 std::span<const double> u, std::span<const double> phi, double dt,
                 std::span<double> r);
void be_residual_serial(std::span<const double> mass, std::span<const double> g,
                        double gl, double gr, std::span<const double> uprev,
                        std::span<const double> u, std::span<const double> phi, double dt,
                        std::span<double> r);

// Tridiagonal Jacobian of be_residual w.r.t. u (phip = phi'(u)):
//   diag_i = mass_i + dt*(g_{i-1/2}+g_{i+1/2})*phip_i
//   lower_i = -dt*g_{i-1/2}*phip_{i-1},  upper_i = -dt*g_{i+1/2}*phip_{i+1}
void be_jacobian(std::span<const double> mass, std::span<const double> g,
                 double gl, double gr, std::span<const double> phip, double dt,
                 std::span<double> lower, std::span<double> diag, std::span<double> upper);
void be_jacobian_serial(std::span<const double> mass, std::span<const double> g,
                        double gl, double gr, std::span<const double> phip, double dt,
                        std::span<double> lower, std::span<double> diag, std::span<double> upper);

// Solve a tridiagonal system in place with partial pivoting (serial by
// nature; kept here with the other linear-algebra pieces).
void solve_tridiag(std::span<double> lower, std::span<double> diag, std::span<double> upper,
                   std::span<double> rhs);

} // namespace wpme::kern
