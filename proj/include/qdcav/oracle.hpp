// oracle.hpp — brute-force reference: truncated-Fock Liouvillian, steady state,
// moment extraction, time integration of the moment equations, timing harness
//
// Hilbert space: emitter level t in {0 = ground, 1 = excited} times photon
// number m in [0, n_ph]; basis index t * (n_ph + 1) + m. Density matrices are
// column-stacked, vec(A X B) = (B^T kron A) vec(X). All rates are divided by
// kappa before assembly; moments are dimensionless so nothing is rescaled back.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qdcav/moments.hpp"
#include "qdcav/params.hpp"

namespace qdcav {

using SparseGenerator = Eigen::SparseMatrix<std::complex<double>, Eigen::ColMajor>;

struct FockLiouvillian {
    SystemParams params;   // kappa-normalized
    long n_ph = 0;
    long dim = 0;          // 2 (n_ph + 1)
    SparseGenerator generator;

    long index(int tls, long photons) const { return tls * (n_ph + 1) + photons; }
};

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// H = delta a^+a + g (a^+ A12 + A21 a); dissipators with jump operators
// A12 (rate gamma), A21 (p), a (kappa), A22 (gamma_d).
FockLiouvillian build_liouvillian(const SystemParams& params, long n_ph);

// max_j |sum_i L_{(i,i), j}|: the trace functional must annihilate every column.
double trace_preservation_residual(const FockLiouvillian& liouvillian);

struct SteadyState {
    Eigen::MatrixXcd rho;
    long n_ph = 0;
    double residual = 0.0;          // ||L vec(rho)||_inf
    double hermiticity = 0.0;       // ||rho - rho^+||_max before symmetrization
    double min_eigenvalue = 0.0;
    double trace_error = 0.0;
};

enum class SteadyStateMethod {
    sparse_lu,   // trace row replaces the rho_00 equation; LU with fill-reducing ordering
    sparse_qr    // trace row appended; rank-revealing QR, slow beyond n_ph ~ 15
};

// Solves L vec(rho) = 0 with Tr rho = 1. Throws OracleError if the numerical
// null space is not one-dimensional (singular factorization or rank deficit).
SteadyState steady_state(const FockLiouvillian& liouvillian, SteadyStateMethod method = SteadyStateMethod::sparse_lu);

// Dense reference solve over the real Hermitian coordinates of rho
// (Re rho_ii, Re rho_ij, Im rho_ij for i < j; (2(n_ph+1))^2 unknowns) by
// LU with partial pivoting. Cost grows as n_ph^6; used by the benchmark.
SteadyState steady_state_dense(const SystemParams& params, long n_ph);

// I_0..I_max_n, B_0..B_max_n, R_0..R_max_n; requires max_n <= n_ph - 2.
FullMoments extract_moments(const SteadyState& state, long max_n);

// max |<a^+k a^l>| over 0 <= k, l <= max_order with k != l.
double max_offdiagonal_moment(const SteadyState& state, long max_order);

struct OracleResult {
    FullMoments moments;
    SteadyState state;
    double bias = 0.0;   // max relative change of I_n, B_n, |R_n| (n <= max_n) from n_ph to n_ph + 10
};

// steady_state at n_ph and n_ph + 10; throws OracleError when the relative
// change exceeds bias_tol.
OracleResult oracle_moments(const SystemParams& params, long n_ph, long max_n, double bias_tol = 1e-8);

// Moment state vector for the equations of motion truncated at max_n:
// [I_0..I_max_n, B_0..B_max_n, Re R_0..Re R_max_n, Im R_0..Im R_max_n],
// closure I_max_n = B_max_n = R_max_n = 0. Time in units of 1/kappa.
using EomState = std::vector<double>;

void eom_rhs(const SystemParams& params, long max_n, const EomState& x, EomState& dxdt);
EomState eom_state_from(const FullMoments& full, long max_n);

struct Trajectory {
    std::vector<double> times;                // kappa * t
    std::vector<EomState> states;
    bool converged = false;                   // max |dx/dt| < settle_tol at the end
    double final_derivative = 0.0;
    long steps = 0;
};

struct EomOptions {
    double t_end = 0.0;         // in 1/kappa; 0 selects 50 / min(kappa, gamma)
    double dt_initial = 1e-3;
    double rtol = 1e-9;
    double atol = 1e-12;
    double dt_min = 1e-14;
    double settle_tol = 1e-8;
    long max_steps = 10'000'000;
    long record_every = 0;      // 0 keeps only the endpoints
};

// Adaptive Dormand-Prince integration from the vacuum. Throws OracleError on
// step-size underflow; non-convergence by t_end is reported in the result.
Trajectory integrate_eom(const SystemParams& params, long max_n, const EomOptions& options = {});

struct TimingRow {
    std::string solver;
    long size = 0;
    double wall_ns = 0.0;
};

struct BenchmarkReport {
    std::vector<TimingRow> rows;
    double recurrence_slope = 0.0;
    double dense_slope = 0.0;
    std::vector<std::string> notices;   // skipped sizes
};

struct BenchmarkOptions {
    std::vector<long> recurrence_sizes{10'000, 100'000, 1'000'000, 10'000'000};
    std::vector<long> dense_sizes{10, 15, 20, 25, 30, 35};
    long max_dense_n_ph = 35;
    long max_recurrence_n = 100'000'000;
    int repeats = 3;            // minimum over repeats is reported
};

// Fixed-order recurrence kernel: streaming C/D iteration with bracket updates
// for exactly n steps, then the backward ladder of order n. Returns I_1.
double recurrence_kernel(const RecurrenceCoeffs<double>& coeffs, long n);

BenchmarkReport benchmark(const SystemParams& params, const BenchmarkOptions& options = {});

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qdcav
