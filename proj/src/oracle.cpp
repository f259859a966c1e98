#include "qdcav/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <Eigen/SparseQR>
#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/KroneckerProduct>

namespace qdcav {

namespace {

using cplx = std::complex<double>;
using Triplet = Eigen::Triplet<cplx>;

SparseGenerator identity(long dim) {
    SparseGenerator id(dim, dim);
    id.setIdentity();
    return id;
}

struct Operators {
    SparseGenerator a, a12, a21, a22, hamiltonian;
};

Operators make_operators(const SystemParams& prm, long n_ph) {
    const long np1 = n_ph + 1;
    const long dim = 2 * np1;
    std::vector<Triplet> ta, t12, t21, t22;
    for (int t = 0; t < 2; ++t) {
        for (long m = 1; m <= n_ph; ++m) ta.emplace_back(t * np1 + m - 1, t * np1 + m, std::sqrt(static_cast<double>(m)));
    }
    for (long m = 0; m <= n_ph; ++m) {
        t12.emplace_back(m, np1 + m, 1.0);
        t21.emplace_back(np1 + m, m, 1.0);
        t22.emplace_back(np1 + m, np1 + m, 1.0);
    }
    Operators ops;
    ops.a.resize(dim, dim);
    ops.a12.resize(dim, dim);
    ops.a21.resize(dim, dim);
    ops.a22.resize(dim, dim);
    ops.a.setFromTriplets(ta.begin(), ta.end());
    ops.a12.setFromTriplets(t12.begin(), t12.end());
    ops.a21.setFromTriplets(t21.begin(), t21.end());
    ops.a22.setFromTriplets(t22.begin(), t22.end());
    const SparseGenerator adag = ops.a.adjoint();
    const SparseGenerator number = adag * ops.a;
    const SparseGenerator coupling = adag * ops.a12 + ops.a21 * ops.a;
    ops.hamiltonian = cplx(prm.delta) * number + cplx(prm.g) * coupling;
    return ops;
}

double log_factorial(long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double relative_change(double a, double b) {
    const double scale = std::max(std::abs(b), 1e-300);
    return std::abs(a - b) / scale;
}

template <class Fn>
double time_ns(int repeats, Fn&& fn) {
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(1, repeats); ++r) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        const auto stop = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::nano>(stop - start).count());
    }
    return best;
}

}  // namespace

FockLiouvillian build_liouvillian(const SystemParams& params, long n_ph) {
    if (n_ph < 2) throw std::invalid_argument("build_liouvillian: n_ph must be >= 2");
    FockLiouvillian out;
    out.params = normalize(params);
    out.n_ph = n_ph;
    out.dim = 2 * (n_ph + 1);
    const auto ops = make_operators(out.params, n_ph);
    const SparseGenerator id = identity(out.dim);
    const SparseGenerator h_t = ops.hamiltonian.transpose();
    SparseGenerator gen = cplx(0.0, -1.0) * (SparseGenerator(Eigen::kroneckerProduct(id, ops.hamiltonian)) -
                                             SparseGenerator(Eigen::kroneckerProduct(h_t, id)));
    const std::pair<double, const SparseGenerator*> channels[] = {
        {out.params.gamma, &ops.a12}, {out.params.p, &ops.a21}, {out.params.kappa, &ops.a}, {out.params.gamma_d, &ops.a22}};
    for (const auto& [rate, op] : channels) {
        if (rate == 0.0) continue;
        const SparseGenerator x = *op;
        const SparseGenerator x_conj = x.conjugate();
        const SparseGenerator xdx = x.adjoint() * x;
        const SparseGenerator xdx_t = xdx.transpose();
        gen += cplx(rate) * (SparseGenerator(Eigen::kroneckerProduct(x_conj, x)) -
                             cplx(0.5) * SparseGenerator(Eigen::kroneckerProduct(id, xdx)) -
                             cplx(0.5) * SparseGenerator(Eigen::kroneckerProduct(xdx_t, id)));
    }
    gen.prune(cplx(0.0));
    gen.makeCompressed();
    out.generator = std::move(gen);
    return out;
}

double trace_preservation_residual(const FockLiouvillian& liouvillian) {
    const long d = liouvillian.dim;
    double worst = 0.0;
    for (long col = 0; col < liouvillian.generator.outerSize(); ++col) {
        cplx sum = 0.0;
        for (SparseGenerator::InnerIterator it(liouvillian.generator, col); it; ++it) {
            const long row = it.row();
            if (row % d == row / d) sum += it.value();
        }
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

namespace {

SteadyState finalize_state(Eigen::MatrixXcd rho, long n_ph, const SparseGenerator& generator) {
    SteadyState out;
    out.n_ph = n_ph;
    out.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    rho = (rho + rho.adjoint()).eval() * 0.5;
    const cplx trace = rho.trace();
    rho /= trace;
    out.trace_error = std::abs(rho.trace() - 1.0);
    const Eigen::Map<const Eigen::VectorXcd> v(rho.data(), rho.size());
    out.residual = (generator * v).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = eig.eigenvalues().minCoeff();
    out.rho = std::move(rho);
    return out;
}

}  // namespace

SteadyState steady_state(const FockLiouvillian& liouvillian, SteadyStateMethod method) {
    const long d = liouvillian.dim;
    const long n = d * d;
    const bool appended = method == SteadyStateMethod::sparse_qr;
    // Trace row either appended below the generator or written over row 0,
    // the rho_00 equation, which is implied by the others.
    SparseGenerator system(appended ? n + 1 : n, n);
    {
        std::vector<Triplet> triplets;
        triplets.reserve(static_cast<std::size_t>(liouvillian.generator.nonZeros() + d));
        for (long col = 0; col < liouvillian.generator.outerSize(); ++col) {
            for (SparseGenerator::InnerIterator it(liouvillian.generator, col); it; ++it) {
                if (!appended && it.row() == 0) continue;
                triplets.emplace_back(it.row(), it.col(), it.value());
            }
        }
        const long trace_row = appended ? n : 0;
        for (long i = 0; i < d; ++i) triplets.emplace_back(trace_row, i + i * d, 1.0);
        system.setFromTriplets(triplets.begin(), triplets.end());
        system.makeCompressed();
    }
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(system.rows());
    rhs(appended ? n : 0) = 1.0;
    Eigen::VectorXcd v;
    if (appended) {
        Eigen::SparseQR<SparseGenerator, Eigen::COLAMDOrdering<int>> qr;
        qr.compute(system);
        if (qr.info() != Eigen::Success) throw OracleError("steady_state: sparse QR factorization failed");
        if (qr.rank() < n) {
            throw OracleError("steady_state: null space of the generator is degenerate (rank " +
                              std::to_string(qr.rank()) + " of " + std::to_string(n) + ")");
        }
        v = qr.solve(rhs);
    } else {
        Eigen::SparseLU<SparseGenerator, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(system);
        if (lu.info() != Eigen::Success) {
            throw OracleError("steady_state: null space of the generator is degenerate (" + lu.lastErrorMessage() + ")");
        }
        v = lu.solve(rhs);
        if (lu.info() != Eigen::Success) throw OracleError("steady_state: sparse LU solve failed");
    }
    Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(v.data(), d, d);
    return finalize_state(std::move(rho), liouvillian.n_ph, liouvillian.generator);
}

SteadyState steady_state_dense(const SystemParams& params, long n_ph) {
    const auto liouvillian = build_liouvillian(params, n_ph);
    const long d = liouvillian.dim;
    const long m = d * d;
    const SparseGenerator& gen = liouvillian.generator;
    Eigen::MatrixXd real_gen = Eigen::MatrixXd::Zero(m, m);
    // Column k of the real generator is the image of the Hermitian basis
    // element for coordinate k, itself at most two columns of the generator.
    auto accumulate = [&](long k, long col, cplx weight) {
        for (SparseGenerator::InnerIterator it(gen, col); it; ++it) {
            const cplx y = weight * it.value();
            const long a = it.row() % d;
            const long b = it.row() / d;
            if (a == b) {
                real_gen(it.row(), k) += y.real();
            } else if (a < b) {
                real_gen(it.row(), k) += y.real();
                real_gen(b + a * d, k) += y.imag();
            }
        }
    };
    for (long j = 0; j < d; ++j) {
        for (long i = 0; i < d; ++i) {
            const long k = i + j * d;
            if (i == j) {
                accumulate(k, k, 1.0);
            } else if (i < j) {
                accumulate(k, i + j * d, 1.0);
                accumulate(k, j + i * d, 1.0);
            } else {
                // coordinate Im rho_ji with j < i: basis i e_ji - i e_ij
                accumulate(k, j + i * d, cplx(0.0, 1.0));
                accumulate(k, i + j * d, cplx(0.0, -1.0));
            }
        }
    }
    real_gen.row(0).setZero();
    for (long i = 0; i < d; ++i) real_gen(0, i + i * d) = 1.0;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs(0) = 1.0;
    const Eigen::VectorXd x = real_gen.partialPivLu().solve(rhs);
    Eigen::MatrixXcd rho(d, d);
    for (long j = 0; j < d; ++j) {
        for (long i = 0; i < d; ++i) {
            if (i == j) {
                rho(i, i) = x(i + i * d);
            } else if (i < j) {
                rho(i, j) = cplx(x(i + j * d), x(j + i * d));
            } else {
                rho(i, j) = cplx(x(j + i * d), -x(i + j * d));
            }
        }
    }
    return finalize_state(std::move(rho), n_ph, gen);
}

FullMoments extract_moments(const SteadyState& state, long max_n) {
    const long n_ph = state.n_ph;
    if (max_n < 1 || max_n > n_ph - 2) {
        throw OracleError("extract_moments: max_n must lie in [1, n_ph - 2] (n_ph = " + std::to_string(n_ph) + ")");
    }
    const long np1 = n_ph + 1;
    const auto& rho = state.rho;
    FullMoments full;
    full.ladder.i_moments.assign(static_cast<std::size_t>(max_n + 1), 0.0);
    full.b_moments.assign(static_cast<std::size_t>(max_n + 1), 0.0);
    full.r_moments.assign(static_cast<std::size_t>(max_n + 1), cplx(0.0));
    for (long n = 0; n <= max_n; ++n) {
        double i_sum = 0.0, b_sum = 0.0;
        cplx r_sum = 0.0;
        for (long m = n; m <= n_ph; ++m) {
            const double falling = std::exp(log_factorial(m) - log_factorial(m - n));
            const double ground = rho(m, m).real();
            const double excited = rho(np1 + m, np1 + m).real();
            i_sum += falling * (ground + excited);
            b_sum += falling * excited;
        }
        for (long m = n + 1; m <= n_ph; ++m) {
            const double c = std::exp(0.5 * (log_factorial(m) + log_factorial(m - 1)) - log_factorial(m - n - 1));
            r_sum += c * rho(m, np1 + m - 1);
        }
        const auto i = static_cast<std::size_t>(n);
        full.ladder.i_moments[i] = i_sum;
        full.b_moments[i] = b_sum;
        full.r_moments[i] = r_sum;
    }
    full.ladder.cutoff_N = max_n;
    return full;
}

double max_offdiagonal_moment(const SteadyState& state, long max_order) {
    const long n_ph = state.n_ph;
    const long np1 = n_ph + 1;
    double worst = 0.0;
    for (long k = 0; k <= max_order; ++k) {
        for (long l = 0; l <= max_order; ++l) {
            if (k == l) continue;
            cplx sum = 0.0;
            for (int t = 0; t < 2; ++t) {
                for (long m = l; m <= n_ph; ++m) {
                    const long target = m - l + k;
                    if (target > n_ph) continue;
                    const double coef = std::exp(0.5 * (log_factorial(m) - log_factorial(m - l)) +
                                                 0.5 * (log_factorial(target) - log_factorial(m - l)));
                    sum += coef * state.rho(t * np1 + m, t * np1 + target);
                }
            }
            worst = std::max(worst, std::abs(sum));
        }
    }
    return worst;
}

OracleResult oracle_moments(const SystemParams& params, long n_ph, long max_n, double bias_tol) {
    OracleResult out;
    out.state = steady_state(build_liouvillian(params, n_ph));
    out.moments = extract_moments(out.state, max_n);
    const auto wider = extract_moments(steady_state(build_liouvillian(params, n_ph + 10)), max_n);
    double bias = 0.0;
    for (long n = 0; n <= max_n; ++n) {
        const auto i = static_cast<std::size_t>(n);
        bias = std::max(bias, relative_change(out.moments.ladder.i_moments[i], wider.ladder.i_moments[i]));
        bias = std::max(bias, relative_change(out.moments.b_moments[i], wider.b_moments[i]));
        bias = std::max(bias, relative_change(std::abs(out.moments.r_moments[i]), std::abs(wider.r_moments[i])));
    }
    out.bias = bias;
    if (bias > bias_tol) {
        throw OracleError("oracle_moments: truncation bias " + std::to_string(bias) + " exceeds " +
                          std::to_string(bias_tol) + "; increase n_ph beyond " + std::to_string(n_ph));
    }
    return out;
}

void eom_rhs(const SystemParams& params, long max_n, const EomState& x, EomState& dxdt) {
    const long w = max_n + 1;
    const auto at = [w](int block, long n) { return static_cast<std::size_t>(block * w + n); };
    const double g = params.g, kappa = params.kappa, p = params.p, delta = params.delta;
    const double loss = params.gamma + params.p;
    dxdt.assign(x.size(), 0.0);
    for (long n = 0; n < max_n; ++n) {
        const double sigma = loss + static_cast<double>(n) * kappa;
        const double gamma_n = 0.5 * (loss + kappa * static_cast<double>(2 * n + 1)) + 0.5 * params.gamma_d;
        const double re_r = x[at(2, n)];
        const double im_r = x[at(3, n)];
        if (n >= 1) {
            dxdt[at(0, n)] = -static_cast<double>(n) * kappa * x[at(0, n)] - 2.0 * static_cast<double>(n) * g * x[at(3, n - 1)];
        }
        dxdt[at(1, n)] = -sigma * x[at(1, n)] + p * x[at(0, n)] + 2.0 * g * im_r;
        const double source = static_cast<double>(n + 1) * x[at(1, n)] + 2.0 * x[at(1, n + 1)] - x[at(0, n + 1)];
        dxdt[at(2, n)] = -gamma_n * re_r + delta * im_r;
        dxdt[at(3, n)] = -delta * re_r - gamma_n * im_r - g * source;
    }
}

EomState eom_state_from(const FullMoments& full, long max_n) {
    const long w = max_n + 1;
    EomState x(static_cast<std::size_t>(4 * w), 0.0);
    for (long n = 0; n < max_n; ++n) {
        const auto i = static_cast<std::size_t>(n);
        if (n < static_cast<long>(full.ladder.i_moments.size())) x[i] = full.ladder.i_moments[i];
        if (n < static_cast<long>(full.b_moments.size())) {
            x[static_cast<std::size_t>(w) + i] = full.b_moments[i];
            x[static_cast<std::size_t>(2 * w) + i] = full.r_moments[i].real();
            x[static_cast<std::size_t>(3 * w) + i] = full.r_moments[i].imag();
        }
    }
    return x;
}

Trajectory integrate_eom(const SystemParams& params, long max_n, const EomOptions& options) {
    namespace odeint = boost::numeric::odeint;
    if (max_n < 2) throw std::invalid_argument("integrate_eom: max_n must be >= 2");
    const SystemParams prm = normalize(params);
    const double t_end = options.t_end > 0.0 ? options.t_end : 50.0 / std::min(1.0, prm.gamma);
    const long w = max_n + 1;
    EomState x(static_cast<std::size_t>(4 * w), 0.0);
    x[0] = 1.0;
    auto system = [&](const EomState& s, EomState& d, double) { eom_rhs(prm, max_n, s, d); };
    auto stepper = odeint::make_controlled(options.atol, options.rtol, odeint::runge_kutta_dopri5<EomState>());

    Trajectory out;
    out.times.push_back(0.0);
    out.states.push_back(x);
    double t = 0.0;
    double dt = options.dt_initial;
    while (t < t_end) {
        if (out.steps >= options.max_steps) break;
        dt = std::min(dt, t_end - t);
        if (stepper.try_step(system, x, t, dt) == odeint::success) {
            ++out.steps;
            if (options.record_every > 0 && out.steps % options.record_every == 0) {
                out.times.push_back(t);
                out.states.push_back(x);
            }
        } else if (dt < options.dt_min) {
            throw OracleError("integrate_eom: step size underflow at t = " + std::to_string(t));
        }
    }
    if (out.times.back() != t) {
        out.times.push_back(t);
        out.states.push_back(x);
    }
    EomState d;
    eom_rhs(prm, max_n, x, d);
    out.final_derivative = 0.0;
    for (double v : d) out.final_derivative = std::max(out.final_derivative, std::abs(v));
    out.converged = t >= t_end && out.final_derivative < options.settle_tol;
    return out;
}

double recurrence_kernel(const RecurrenceCoeffs<double>& coeffs, long n) {
    if (n < 4) throw std::invalid_argument("recurrence_kernel: n must be >= 4");
    double c0 = 0, c1 = 1, d0 = 1, d1 = 0;
    double point = 0, bracket_width = 0;
    const double eps = 0.1;
    for (long m = 0; m + 2 <= n; ++m) {
        const double a = coeffs.alpha(m + 1);
        const double b = coeffs.beta(m);
        const double c2 = a * c1 + b * c0;
        const double d2 = a * d1 + b * d0;
        if (a < 0) {
            const double q = b / (eps - a);
            bracket_width = std::abs(-d2 / c2 + (d1 - q * d0) / (c1 - q * c0));
            point = std::max(-d2 / c2, 0.0);
        }
        c0 = c1;
        c1 = c2;
        d0 = d1;
        d1 = d2;
        if ((m + 1) % 16 == 0) {
            int e = 0;
            (void)std::frexp(std::max(std::abs(c1), std::abs(d1)), &e);
            c0 = std::ldexp(c0, -e);
            c1 = std::ldexp(c1, -e);
            d0 = std::ldexp(d0, -e);
            d1 = std::ldexp(d1, -e);
        }
    }
    const auto ladder = solve_ladder(coeffs, point, n);
    return ladder.i_moments[1] + bracket_width;
}

BenchmarkReport benchmark(const SystemParams& params, const BenchmarkOptions& options) {
    if (options.recurrence_sizes.empty() && options.dense_sizes.empty()) {
        throw std::invalid_argument("benchmark: no sizes requested");
    }
    if (options.repeats < 1) throw std::invalid_argument("benchmark: repeats must be >= 1");
    BenchmarkReport report;
    const RecurrenceCoeffs<double> coeffs(normalize(params));
    std::vector<double> rx, ry, dx, dy;
    volatile double sink = 0.0;
    for (long n : options.recurrence_sizes) {
        if (n < 4 || n > options.max_recurrence_n) {
            report.notices.push_back("skipped recurrence size " + std::to_string(n));
            continue;
        }
        const double ns = time_ns(options.repeats, [&] { sink = sink + recurrence_kernel(coeffs, n); });
        report.rows.push_back({"recurrence", n, ns});
        rx.push_back(static_cast<double>(n));
        ry.push_back(ns);
    }
    const int saved_threads = Eigen::nbThreads();
    Eigen::setNbThreads(1);
    for (long n_ph : options.dense_sizes) {
        if (n_ph < 2 || n_ph > options.max_dense_n_ph) {
            report.notices.push_back("skipped dense size n_ph = " + std::to_string(n_ph));
            continue;
        }
        const double ns = time_ns(options.repeats, [&] { sink = sink + steady_state_dense(params, n_ph).rho(0, 0).real(); });
        report.rows.push_back({"dense", n_ph, ns});
        dx.push_back(static_cast<double>(n_ph));
        dy.push_back(ns);
    }
    Eigen::setNbThreads(saved_threads);
    report.recurrence_slope = rx.size() >= 2 ? loglog_slope(rx, ry) : std::nan("");
    report.dense_slope = dx.size() >= 2 ? loglog_slope(dx, dy) : std::nan("");
    return report;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired samples");
    double mx = 0, my = 0;
    const double k = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= k;
    my /= k;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = std::log(x[i]) - mx;
        sxy += u * (std::log(y[i]) - my);
        sxx += u * u;
    }
    return sxy / sxx;
}

}  // namespace qdcav
