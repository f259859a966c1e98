// figures.hpp — plot data for each published figure, one table per figure id
//
// Each builder records its grids and fixed parameters in the table header.
// Defaults that have no published value are marked with a `_choice` suffix
// in the header key.

#pragma once

#include <vector>

#include "qdcav/io.hpp"

namespace qdcav::figures {

struct NumericOptions {
    SolveOptions solve;
    Precision precision = Precision::bits64;
};

// I_1 against g/kappa for several p/kappa at gamma/kappa = 1, delta = 0.
struct Fig2Options {
    std::vector<double> p_over_kappa{0.5, 1.0, 1.5, 2.0};
    double g_min = 0.5;
    double g_max = 50.0;
    long points = 41;
};
Table fig2(const Fig2Options& options, const NumericOptions& numeric = {});

// I_n / (n! I_1^n) against p/kappa at gamma/kappa = 1, delta = 0.
struct Fig3Options {
    std::vector<double> g_over_kappa{1.0, 5.0};
    std::vector<long> orders{2, 3, 4};
    double p_min = 0.1;
    double p_max = 1e4;
    long points = 41;
};
Table fig3(const Fig3Options& options, const NumericOptions& numeric = {});

// Criteria sweeps over p for sets A and B. Figure 4 uses the field
// condition, 5 the joint condition, 6 the entanglement difference.
struct SweepFigureOptions {
    double p_min = 1e8;
    double p_max = 1e14;
    long points = 121;
    std::vector<long> orders;   // empty selects the figure's own orders
};
Table criteria_figure(int id, const SweepFigureOptions& options, const NumericOptions& numeric = {});

// Phi over a |alpha| grid for sets A and B at p = 1e11 s^-1.
struct Fig7Options {
    double p = 1e11;
    double alpha_min = 0.0;
    double alpha_max = 10.0;
    long samples = 512;
    Precision precision = Precision::automatic;
};
Table fig7(const Fig7Options& options, const NumericOptions& numeric = {});

// Ratio bounds on I_{n+1}/I_n against n for set B at p = 1e11 s^-1, with the
// next-to-leading-order ratio, the asymptotic ratio xi/n and the solved ratio
// where the ladder reaches.
struct Fig8Options {
    double p = 1e11;
    double n_min = 1.0;
    double n_max = 1e4;
    long points = 200;
};
Table fig8(const Fig8Options& options, const NumericOptions& numeric = {});

}  // namespace qdcav::figures
