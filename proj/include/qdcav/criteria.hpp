// criteria.hpp — moment-based nonclassicality and entanglement conditions
//
// Each condition is sufficient only: a condition that is not met says nothing
// about the state, so verdicts are tri-state.

#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "qdcav/moments.hpp"
#include "qdcav/precision.hpp"

namespace qdcav {

enum class Verdict { nonclassical, not_detected, undefined };
std::string_view to_string(Verdict verdict);

enum class CriterionId {
    field,          // I_{2n} / I_n^2 < 1
    joint,          // B_{2n} / B_n^2 < 1
    entanglement    // B_{2n+1} - |R_n|^2 < 0; entanglement for n = 0, nonclassicality otherwise
};
std::string_view to_string(CriterionId id);

struct CriterionValue {
    double value = std::numeric_limits<double>::quiet_NaN();
    Verdict verdict = Verdict::undefined;
    std::string note;   // "sub_poissonian", "entangled", or why the value is undefined
};

// Throw std::out_of_range naming the required ladder length when the moments
// are too short.
CriterionValue field_criterion(const FullMoments& full, long n);
CriterionValue joint_criterion(const FullMoments& full, long n);
CriterionValue entanglement_criterion(const FullMoments& full, long n);

enum class MomentKind { i, b, r };
struct MomentRef {
    MomentKind kind;
    long n;
};

// det [[d0, off], [conj(off), d1]] = d0 d1 - |off|^2 over the stored moments;
// a negative minor is a nonclassicality witness. With d0 = I_0 the three
// criteria above are (I_0, I_2n; I_n), (I_0, B_2n; B_n), (I_0, B_2n+1; R_n).
double minor_2x2(const FullMoments& full, MomentRef d0, MomentRef d1, MomentRef off);

struct CriteriaRow {
    double p = 0.0;
    long order = 0;
    CriterionId criterion = CriterionId::field;
    double value = std::numeric_limits<double>::quiet_NaN();
    Verdict verdict = Verdict::undefined;
    std::string note;
};

struct SweepOrders {
    std::vector<long> field{1, 3, 5};
    std::vector<long> joint{1, 3, 5};
    std::vector<long> entanglement{0};
};

struct CriteriaReport {
    std::vector<double> p_grid;
    SweepOrders orders;
    std::vector<CriteriaRow> rows;   // p-major, then field, joint, entanglement in order-list order
    long failed_points = 0;
};

struct SweepOptions {
    SolveOptions solve;
    Precision precision = Precision::bits64;
};

// One block of rows per p. A point whose solve fails yields rows with
// verdict undefined and the error in `note`; the sweep continues.
CriteriaReport sweep(const SystemParams& templ, const std::vector<double>& p_grid, const SweepOrders& orders,
                     const SweepOptions& options = {});
CriteriaReport sweep_serial(const SystemParams& templ, const std::vector<double>& p_grid, const SweepOrders& orders,
                            const SweepOptions& options = {});

std::vector<double> log_grid(double lo, double hi, std::size_t samples);

}  // namespace qdcav
