#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "rcdlab/heat.hpp"
#include "rcdlab/space.hpp"

namespace rcdlab {

struct HopfLaxResult {
    ScalarField values;       // Q^p_t f
    std::vector<int> argmin;  // a minimizer per vertex, ties to the lowest id
    double p = 1.0;
    double t = 1.0;
};

/// Inf-convolution Q^p_t f(x) = min_y ( f(y) + d(x,y)^p / (p t^{p-1}) ).
/// p = 1 runs as a single multi-source shortest-path sweep (the t parameter
/// drops out); p > 1 scans per vertex over the all-pairs table.
HopfLaxResult hopf_lax(const MmSpace& space, const ScalarField& f, double p, double t);

/// Brute-force reference: per-vertex scan over all candidates. Serial variant
/// kept as the test oracle for the parallel scan and the p=1 fast path.
HopfLaxResult hopf_lax_brute(const MmSpace& space, const ScalarField& f, double p, double t);
HopfLaxResult hopf_lax_brute_serial(const MmSpace& space, const ScalarField& f, double p, double t);

/// c-transform f^c = Q^1 f.
HopfLaxResult c_transform(const MmSpace& space, const ScalarField& f);

/// sup_y ( psi(y) - d(x,y) ), the negation conjugate of the c-transform.
ScalarField sup_transform(const MmSpace& space, const ScalarField& psi);

struct KuwadaReport {
    double max_violation = -std::numeric_limits<double>::infinity();
    int worst_x = -1, worst_y = -1;
    double worst_s = 0.0;
};

/// Max over pairs and times of P_s(Q^p_1 f)(x) - P_s f(y) - e^{-pKs}/p d(x,y)^p.
/// An empty pair sample means all ordered pairs.
KuwadaReport kuwada_check(const MmSpace& space, const HeatOperator& heat, const ScalarField& f,
                          double p, double K, const std::vector<double>& s_grid,
                          const std::vector<std::pair<int, int>>& pairs = {});

struct PreservationReport {
    bool attainment_ok = false;  // every argmin over Omega' lands in Omega
    int offending_vertex = -1;   // set when attainment fails
    bool hypothesis_ok = false;  // L f <= eta on Omega
    double excess = 0.0;         // max over Omega' of L f^c - (eta - min K d)
    double bound = 0.0;          // eta - min_{x in Omega', y in Omega} K d(x,y)
};

/// Checks that the c-transform carries the Laplacian bound L f <= eta on
/// Omega to L f^c <= eta - min K d on Omega'. Aborts (attainment_ok=false)
/// when some infimum over Omega' is attained outside Omega, and reports the
/// hypothesis check rather than assuming it.
PreservationReport preservation_experiment(const MmSpace& space, const ScalarField& f,
                                           const std::vector<int>& omega,
                                           const std::vector<int>& omega_prime, double eta,
                                           double K);

}  // namespace rcdlab
