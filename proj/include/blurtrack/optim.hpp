#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

// Derivative-free simplex minimization (Nelder-Mead) with the standard
// coefficients: reflection 1, expansion 2, contraction 0.5, shrink 0.5.

namespace blurtrack {

struct NelderMeadOptions {
    int max_iterations = 2000;
    double simplex_tolerance = 1e-8;  // max vertex distance from the best vertex
    double fvalue_tolerance = 1e-10;  // spread of function values across the simplex
    // Initial simplex offsets per dimension; empty = 5% of |x0_i| (0.00025 at zero).
    std::vector<double> initial_step;
};

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Thrown when the objective turns non-finite during the search; carries the
// best point seen so far.
class OptimError : public std::runtime_error {
public:
    OptimError(const std::string& what, std::vector<double> best, double best_value)
        : std::runtime_error(what), best_x(std::move(best)), best_fx(best_value) {}

    std::vector<double> best_x;
    double best_fx;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options = {});

}  // namespace blurtrack
