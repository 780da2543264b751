#include "blurtrack/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace blurtrack {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options) {
    const size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");

    std::vector<std::vector<double>> simplex;
    simplex.reserve(n + 1);
    simplex.push_back(x0);
    for (size_t i = 0; i < n; ++i) {
        std::vector<double> v = x0;
        double step;
        if (i < options.initial_step.size()) {
            step = options.initial_step[i];
        } else {
            step = v[i] != 0.0 ? 0.05 * std::fabs(v[i]) : 0.00025;
        }
        v[i] += step;
        simplex.push_back(std::move(v));
    }

    std::vector<double> best_seen = x0;
    double best_seen_f = std::numeric_limits<double>::infinity();
    auto eval = [&](const std::vector<double>& x) {
        double v = f(x);
        if (!std::isfinite(v)) {
            throw OptimError("nelder_mead: objective became non-finite", best_seen, best_seen_f);
        }
        if (v < best_seen_f) {
            best_seen_f = v;
            best_seen = x;
        }
        return v;
    };

    std::vector<double> fvals(n + 1);
    for (size_t i = 0; i <= n; ++i) fvals[i] = eval(simplex[i]);

    std::vector<size_t> order(n + 1);
    NelderMeadResult result;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return fvals[a] < fvals[b]; });

        const size_t best = order[0];
        const size_t second_worst = order[n - 1];
        const size_t worst = order[n];

        double diameter = 0.0;
        for (size_t i = 0; i <= n; ++i) {
            double d = 0.0;
            for (size_t j = 0; j < n; ++j) {
                d = std::max(d, std::fabs(simplex[i][j] - simplex[best][j]));
            }
            diameter = std::max(diameter, d);
        }
        double spread = fvals[worst] - fvals[best];
        result.iterations = iter;
        if (diameter < options.simplex_tolerance || spread < options.fvalue_tolerance) {
            result.converged = true;
            break;
        }

        // Centroid of all vertices except the worst.
        std::vector<double> centroid(n, 0.0);
        for (size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= double(n);

        auto along = [&](double coef) {
            std::vector<double> p(n);
            for (size_t j = 0; j < n; ++j) {
                p[j] = centroid[j] + coef * (centroid[j] - simplex[worst][j]);
            }
            return p;
        };

        std::vector<double> reflected = along(kReflect);
        double f_reflected = eval(reflected);

        if (f_reflected < fvals[best]) {
            std::vector<double> expanded = along(kExpand);
            double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = std::move(expanded);
                fvals[worst] = f_expanded;
            } else {
                simplex[worst] = std::move(reflected);
                fvals[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < fvals[second_worst]) {
            simplex[worst] = std::move(reflected);
            fvals[worst] = f_reflected;
            continue;
        }

        // Contraction: outside if the reflection improved on the worst
        // vertex, inside otherwise.
        bool outside = f_reflected < fvals[worst];
        std::vector<double> contracted = along(outside ? kContract : -kContract);
        double f_contracted = eval(contracted);
        if (f_contracted < (outside ? f_reflected : fvals[worst])) {
            simplex[worst] = std::move(contracted);
            fvals[worst] = f_contracted;
            continue;
        }

        // Shrink everything toward the best vertex.
        for (size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (size_t j = 0; j < n; ++j) {
                simplex[i][j] = simplex[best][j] + kShrink * (simplex[i][j] - simplex[best][j]);
            }
            fvals[i] = eval(simplex[i]);
        }
    }

    size_t best = 0;
    for (size_t i = 1; i <= n; ++i) {
        if (fvals[i] < fvals[best]) best = i;
    }
    result.x = simplex[best];
    result.fx = fvals[best];
    return result;
}

}  // namespace blurtrack
