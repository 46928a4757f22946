#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace levyspde {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

// n in {4, 8, 16, 32}
const GaussRule& gauss_rule(int n);

// Sum over panels [b_i, b_{i+1}] of the Gauss rule applied to f.
template <class F>
double integrate_panels(std::span<const double> breaks, const GaussRule& rule, F&& f) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double s = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
            s += rule.weights[static_cast<std::size_t>(q)] *
                 f(mid + half * rule.nodes[static_cast<std::size_t>(q)]);
        }
        total += half * s;
    }
    return total;
}

// Sum_m integral_0^T f(m, s) ds with cell-wise Gauss quadrature on the cells
// of width dt (one cell if no step is given), each cell split into
// `panels_per_cell` equal panels. Modes are visited in order and the sum is
// cut once `quiet_modes` consecutive modes contribute below `cutoff` relative.
double hs_time_integral(std::size_t modes, const std::function<double(std::size_t, double)>& f,
                        double T, std::optional<double> dt, int nodes, int panels_per_cell = 1,
                        double cutoff = 1e-12, int quiet_modes = 8);

}  // namespace levyspde
