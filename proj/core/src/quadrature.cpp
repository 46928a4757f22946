#include "levyspde/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace levyspde {

namespace {

template <unsigned N>
GaussRule expand() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    GaussRule r;
    // boost stores the nonnegative half of a symmetric rule
    for (std::size_t i = x.size(); i-- > 0;) {
        if (x[i] != 0.0) {
            r.nodes.push_back(-x[i]);
            r.weights.push_back(w[i]);
        }
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.nodes.push_back(x[i]);
        r.weights.push_back(w[i]);
    }
    return r;
}

}  // namespace

const GaussRule& gauss_rule(int n) {
    static const GaussRule g4 = expand<4>();
    static const GaussRule g8 = expand<8>();
    static const GaussRule g16 = expand<16>();
    static const GaussRule g32 = expand<32>();
    switch (n) {
        case 4: return g4;
        case 8: return g8;
        case 16: return g16;
        case 32: return g32;
        default: throw std::invalid_argument("unsupported Gauss rule size " + std::to_string(n));
    }
}

double hs_time_integral(std::size_t modes, const std::function<double(std::size_t, double)>& f,
                        double T, std::optional<double> dt, int nodes, int panels_per_cell,
                        double cutoff, int quiet_modes) {
    const GaussRule& rule = gauss_rule(nodes);
    int cells = 1;
    if (dt) {
        cells = static_cast<int>(std::lround(T / *dt));
        if (cells < 1 || std::abs(T / *dt - cells) > 1e-9 * cells) {
            throw std::invalid_argument("step must divide the horizon");
        }
    }
    const int panels = cells * panels_per_cell;
    std::vector<double> breaks(static_cast<std::size_t>(panels) + 1);
    for (int i = 0; i <= panels; ++i) {
        breaks[static_cast<std::size_t>(i)] = T * i / panels;
    }
    double total = 0.0;
    int quiet = 0;
    for (std::size_t m = 0; m < modes; ++m) {
        const double v = integrate_panels(breaks, rule, [&](double s) { return f(m, s); });
        total += v;
        if (std::abs(v) <= cutoff * std::abs(total)) {
            if (++quiet >= quiet_modes) {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    return total;
}

}  // namespace levyspde
