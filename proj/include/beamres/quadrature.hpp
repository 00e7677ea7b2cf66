#pragma once

#include <vector>

namespace beamres {

struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;  // nodes per coefficient piece

    // n-point Gauss-Legendre rule on [a,b].
    static Quadrature gauss_legendre(int n, double a, double b);
    // Gauss-Legendre panels of at most panel_size points, per_piece nodes on every interval of breaks.
    static Quadrature composite(const std::vector<double>& breaks, int per_piece, int panel_size = 8);

    std::size_t size() const { return nodes.size(); }
};

// Nodes and weights on [-1,1], ascending; cached per n.
const std::pair<std::vector<double>, std::vector<double>>& legendre_rule(int n);

}  // namespace beamres
