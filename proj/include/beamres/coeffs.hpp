#pragma once

#include <functional>
#include <vector>

namespace beamres {

// One polynomial piece on [x0,x1], stored as a Chebyshev series in the mapped variable.
struct Piece {
    double x0 = 0.0;
    double x1 = 0.0;
    std::vector<double> cheb;
};

// Monomial input form: sum_j coeffs[j] * (x - x0)^j on [x0,x1].
struct MonomialPiece {
    double x0 = 0.0;
    double x1 = 0.0;
    std::vector<double> coeffs;
};

// Real piecewise polynomial supported in [0, support_end]; zero elsewhere.
class CompactCoeff {
public:
    static constexpr int max_monomial_degree = 16;

    CompactCoeff() = default;
    CompactCoeff(double support_end, std::vector<Piece> pieces);

    static CompactCoeff zero(double support_end);
    static CompactCoeff step(double value, double x0, double x1, double support_end);
    static CompactCoeff from_monomial(double support_end, const std::vector<MonomialPiece>& pieces);
    // Interpolate f at n Chebyshev points on each interval between consecutive breaks.
    static CompactCoeff sample(double support_end, const std::vector<double>& breaks, int n,
                               const std::function<double(double)>& f);

    // Right-continuous inside the support, left limit at its right end.
    double operator()(double x) const;
    double left(double x) const;
    double right(double x) const;

    CompactCoeff derivative() const;
    double integral() const;
    double integral(double a, double b) const;

    double support_end() const { return gamma_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    std::vector<double> breakpoints() const;
    int degree() const;
    bool is_zero() const;
    double max_abs() const;

    // Local monomial coefficients of piece i (exact up to rounding for low degree).
    std::vector<double> monomial(std::size_t i) const;

private:
    const Piece* find_right(double x) const;
    const Piece* find_left(double x) const;

    double gamma_ = 1.0;
    std::vector<Piece> pieces_;
};

// (p, q) plus the derived scalars used throughout.
struct CoeffPair {
    CompactCoeff p;
    CompactCoeff q;
    double gamma = 0.0;
    double p0 = 0.0;
    double q0 = 0.0;
    double p_plus = 0.0;

    CoeffPair() = default;
    CoeffPair(CompactCoeff p_, CompactCoeff q_);

    // Union of the breakpoints of p and q, always containing 0 and gamma.
    std::vector<double> breakpoints() const;
    bool is_free() const { return p.is_zero() && q.is_zero(); }
};

// Euler-Bernoulli data in offset form: a = 1 + a_off, b = 1 + b_off, offsets supported in [0,1].
struct BeamCoeffs {
    CompactCoeff a_off;
    CompactCoeff b_off;

    double a(double x) const { return 1.0 + a_off(x); }
    double b(double x) const { return 1.0 + b_off(x); }
    double da(double x) const;
    double db(double x) const;
    std::vector<double> breakpoints() const;
    // Positivity, the x=0 constraint and C^3 matching at every breakpoint.
    void validate() const;
};

// t(x) = int_0^x (b/a)^{1/4} and its inverse.
class BeamMap {
public:
    explicit BeamMap(const BeamCoeffs& beam);
    double t_of_x(double x) const;
    double x_of_t(double t) const;
    double gamma() const { return tb_.back(); }
    const std::vector<double>& x_breaks() const { return xb_; }
    const std::vector<double>& t_breaks() const { return tb_; }

private:
    double rate(double x) const;
    double partial(std::size_t i, double x) const;

    BeamCoeffs beam_;
    std::vector<double> xb_, tb_;
};

struct LiouvilleData {
    CoeffPair pq;
    CompactCoeff alpha;
    CompactCoeff beta;
    CompactCoeff kappa;
};

LiouvilleData liouville_data(const BeamCoeffs& beam, int grid_order = 64);
CoeffPair liouville_transform(const BeamCoeffs& beam, int grid_order = 64);
double kappa_integral(const BeamCoeffs& beam, int grid_order = 64);

// q = p'' + p^2.
CompactCoeff square_case_q(const CompactCoeff& p);

}  // namespace beamres
