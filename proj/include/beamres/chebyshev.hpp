#pragma once

#include <functional>
#include <vector>

namespace beamres::cheb {

// Chebyshev points of the second kind on [a,b], ascending.
std::vector<double> lobatto_points(double a, double b, int n);

// Coefficients of the degree n-1 interpolant through values at lobatto_points(a,b,n).
std::vector<double> fit_values(const std::vector<double>& values);

std::vector<double> fit(const std::function<double(double)>& f, double a, double b, int n);

// Clenshaw on [a,b].
double eval(const std::vector<double>& c, double a, double b, double x);

// d/dx of the series on [a,b].
std::vector<double> derivative(const std::vector<double>& c, double a, double b);

double integral(const std::vector<double>& c, double a, double b);

// Drop trailing coefficients below tol * max|c|, keeping at least one.
void trim(std::vector<double>& c, double tol = 0.0);

}  // namespace beamres::cheb
