#pragma once

namespace sks {

// Upper incomplete gamma Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt for real s
// of either sign (x > 0 required when s <= 0).
double upper_incomplete_gamma(double s, double x);

// Exponential integral E_1(x) = Gamma(0, x), x > 0.
double exp_integral_e1(double x);

// int_0^eta t^{nu-1} e^{-beta/t} dt for nu > 0, beta >= 0, eta > 0.
// Equals beta^nu * Gamma(-nu, beta/eta) for beta > 0 and eta^nu/nu at beta = 0;
// evaluated in a form that stays accurate as beta -> 0.
double truncated_theta_integral(double nu, double beta, double eta);

}  // namespace sks
