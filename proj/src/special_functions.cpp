#include "sks/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sks {

namespace {

constexpr double kEulerGamma = 0.5772156649015328606065120900824024;
constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

// Lower incomplete gamma by series, s > 0.
double lower_series(double s, double x) {
    double ap = s;
    double sum = 1.0 / s;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) {
            return sum * std::exp(-x + s * std::log(x));
        }
    }
    throw std::runtime_error("lower incomplete gamma: series failed to converge");
}

// Upper incomplete gamma by Lentz continued fraction; reliable for x >~ 1
// and also for x >= s + 1 when s > 0.
double upper_cf(double s, double x) {
    constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - s;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            return std::exp(-x + s * std::log(x)) * h;
        }
    }
    throw std::runtime_error("upper incomplete gamma: continued fraction failed to converge");
}

double e1_series(double x) {
    double sum = -kEulerGamma - std::log(x);
    double term = 1.0;
    for (int k = 1; k <= kMaxIter; ++k) {
        term *= -x / static_cast<double>(k);
        const double add = -term / static_cast<double>(k);
        sum += add;
        if (std::abs(add) < kEps * (std::abs(sum) + 1e-300)) return sum;
    }
    throw std::runtime_error("E1: series failed to converge");
}

// Gamma(-n, x) for integer n >= 1 and small-to-moderate x.
double upper_gamma_neg_int(int n, double x) {
    double inner = 0.0;
    double fact = 1.0;       // j!
    double xpow = 1.0 / x;   // x^{-(j+1)}
    double sign = 1.0;
    for (int j = 0; j < n; ++j) {
        if (j > 0) {
            fact *= static_cast<double>(j);
            xpow /= x;
            sign = -sign;
        }
        inner += sign * fact * xpow;
    }
    const double bracket = exp_integral_e1(x) - std::exp(-x) * inner;
    double nfact = 1.0;
    for (int j = 2; j <= n; ++j) nfact *= static_cast<double>(j);
    const double front = (n % 2 == 0 ? 1.0 : -1.0) / nfact;
    return front * bracket;
}

}  // namespace

double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("E1: argument must be positive");
    if (x < 1.5) return e1_series(x);
    return upper_cf(0.0, x);
}

double upper_incomplete_gamma(double s, double x) {
    if (x < 0.0 || !std::isfinite(x) || !std::isfinite(s)) {
        throw std::invalid_argument("upper incomplete gamma: bad arguments");
    }
    if (x == 0.0) {
        if (s <= 0.0) throw std::invalid_argument("upper incomplete gamma: divergent at x=0 for s<=0");
        return std::tgamma(s);
    }
    if (s > 0.0) {
        if (x < s + 1.0) return std::tgamma(s) - lower_series(s, x);
        return upper_cf(s, x);
    }
    if (x >= 1.5) return upper_cf(s, x);

    const double r = std::round(s);
    if (std::abs(s - r) < 1e-9) {
        const int n = static_cast<int>(-r);
        if (n == 0) return e1_series(x);
        return upper_gamma_neg_int(n, x);
    }

    if (x >= 0.4) {
        // walk down from a positive order
        const double s0 = s + std::ceil(-s);
        double g = std::tgamma(s0) - lower_series(s0, x);
        double t = s0;
        while (t > s + 0.5) {
            t -= 1.0;
            g = (g - std::exp(-x + t * std::log(x))) / t;
        }
        return g;
    }

    // small x, negative non-integer s: Gamma(s) - x^s sum_k (-x)^k / (k! (k+s))
    double sum = 0.0;
    double zk = 1.0;  // (-x)^k / k!
    for (int k = 0; k <= kMaxIter; ++k) {
        if (k > 0) zk *= -x / static_cast<double>(k);
        const double add = zk / (static_cast<double>(k) + s);
        sum += add;
        if (std::abs(add) < kEps * (std::abs(sum) + 1e-300) && k > 2) break;
    }
    return std::tgamma(s) - std::exp(s * std::log(x)) * sum;
}

double truncated_theta_integral(double nu, double beta, double eta) {
    if (!(nu > 0.0) || !(eta > 0.0) || beta < 0.0) {
        throw std::invalid_argument("truncated_theta_integral: bad arguments");
    }
    if (nu < 1e-3) {
        throw std::invalid_argument("truncated_theta_integral: decay exponent too close to the dimension");
    }
    if (beta < 1e-290) return std::pow(eta, nu) / nu;
    const double z = beta / eta;
    if (z > 740.0) return 0.0;
    if (z >= 0.4) return std::pow(beta, nu) * upper_incomplete_gamma(-nu, z);

    const double rn = std::round(nu);
    const double dist = std::abs(nu - rn);
    if (dist < 1e-8 && rn >= 1.0) {
        // integer order: beta^n * Gamma(-n, z) with the powers fused to avoid
        // forming huge intermediates at tiny beta
        const int n = static_cast<int>(rn);
        double inner = 0.0;
        double fact = 1.0;
        double sign = 1.0;
        double bpow = std::pow(beta, n - 1);  // beta^{n-1-j}
        double epow = eta;                    // eta^{j+1}
        for (int j = 0; j < n; ++j) {
            if (j > 0) {
                fact *= static_cast<double>(j);
                sign = -sign;
                bpow /= beta;
                epow *= eta;
            }
            inner += sign * fact * bpow * epow;
        }
        const double bracket = std::pow(beta, n) * exp_integral_e1(z) - std::exp(-z) * inner;
        double nfact = 1.0;
        for (int j = 2; j <= n; ++j) nfact *= static_cast<double>(j);
        return ((n % 2 == 0) ? 1.0 : -1.0) * bracket / nfact;
    }
    if (dist < 1e-5) {
        throw std::invalid_argument(
            "truncated_theta_integral: order within 1e-5 of an integer but not exactly integral; "
            "perturb the decay exponent");
    }

    // non-integer order, small z: beta^nu Gamma(-nu) - eta^nu sum_k (-z)^k/(k!(k-nu))
    double sum = 0.0;
    double zk = 1.0;
    for (int k = 0; k <= kMaxIter; ++k) {
        if (k > 0) zk *= -z / static_cast<double>(k);
        const double add = zk / (static_cast<double>(k) - nu);
        sum += add;
        if (std::abs(add) < kEps * (std::abs(sum) + 1e-300) && k > 2) break;
    }
    return std::pow(beta, nu) * std::tgamma(-nu) - std::pow(eta, nu) * sum;
}

}  // namespace sks
