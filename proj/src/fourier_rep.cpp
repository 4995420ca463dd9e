#include "sks/fourier_rep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace sks {

FourierRep::FourierRep(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("FourierRep: dimension must be >= 1");
}

std::span<const std::int64_t> FourierRep::freq(std::size_t i) const {
    return {freqs_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

MultiIndex FourierRep::freq_index(std::size_t i) const {
    const auto f = freq(i);
    return MultiIndex(f.begin(), f.end());
}

void FourierRep::add(const MultiIndex& m, std::complex<double> c) {
    if (static_cast<int>(m.size()) != dim_) throw std::invalid_argument("FourierRep: frequency dimension mismatch");
    freqs_.insert(freqs_.end(), m.begin(), m.end());
    coeffs_.push_back(c);
    finalized_ = false;
}

void FourierRep::finalize() {
    const std::size_t n = coeffs_.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto cmp = [&](std::size_t a, std::size_t b) {
        const std::int64_t* fa = freqs_.data() + a * static_cast<std::size_t>(dim_);
        const std::int64_t* fb = freqs_.data() + b * static_cast<std::size_t>(dim_);
        return std::lexicographical_compare(fa, fa + dim_, fb, fb + dim_);
    };
    std::sort(order.begin(), order.end(), cmp);

    std::vector<std::int64_t> nf;
    std::vector<std::complex<double>> nc;
    nf.reserve(freqs_.size());
    nc.reserve(coeffs_.size());
    for (std::size_t idx : order) {
        const std::int64_t* f = freqs_.data() + idx * static_cast<std::size_t>(dim_);
        if (!nc.empty() &&
            std::equal(f, f + dim_, nf.data() + (nc.size() - 1) * static_cast<std::size_t>(dim_))) {
            nc.back() += coeffs_[idx];
        } else {
            nf.insert(nf.end(), f, f + dim_);
            nc.push_back(coeffs_[idx]);
        }
    }
    // drop exact zeros
    std::vector<std::int64_t> ff;
    std::vector<std::complex<double>> fc;
    for (std::size_t i = 0; i < nc.size(); ++i) {
        if (nc[i] == std::complex<double>(0.0, 0.0)) continue;
        const std::int64_t* f = nf.data() + i * static_cast<std::size_t>(dim_);
        ff.insert(ff.end(), f, f + dim_);
        fc.push_back(nc[i]);
    }
    freqs_ = std::move(ff);
    coeffs_ = std::move(fc);
    finalized_ = true;
}

std::complex<double> FourierRep::coeff_at(const MultiIndex& m) const {
    if (!finalized_) throw std::logic_error("FourierRep: finalize() before lookups");
    if (static_cast<int>(m.size()) != dim_) throw std::invalid_argument("FourierRep: frequency dimension mismatch");
    std::size_t lo = 0, hi = coeffs_.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const std::int64_t* f = freqs_.data() + mid * static_cast<std::size_t>(dim_);
        if (std::lexicographical_compare(f, f + dim_, m.data(), m.data() + dim_)) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo < coeffs_.size()) {
        const std::int64_t* f = freqs_.data() + lo * static_cast<std::size_t>(dim_);
        if (std::equal(f, f + dim_, m.data())) return coeffs_[lo];
    }
    return {0.0, 0.0};
}

std::complex<double> FourierRep::eval(const TorusPoint& x) const {
    if (x.dim() != dim_) throw std::invalid_argument("FourierRep: point dimension mismatch");
    std::complex<double> s{0.0, 0.0};
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        double ph = 0.0;
        const std::int64_t* f = freqs_.data() + i * static_cast<std::size_t>(dim_);
        for (int k = 0; k < dim_; ++k) ph += static_cast<double>(f[k]) * x.coords[static_cast<std::size_t>(k)];
        s += coeffs_[i] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return s;
}

double FourierRep::max_abs_freq() const {
    std::int64_t m = 0;
    for (std::int64_t v : freqs_) m = std::max(m, std::abs(v));
    return static_cast<double>(m);
}

double FourierRep::coeff_abs_sum() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::abs(c);
    return s;
}

void FourierRep::scale(std::complex<double> s) {
    for (auto& c : coeffs_) c *= s;
}

bool FourierRep::is_hermitian(double tol) const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const auto conj_at_neg = std::conj(coeff_at(negated(freq_index(i))));
        if (std::abs(coeffs_[i] - conj_at_neg) > tol) return false;
    }
    return true;
}

std::string rep_to_json(const FourierRep& rep, const RepMeta& meta) {
    nlohmann::json j;
    j["d"] = meta.d;
    j["n"] = meta.n;
    j["gamma"] = meta.gamma;
    j["norm"] = meta.norm;
    j["truncation_tail"] = rep.truncation_tail;
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t i = 0; i < rep.size(); ++i) {
        nlohmann::json t = nlohmann::json::array();
        for (std::int64_t v : rep.freq(i)) t.push_back(v);
        t.push_back(rep.coeff(i).real());
        t.push_back(rep.coeff(i).imag());
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j.dump();
}

FourierRep rep_from_json(const std::string& text, RepMeta* meta_out) {
    const nlohmann::json j = nlohmann::json::parse(text);
    const int d = j.at("d").get<int>();
    FourierRep rep(d);
    if (meta_out) {
        meta_out->d = d;
        meta_out->n = j.at("n").get<std::vector<std::int64_t>>();
        meta_out->gamma = j.at("gamma").get<double>();
        meta_out->norm = j.at("norm").get<std::string>();
    }
    rep.truncation_tail = j.value("truncation_tail", 0.0);
    for (const auto& t : j.at("terms")) {
        if (static_cast<int>(t.size()) != d + 2) throw std::invalid_argument("FourierRep: malformed term");
        MultiIndex m(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) m[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k)].get<std::int64_t>();
        rep.add(m, {t[static_cast<std::size_t>(d)].get<double>(), t[static_cast<std::size_t>(d) + 1].get<double>()});
    }
    rep.finalize();
    return rep;
}

}  // namespace sks
