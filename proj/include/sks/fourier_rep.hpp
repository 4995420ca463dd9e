#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sks/multi_index.hpp"

namespace sks {

// Sparse trigonometric polynomial: frequency -> complex coefficient.
// Terms are kept sorted lexicographically. truncation_tail records the
// certified coefficient mass dropped when an infinite series was cut off.
class FourierRep {
public:
    explicit FourierRep(int dim);

    int dim() const { return dim_; }
    std::size_t size() const { return coeffs_.size(); }
    std::span<const std::int64_t> freq(std::size_t i) const;
    MultiIndex freq_index(std::size_t i) const;
    std::complex<double> coeff(std::size_t i) const { return coeffs_[i]; }

    void add(const MultiIndex& m, std::complex<double> c);
    void finalize();  // sort, merge duplicates, drop exact zeros

    std::complex<double> coeff_at(const MultiIndex& m) const;  // 0 if absent
    std::complex<double> eval(const TorusPoint& x) const;
    double max_abs_freq() const;  // max |m_i| over all stored terms
    double coeff_abs_sum() const;
    void scale(std::complex<double> s);
    bool is_hermitian(double tol) const;
    bool empty() const { return coeffs_.empty(); }

    double truncation_tail = 0.0;

private:
    int dim_;
    bool finalized_ = true;
    std::vector<std::int64_t> freqs_;
    std::vector<std::complex<double>> coeffs_;
};

// JSON schema: {"d":..,"n":[..],"gamma":..,"norm":"..","truncation_tail":..,
//               "terms":[[m_1,...,m_d,re,im],...]}
struct RepMeta {
    int d = 0;
    std::vector<std::int64_t> n;
    double gamma = 0.0;
    std::string norm;
};

std::string rep_to_json(const FourierRep& rep, const RepMeta& meta);
FourierRep rep_from_json(const std::string& text, RepMeta* meta_out = nullptr);

}  // namespace sks
