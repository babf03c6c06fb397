#pragma once

#include "stabex/charexp.hpp"

#include <array>
#include <memory>
#include <vector>

namespace stabex::detail {

// Discrete Cauchy sums between two pairs of exponential rays sharing one step zeta:
//   out_t[j] = sum_r sign_r sum_k a_r[k] / (1 - s_{r,k} / t_{t,j})
// with sources s_{r,k} = exp(i theta_r + (s_lo + k) zeta) and targets
// t_{t,j} = exp(i phi_t + (t_lo + j) zeta). The kernel depends on k - j only, so the
// sums are linear convolutions done with FFTs.
class CauchyConv {
public:
    CauchyConv(double zeta, std::array<double, 2> src_angle, std::array<double, 2> src_sign, long s_lo, long s_hi,
               std::array<double, 2> tgt_angle, long t_lo, long t_hi);
    ~CauchyConv();
    CauchyConv(const CauchyConv&) = delete;
    CauchyConv& operator=(const CauchyConv&) = delete;

    std::size_t n_src() const { return ns_; }
    std::size_t n_tgt() const { return nt_; }
    std::size_t fft_size() const { return p_; }

    // a[r] has n_src() entries; returns two arrays of n_tgt() entries.
    std::array<std::vector<cplx>, 2> apply(const std::array<std::vector<cplx>, 2>& a) const;

private:
    struct Plans;
    std::size_t ns_, nt_, p_;
    std::array<double, 2> sign_;
    std::array<std::array<std::vector<cplx>, 2>, 2> khat_; // [src ray][tgt ray]
    std::unique_ptr<Plans> plans_;
};

// Smallest 2^a 3^b 5^c >= n.
std::size_t good_fft_size(std::size_t n);

} // namespace stabex::detail
