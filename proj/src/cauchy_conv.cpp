#include "cauchy_conv.hpp"

#include "stabex/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace stabex::detail {

namespace {

// planner calls are not thread safe; execution on separate buffers is
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

} // namespace

std::size_t good_fft_size(std::size_t n)
{
    std::size_t best = 1;
    while (best < n) best *= 2;
    for (std::size_t a = 1; a < 2 * n; a *= 2)
        for (std::size_t b = a; b < 2 * n; b *= 3)
            for (std::size_t c = b; c < 2 * n; c *= 5)
                if (c >= n && c < best) best = c;
    return best;
}

struct CauchyConv::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

CauchyConv::CauchyConv(double zeta, std::array<double, 2> src_angle, std::array<double, 2> src_sign, long s_lo,
                       long s_hi, std::array<double, 2> tgt_angle, long t_lo, long t_hi)
    : sign_(src_sign), plans_(std::make_unique<Plans>())
{
    if (s_hi < s_lo || t_hi < t_lo) throw DomainError("CauchyConv: empty node range");
    ns_ = static_cast<std::size_t>(s_hi - s_lo + 1);
    nt_ = static_cast<std::size_t>(t_hi - t_lo + 1);
    p_ = good_fft_size(ns_ + nt_ - 1);

    std::vector<cplx> buf(p_), out(p_);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plans_->fwd = fftw_plan_dft_1d(static_cast<int>(p_), as_fftw(buf.data()), as_fftw(out.data()), FFTW_FORWARD,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_->bwd = fftw_plan_dft_1d(static_cast<int>(p_), as_fftw(buf.data()), as_fftw(out.data()), FFTW_BACKWARD,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (!plans_->fwd || !plans_->bwd) throw Error("FFTW planning failed");

    // G[n + ns - 1] = K(s_lo - t_lo - n), n in [-(ns-1), nt-1]
    for (int r = 0; r < 2; ++r) {
        for (int t = 0; t < 2; ++t) {
            std::fill(buf.begin(), buf.end(), cplx(0.0));
            cplx rot = std::polar(1.0, src_angle[r] - tgt_angle[t]);
            long ns = static_cast<long>(ns_), nt = static_cast<long>(nt_);
            for (long n = -(ns - 1); n <= nt - 1; ++n) {
                double dm = static_cast<double>(s_lo - t_lo - n);
                double e = dm * zeta;
                buf[static_cast<std::size_t>(n + ns - 1)] = e > 700.0 ? cplx(0.0) : 1.0 / (1.0 - rot * std::exp(e));
            }
            fftw_execute_dft(plans_->fwd, as_fftw(buf.data()), as_fftw(out.data()));
            khat_[r][t] = out;
        }
    }
}

CauchyConv::~CauchyConv()
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plans_->fwd) fftw_destroy_plan(plans_->fwd);
    if (plans_->bwd) fftw_destroy_plan(plans_->bwd);
}

std::array<std::vector<cplx>, 2> CauchyConv::apply(const std::array<std::vector<cplx>, 2>& a) const
{
    std::array<std::vector<cplx>, 2> ahat;
    std::vector<cplx> buf(p_);
    for (int r = 0; r < 2; ++r) {
        if (a[r].size() != ns_) throw DomainError("CauchyConv: source size mismatch");
        std::fill(buf.begin(), buf.end(), cplx(0.0));
        for (std::size_t k = 0; k < ns_; ++k) buf[k] = sign_[r] * a[r][k];
        ahat[r].resize(p_);
        fftw_execute_dft(plans_->fwd, as_fftw(buf.data()), as_fftw(ahat[r].data()));
    }
    std::array<std::vector<cplx>, 2> res;
    std::vector<cplx> out(p_);
    double scale = 1.0 / static_cast<double>(p_);
    for (int t = 0; t < 2; ++t) {
        for (std::size_t i = 0; i < p_; ++i) buf[i] = ahat[0][i] * khat_[0][t][i] + ahat[1][i] * khat_[1][t][i];
        fftw_execute_dft(plans_->bwd, as_fftw(buf.data()), as_fftw(out.data()));
        res[t].resize(nt_);
        for (std::size_t j = 0; j < nt_; ++j) res[t][j] = out[j + ns_ - 1] * scale;
    }
    return res;
}

} // namespace stabex::detail
