#pragma once

#include "stabex/charexp.hpp"
#include "stabex/quadrature.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace stabex {

namespace detail {
class CauchyConv;
}

// One ray xi = exp(i angle + m zeta), m in [m_lo, m_hi], traversed with orientation sign.
struct RayGrid {
    double angle = 0.0;
    double sign = 1.0;
    long m_lo = 0;
    long m_hi = -1;
    std::vector<cplx> xi;
    std::vector<cplx> psi;

    std::size_t size() const { return xi.size(); }
};

// Contour L+ (rays at omega and pi - omega) or L- (rays at omega and -pi - omega).
// [out_lo, out_hi] is the sub-range where the family serves as an outer integration variable.
struct RayFamily {
    double omega = 0.0;
    double d = 0.0; // strip half-width in y
    std::array<RayGrid, 2> rays;
    long out_lo = 0;
    long out_hi = -1;

    bool has_outer() const { return out_hi >= out_lo; }
    std::size_t outer_offset() const { return static_cast<std::size_t>(out_lo - rays[0].m_lo); }
    std::size_t outer_size() const { return has_outer() ? static_cast<std::size_t>(out_hi - out_lo + 1) : 0; }
};

struct OuterNeed {
    bool used = false;
    double gap = 0.0;      // integrand carries exp(-gap |Im xi|) along the family
    double right_rate = 0; // power decay rate in y when gap = 0 (0: use the factor's own exponent)
    double left_rate = 0;  // decay rate as y -> -inf (0: min(1, alpha))
};

struct GridRequest {
    double eps = 1e-10;     // accuracy wanted for transform values
    bool complex_q = false; // q on a sinh contour
    double q_min = 1.0;     // smallest |q| in use
    OuterNeed minus;        // outer integrals over L-
    OuterNeed plus;         // outer integrals over L+
    double probe_rho = 0.0; // extend source ranges so single-point factors are accurate up to this |xi|
    std::optional<double> omega_plus;
    std::optional<double> omega_minus;
};

struct WhfGrids {
    StableParams params;
    Regime regime;
    ConeSpec cone;
    GridRequest request;
    double zeta = 0.0;
    double eps_inner = 0.0;
    RayFamily plus;  // L+: rays pp (omega_plus) and pm (pi - omega_plus)
    RayFamily minus; // L-: rays mp (omega_minus) and mm (-pi - omega_minus)
    std::shared_ptr<const detail::CauchyConv> conv_to_minus; // sources L+, targets L- outer
    std::shared_ptr<const detail::CauchyConv> conv_to_plus;  // sources L-, targets L+ outer

    double omega_plus() const { return plus.omega; }
    double omega_minus() const { return minus.omega; }
    long node_count_plus() const { return static_cast<long>(plus.rays[0].size()); }
    long node_count_minus() const { return static_cast<long>(minus.rays[0].size()); }
};

// Factor values for one q on the outer sub-ranges.
struct QFactors {
    cplx q;
    double a_plus = 0.0;
    double a_minus = 0.0;
    std::array<std::vector<cplx>, 2> phi_plus_mod_on_minus; // phi+_mod on L- outer nodes
    std::array<std::vector<cplx>, 2> phi_minus_mod_on_plus; // phi-_mod on L+ outer nodes
};

struct WhfValue {
    cplx phi_plus;
    cplx phi_minus;
    double a_plus = 0.0;
    double a_minus = 0.0;
    double delta_plus = 0.0;
    double delta_minus = 0.0;
};

enum class Side { Plus, Minus };

WhfGrids build_grids(const StableParams& p, const ConeSpec& cone, const GridRequest& req);

// Factors on all outer nodes; uses FFT convolutions.
QFactors compute_factors(const WhfGrids& g, cplx q);

// Same values by compensated direct summation, O(N^2); slower but free of FFT round-off.
QFactors compute_factors_direct(const WhfGrids& g, cplx q, int threads = 1);

// Thread-safe memo of compute_factors keyed by q.
class FactorCache {
public:
    explicit FactorCache(std::shared_ptr<const WhfGrids> g, std::size_t capacity = 4096);
    std::shared_ptr<const QFactors> get(cplx q);
    const WhfGrids& grids() const { return *g_; }
    std::size_t size() const;

private:
    std::shared_ptr<const WhfGrids> g_;
    std::size_t cap_;
    mutable std::mutex mu_;
    std::map<std::pair<double, double>, std::shared_ptr<const QFactors>> memo_;
};

// Single-point factors by direct summation over the source family.
cplx phi_plus(const StableParams& p, const WhfGrids& g, cplx q, cplx xi);
cplx phi_minus(const StableParams& p, const WhfGrids& g, cplx q, cplx xi);
cplx phi_opposite_via_identity(const StableParams& p, cplx q, cplx xi, cplx phi_known);
cplx phi_mod(const StableParams& p, const WhfGrids& g, cplx q, cplx xi, Side side);

// Large-|xi| limit of the factor on the given side; 0 when its exponent is positive.
double asym_constant(const StableParams& p, double q, Side side, double eps = 1e-13);

// Decay exponents used for planning (alpha_plus / alpha_minus, or a default where only existence is known).
double decay_exponent(const Regime& r, const StableParams& p, Side side);

WhfValue whf_value(const StableParams& p, const WhfGrids& g, cplx q, cplx xi);

// Log(q + psi) - Log(q) along one ray, with the branch continuity check.
std::vector<cplx> log_ratio_on_ray(const RayGrid& ray, cplx q);

} // namespace stabex
