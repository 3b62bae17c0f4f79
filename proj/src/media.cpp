#include "tlbie/media.hpp"

#include <cmath>
#include <sstream>

namespace tlbie {

double WaveNumbers::identity_residual() const
{
    const cplx ratio = k0 / k1;
    return std::abs(lambda_E * lambda_H - ratio) / std::abs(ratio);
}

cplx wave_sqrt(cplx z)
{
    cplx s = std::sqrt(z);
    if (s.real() < 0.0) s = -s;
    if (s.real() == 0.0 && s.imag() < 0.0) s = -s;
    return s;
}

static void check_medium(const MediumParams& m, const char* name, std::ostringstream& err)
{
    if (!(m.epsilon > 0.0)) err << name << ": epsilon must be positive; ";
    if (!(m.mu > 0.0)) err << name << ": mu must be positive; ";
    if (!(m.sigma >= 0.0)) err << name << ": sigma must be nonnegative; ";
    if (!(m.omega > 0.0)) err << name << ": omega must be positive; ";
}

WaveNumbers derive_wavenumbers(const MediumParams& outer, const MediumParams& inner,
                               double lambda_imp)
{
    std::ostringstream err;
    check_medium(outer, "outer", err);
    check_medium(inner, "inner", err);
    if (outer.sigma != 0.0) err << "outer: the exterior medium must have sigma = 0; ";
    if (outer.omega != inner.omega) err << "both media must share omega; ";
    if (!err.str().empty()) throw Error(err.str());

    const double w = outer.omega;
    const cplx eps1 = cplx(inner.epsilon, inner.sigma / w);
    WaveNumbers out;
    out.k0 = wave_sqrt(cplx(outer.epsilon * outer.mu * w * w, 0.0));
    out.k1 = wave_sqrt(eps1 * inner.mu * w * w);
    out.lambda_E = std::sqrt(cplx(outer.epsilon, 0.0) / eps1);
    out.lambda_H = std::sqrt(cplx(outer.mu / inner.mu, 0.0));
    out.lambda_imp = lambda_imp;
    check_wavenumbers(out);
    return out;
}

WaveNumbers direct_wavenumbers(cplx k0, cplx k1, cplx lambda_E, cplx lambda_H, double lambda_imp)
{
    WaveNumbers out{k0, k1, lambda_E, lambda_H, lambda_imp};
    check_wavenumbers(out);
    return out;
}

void check_wavenumbers(const WaveNumbers& w)
{
    std::ostringstream err;
    if (!(w.k0.real() > 0.0) || w.k0.imag() != 0.0) err << "k0 must be real and positive; ";
    if (!(w.k1.real() > 0.0) || w.k1.imag() < 0.0) err << "k1 needs Re k1 > 0 and Im k1 >= 0; ";
    if (!(w.lambda_imp > 0.0)) err << "impedance constant must be positive; ";
    if (err.str().empty() && w.identity_residual() > 1e-12)
        err << "lambda_E*lambda_H differs from k0/k1; ";
    if (!err.str().empty()) throw Error(err.str());
}

}  // namespace tlbie
