#include "tlbie/types.hpp"

namespace tlbie {

MatC real_times_complex(const MatR& a, const MatC& b)
{
    const Eigen::Index n = b.cols();
    MatR parts(b.rows(), 2 * n);
    parts.leftCols(n) = b.real();
    parts.rightCols(n) = b.imag();
    MatR prod = a * parts;
    MatC out(a.rows(), n);
    out.real() = prod.leftCols(n);
    out.imag() = prod.rightCols(n);
    return out;
}

MatC complex_times_real(const MatC& a, const MatR& b)
{
    const Eigen::Index m = a.rows();
    MatR parts(2 * m, a.cols());
    parts.topRows(m) = a.real();
    parts.bottomRows(m) = a.imag();
    MatR prod = parts * b;
    MatC out(m, b.cols());
    out.real() = prod.topRows(m);
    out.imag() = prod.bottomRows(m);
    return out;
}

}  // namespace tlbie
