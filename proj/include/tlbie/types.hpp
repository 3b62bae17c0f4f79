#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tlbie {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using MatR = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;
using VecR = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

/// Raised for invalid inputs: bad descriptors, violated preconditions, malformed files.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline CVec3 to_c(const Vec3& v) { return v.cast<cplx>(); }

/// Cross product of complex vectors. Eigen's cross() conjugates complex results.
inline CVec3 cross(const CVec3& a, const CVec3& b)
{
    return CVec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

/// Real matrix times complex matrix through two real GEMMs.
MatC real_times_complex(const MatR& a, const MatC& b);
/// Complex matrix times real matrix through two real GEMMs.
MatC complex_times_real(const MatC& a, const MatR& b);

}  // namespace tlbie
