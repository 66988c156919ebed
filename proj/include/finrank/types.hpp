#pragma once

#include <complex>

#include <Eigen/Dense>

namespace finrank {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

}  // namespace finrank
