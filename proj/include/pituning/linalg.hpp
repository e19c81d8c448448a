#pragma once

#include <Eigen/Dense>

namespace pituning {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

}  // namespace pituning
