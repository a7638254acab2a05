#pragma once

#include <array>

#include <Eigen/Core>

namespace shearspec {

/// Linear Lagrange triangle: barycentric gradients and local matrices.
template <typename Scalar>
struct P1Triangle {
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
  using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
  using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

  Eigen::Matrix<Scalar, 3, 2> grad;  // row i = grad N_i
  Scalar area;
  std::array<Vec2, 3> vertex;

  P1Triangle(const Vec2& a, const Vec2& b, const Vec2& c) : vertex{a, b, c} {
    const Scalar det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    area = det / Scalar(2);
    grad << b.y() - c.y(), c.x() - b.x(),
            c.y() - a.y(), a.x() - c.x(),
            a.y() - b.y(), b.x() - a.x();
    grad /= det;
  }

  Vec2 map(Scalar l1, Scalar l2) const {
    return (Scalar(1) - l1 - l2) * vertex[0] + l1 * vertex[1] + l2 * vertex[2];
  }
  Vec2 centroid() const { return (vertex[0] + vertex[1] + vertex[2]) / Scalar(3); }

  /// int grad N_i . C grad N_j for a constant coefficient C.
  Mat3 stiffness(const Mat2& coeff) const {
    Mat3 k = area * grad * coeff * grad.transpose();
    return (k + k.transpose()) / Scalar(2);
  }

  /// Exact mass matrix int N_i N_j.
  Mat3 mass() const {
    Mat3 m = Mat3::Constant(Scalar(1));
    m.diagonal().setConstant(Scalar(2));
    return m * (area / Scalar(12));
  }
};

/// Degree-5 seven-point rule on the reference triangle, barycentric
/// (l1, l2) and weights summing to 1.
struct TriangleQuadPoint {
  double l1, l2, weight;
};
const std::array<TriangleQuadPoint, 7>& triangle_rule7();

}  // namespace shearspec
