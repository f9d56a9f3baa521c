#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace cfh {

// Projection of R^4 sample data to R^3 for mesh output: either dropping one
// axis or applying a custom 3x4 matrix.
struct Projection {
    Eigen::Matrix<double, 3, 4> M;
    std::string description;

    static Projection drop_axis(int axis);
    static Projection matrix(const Eigen::Matrix<double, 3, 4>& m);
    Eigen::Vector3d apply(const Eigen::Vector4d& p) const { return M * p; }
};

// Quad mesh over an n1 x n2 grid of R^4 points (row-major), projected to R^3.
std::string obj_quad_mesh(const std::vector<Eigen::Vector4d>& grid, int n1, int n2,
                          const Projection& proj);
std::string ply_quad_mesh(const std::vector<Eigen::Vector4d>& grid, int n1, int n2,
                          const Projection& proj);

// Polyline output ("l" elements), one object per line.
std::string obj_polylines(const std::vector<std::vector<Eigen::Vector4d>>& lines,
                          const Projection& proj);

// Reads back the vertices of the first polyline from OBJ text (projected
// coordinates, fourth component zero-filled); round-trip checks only.
std::vector<Eigen::Vector4d> parse_obj_polyline(const std::string& text);

}  // namespace cfh
