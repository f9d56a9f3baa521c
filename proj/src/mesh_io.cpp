#include "cfh/mesh_io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cfh {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string header_comment(const Projection& proj, char marker) {
    std::ostringstream os;
    os << marker << " projection: [";
    for (int r = 0; r < 3; ++r) {
        os << "[";
        for (int c = 0; c < 4; ++c) {
            os << fmt(proj.M(r, c));
            if (c < 3) os << ",";
        }
        os << "]";
        if (r < 2) os << ",";
    }
    os << "]\n";
    return os.str();
}

}  // namespace

Projection Projection::drop_axis(int axis) {
    if (axis < 0 || axis > 3) throw std::invalid_argument("projection axis out of range");
    Projection p;
    p.M.setZero();
    int r = 0;
    for (int c = 0; c < 4; ++c) {
        if (c == axis) continue;
        p.M(r++, c) = 1.0;
    }
    p.description = "drop:" + std::to_string(axis);
    return p;
}

Projection Projection::matrix(const Eigen::Matrix<double, 3, 4>& m) {
    Projection p;
    p.M = m;
    p.description = "matrix";
    return p;
}

std::string obj_quad_mesh(const std::vector<Eigen::Vector4d>& grid, int n1, int n2,
                          const Projection& proj) {
    if (int(grid.size()) != n1 * n2) throw std::invalid_argument("grid size mismatch");
    std::ostringstream os;
    os << header_comment(proj, '#');
    for (const auto& p : grid) {
        Eigen::Vector3d q = proj.apply(p);
        os << "v " << fmt(q[0]) << " " << fmt(q[1]) << " " << fmt(q[2]) << "\n";
    }
    for (int i = 0; i + 1 < n1; ++i)
        for (int j = 0; j + 1 < n2; ++j) {
            int a = i * n2 + j + 1;  // OBJ indices are 1-based
            int b = i * n2 + j + 2;
            int c = (i + 1) * n2 + j + 2;
            int d = (i + 1) * n2 + j + 1;
            os << "f " << a << " " << b << " " << c << " " << d << "\n";
        }
    return os.str();
}

std::string ply_quad_mesh(const std::vector<Eigen::Vector4d>& grid, int n1, int n2,
                          const Projection& proj) {
    if (int(grid.size()) != n1 * n2) throw std::invalid_argument("grid size mismatch");
    std::ostringstream os;
    int nf = (n1 - 1) * (n2 - 1);
    os << "ply\nformat ascii 1.0\n";
    os << "comment projection: " << proj.description << "\n";
    os << "element vertex " << grid.size() << "\n";
    os << "property double x\nproperty double y\nproperty double z\n";
    os << "element face " << nf << "\n";
    os << "property list uchar int vertex_indices\nend_header\n";
    for (const auto& p : grid) {
        Eigen::Vector3d q = proj.apply(p);
        os << fmt(q[0]) << " " << fmt(q[1]) << " " << fmt(q[2]) << "\n";
    }
    for (int i = 0; i + 1 < n1; ++i)
        for (int j = 0; j + 1 < n2; ++j) {
            int a = i * n2 + j;
            os << "4 " << a << " " << a + 1 << " " << (i + 1) * n2 + j + 1 << " "
               << (i + 1) * n2 + j << "\n";
        }
    return os.str();
}

std::string obj_polylines(const std::vector<std::vector<Eigen::Vector4d>>& lines,
                          const Projection& proj) {
    std::ostringstream os;
    os << header_comment(proj, '#');
    int base = 1;
    for (size_t li = 0; li < lines.size(); ++li) {
        os << "o line_" << li << "\n";
        for (const auto& p : lines[li]) {
            Eigen::Vector3d q = proj.apply(p);
            os << "v " << fmt(q[0]) << " " << fmt(q[1]) << " " << fmt(q[2]) << "\n";
        }
        os << "l";
        for (size_t k = 0; k < lines[li].size(); ++k) os << " " << base + int(k);
        os << "\n";
        base += int(lines[li].size());
    }
    return os.str();
}

std::vector<Eigen::Vector4d> parse_obj_polyline(const std::string& text) {
    std::vector<Eigen::Vector4d> pts;
    std::istringstream is(text);
    std::string line;
    bool past_first_object = false;
    int objects_seen = 0;
    while (std::getline(is, line)) {
        if (line.rfind("o ", 0) == 0) {
            ++objects_seen;
            if (objects_seen > 1) past_first_object = true;
        }
        if (past_first_object) break;
        if (line.rfind("v ", 0) == 0) {
            std::istringstream ls(line.substr(2));
            double x, y, z;
            ls >> x >> y >> z;
            pts.push_back(Eigen::Vector4d(x, y, z, 0.0));
        }
    }
    return pts;
}

}  // namespace cfh
