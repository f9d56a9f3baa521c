#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace cfh {

namespace jet_detail {

constexpr int kVars = 3;
constexpr int kDeg = 4;
constexpr int kTerms = 35;  // monomials x^i y^j z^k with i+j+k <= 4

struct Tables {
    int exp[kTerms][3] = {};
    int deg[kTerms] = {};
    int idx[kDeg + 1][kDeg + 1][kDeg + 1] = {};
    std::int8_t prod[kTerms][kTerms] = {};
};

constexpr Tables make_tables() {
    Tables t{};
    int n = 0;
    for (int d = 0; d <= kDeg; ++d)
        for (int i = d; i >= 0; --i)
            for (int j = d - i; j >= 0; --j) {
                int k = d - i - j;
                t.exp[n][0] = i;
                t.exp[n][1] = j;
                t.exp[n][2] = k;
                t.deg[n] = d;
                t.idx[i][j][k] = n;
                ++n;
            }
    for (int p = 0; p < kTerms; ++p)
        for (int q = 0; q < kTerms; ++q) {
            if (t.deg[p] + t.deg[q] > kDeg) {
                t.prod[p][q] = -1;
            } else {
                t.prod[p][q] = static_cast<std::int8_t>(
                    t.idx[t.exp[p][0] + t.exp[q][0]][t.exp[p][1] + t.exp[q][1]]
                         [t.exp[p][2] + t.exp[q][2]]);
            }
        }
    return t;
}

inline constexpr Tables tables = make_tables();

constexpr double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace jet_detail

// Truncated Taylor polynomial in three variables, total degree <= 4.
// Coefficient storage carries the factorial normalization:
//   coef(i,j,k) = (d^{i+j+k} f / dx1^i dx2^j dx3^k) / (i! j! k!).
class Jet {
public:
    static constexpr int kDeg = jet_detail::kDeg;
    static constexpr int kTerms = jet_detail::kTerms;

    std::array<double, kTerms> c{};

    Jet() = default;

    static Jet constant(double v) {
        Jet j;
        j.c[0] = v;
        return j;
    }

    // Seed for the coordinate variable on the given axis (0,1,2).
    static Jet variable(int axis, double value) {
        Jet j;
        j.c[0] = value;
        j.c[1 + axis] = 1.0;
        return j;
    }

    double value() const { return c[0]; }

    double coef(int i, int j, int k) const { return c[jet_detail::tables.idx[i][j][k]]; }

    // True partial derivative d^{i+j+k} f / dx1^i dx2^j dx3^k.
    double deriv(int i, int j, int k) const {
        using namespace jet_detail;
        return c[tables.idx[i][j][k]] * factorial(i) * factorial(j) * factorial(k);
    }

    // The jet of the partial derivative along one axis (content drops to degree 3).
    Jet derivative(int axis) const {
        using namespace jet_detail;
        Jet out;
        for (int p = 0; p < kTerms; ++p) {
            int e[3] = {tables.exp[p][0], tables.exp[p][1], tables.exp[p][2]};
            if (e[axis] == 0) continue;
            double v = c[p] * e[axis];
            e[axis] -= 1;
            out.c[tables.idx[e[0]][e[1]][e[2]]] += v;
        }
        return out;
    }

    Jet& operator+=(const Jet& o) {
        for (int i = 0; i < kTerms; ++i) c[i] += o.c[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int i = 0; i < kTerms; ++i) c[i] -= o.c[i];
        return *this;
    }
    Jet& operator*=(double s) {
        for (int i = 0; i < kTerms; ++i) c[i] *= s;
        return *this;
    }

    Jet operator-() const {
        Jet out = *this;
        for (auto& v : out.c) v = -v;
        return out;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double b) {
        a.c[0] += b;
        return a;
    }
    friend Jet operator+(double b, Jet a) {
        a.c[0] += b;
        return a;
    }
    friend Jet operator-(Jet a, double b) {
        a.c[0] -= b;
        return a;
    }
    friend Jet operator-(double b, const Jet& a) { return Jet::constant(b) - a; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        using namespace jet_detail;
        Jet out;
        for (int p = 0; p < kTerms; ++p) {
            double av = a.c[p];
            if (av == 0.0) continue;
            const auto& row = tables.prod[p];
            for (int q = 0; q < kTerms; ++q) {
                int o = row[q];
                if (o >= 0) out.c[o] += av * b.c[q];
            }
        }
        return out;
    }

    // g(u) for a univariate g given its normalized derivatives d[n] = g^{(n)}(u0)/n!.
    static Jet apply_series(const Jet& u, const std::array<double, kDeg + 1>& d) {
        Jet uh = u;
        uh.c[0] = 0.0;
        Jet r = Jet::constant(d[kDeg]);
        for (int n = kDeg - 1; n >= 0; --n) r = r * uh + Jet::constant(d[n]);
        return r;
    }
};

inline Jet jrecip(const Jet& u) {
    double u0 = u.value();
    if (u0 == 0.0) throw std::domain_error("jet reciprocal at zero");
    double i = 1.0 / u0;
    return Jet::apply_series(u, {i, -i * i, i * i * i, -i * i * i * i, i * i * i * i * i});
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * jrecip(b); }
inline Jet operator/(double a, const Jet& b) { return jrecip(b) * a; }

inline Jet jsqrt(const Jet& u) {
    double u0 = u.value();
    if (u0 <= 0.0) throw std::domain_error("jet sqrt of non-positive value");
    double s = std::sqrt(u0);
    double i = 1.0 / u0;
    return Jet::apply_series(u, {s, 0.5 * s * i, -0.125 * s * i * i, 0.0625 * s * i * i * i,
                                 -0.0390625 * s * i * i * i * i});
}

inline Jet jexp(const Jet& u) {
    double e = std::exp(u.value());
    return Jet::apply_series(u, {e, e, e / 2.0, e / 6.0, e / 24.0});
}

inline Jet jlog(const Jet& u) {
    double u0 = u.value();
    if (u0 <= 0.0) throw std::domain_error("jet log of non-positive value");
    double i = 1.0 / u0;
    return Jet::apply_series(u, {std::log(u0), i, -i * i / 2.0, i * i * i / 3.0, -i * i * i * i / 4.0});
}

inline Jet jsin(const Jet& u) {
    double s = std::sin(u.value()), c = std::cos(u.value());
    return Jet::apply_series(u, {s, c, -s / 2.0, -c / 6.0, s / 24.0});
}

inline Jet jcos(const Jet& u) {
    double s = std::sin(u.value()), c = std::cos(u.value());
    return Jet::apply_series(u, {c, -s, -c / 2.0, s / 6.0, c / 24.0});
}

inline Jet jsinh(const Jet& u) {
    double s = std::sinh(u.value()), c = std::cosh(u.value());
    return Jet::apply_series(u, {s, c, s / 2.0, c / 6.0, s / 24.0});
}

inline Jet jcosh(const Jet& u) {
    double s = std::sinh(u.value()), c = std::cosh(u.value());
    return Jet::apply_series(u, {c, s, c / 2.0, s / 6.0, c / 24.0});
}

inline Jet jpow(const Jet& u, double p) { return jexp(jlog(u) * p); }

// Small fixed-capacity vector of jets for ambient coordinates (dimension <= 5).
struct JVec {
    int n = 0;
    std::array<Jet, 5> v{};

    JVec() = default;
    explicit JVec(int dim) : n(dim) {}

    Jet& operator[](int i) { return v[i]; }
    const Jet& operator[](int i) const { return v[i]; }

    JVec derivative(int axis) const {
        JVec out(n);
        for (int i = 0; i < n; ++i) out.v[i] = v[i].derivative(axis);
        return out;
    }

    friend JVec operator+(const JVec& a, const JVec& b) {
        JVec out(a.n);
        for (int i = 0; i < a.n; ++i) out.v[i] = a.v[i] + b.v[i];
        return out;
    }
    friend JVec operator-(const JVec& a, const JVec& b) {
        JVec out(a.n);
        for (int i = 0; i < a.n; ++i) out.v[i] = a.v[i] - b.v[i];
        return out;
    }
    friend JVec operator*(const Jet& s, const JVec& a) {
        JVec out(a.n);
        for (int i = 0; i < a.n; ++i) out.v[i] = s * a.v[i];
        return out;
    }
    friend JVec operator*(double s, const JVec& a) {
        JVec out(a.n);
        for (int i = 0; i < a.n; ++i) out.v[i] = s * a.v[i];
        return out;
    }
};

// Bilinear form with the first coordinate negated when mu = 1 (Lorentzian ambient).
inline Jet jdot(int mu, const JVec& a, const JVec& b) {
    Jet r = a.v[0] * b.v[0];
    if (mu == 1) r = -r;
    for (int i = 1; i < a.n; ++i) r += a.v[i] * b.v[i];
    return r;
}

}  // namespace cfh
