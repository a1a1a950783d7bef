#include "qpencil/quadrics.hpp"

#include <algorithm>
#include <tuple>

#include "qpencil/errors.hpp"

namespace qp {

SymQuadForm::SymQuadForm(const Mat4& sym) : m(sym) {
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (m(i, j) != m(j, i)) throw Error("SymQuadForm: matrix not exactly symmetric");
}

SymQuadForm SymQuadForm::from_monomials(
    const std::vector<std::tuple<int, int, Complex>>& terms) {
    SymQuadForm q;
    for (const auto& [i, j, c] : terms) {
        if (i < 1 || j < 1 || i > 4 || j > 4 || i > j) throw Error("from_monomials: bad index");
        if (i == j) {
            q.m(i - 1, i - 1) += Complex(2) * c;
        } else {
            q.m(i - 1, j - 1) += c;
            q.m(j - 1, i - 1) += c;
        }
    }
    return q;
}

Complex eval_quadric(const SymQuadForm& q, const ProjPoint3& p) {
    Vec4 X;
    for (int i = 0; i < 4; ++i) X(i) = p[i];
    return Real(0.5) * (X.transpose() * q.m * X)(0);
}

Complex eval_quadric_dir(const SymQuadForm& q, const ProjPoint3& p, const Vec4& dir) {
    Vec4 X;
    for (int i = 0; i < 4; ++i) X(i) = p[i];
    return (X.transpose() * q.m * dir)(0);
}

namespace {

// 10 upper-triangular coefficient slots of a quadric, row (i <= j).
constexpr int kQuadSlots[10][2] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1},
                                   {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};

Eigen::Matrix<Complex, 10, 1> upper_vector(const Mat4& m) {
    Eigen::Matrix<Complex, 10, 1> v;
    for (int s = 0; s < 10; ++s) v(s) = m(kQuadSlots[s][0], kQuadSlots[s][1]);
    return v;
}

int numeric_rank(const Eigen::MatrixXcd& m, Real tol) {
    if (m.rows() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0) return 0;
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
        if (sv(k) > tol * sv(0)) ++rank;
    return rank;
}

}  // namespace

QuadricPencil::QuadricPencil(SymQuadForm q0, SymQuadForm qInf, Real tol)
    : m0(std::move(q0)), mInf(std::move(qInf)) {
    // Linear independence of the two 10-vectors of upper-triangular entries.
    Eigen::MatrixXcd rows(2, 10);
    rows.row(0) = upper_vector(m0.m).transpose();
    rows.row(1) = upper_vector(mInf.m).transpose();
    if (numeric_rank(rows, tol) < 2)
        throw Error("QuadricPencil: forms are proportional, not a pencil");
}

Complex BiquadraticForm::eval(const Complex& x, const Complex& y) const {
    Complex acc(0);
    Complex xp(1);
    for (int j = 0; j <= 2; ++j) {
        Complex yp(1);
        for (int k = 0; k <= 2; ++k) {
            acc += c(j, k) * xp * yp;
            yp *= y;
        }
        xp *= x;
    }
    return acc;
}

Complex BiquadraticForm::eval_dir(const Complex& x, const Complex& y, const Complex& dx,
                                  const Complex& dy) const {
    Complex acc(0);
    for (int j = 0; j <= 2; ++j)
        for (int k = 0; k <= 2; ++k) {
            Complex term(0);
            if (j > 0) term += dx * Real(j) * int_pow(x, j - 1) * int_pow(y, k);
            if (k > 0) term += dy * Real(k) * int_pow(x, j) * int_pow(y, k - 1);
            acc += c(j, k) * term;
        }
    return acc;
}

Eigen::Matrix<Complex, 9, 1> BiquadraticForm::vectorized() const {
    Eigen::Matrix<Complex, 9, 1> v;
    for (int j = 0; j <= 2; ++j)
        for (int k = 0; k <= 2; ++k) v(3 * j + k) = c(j, k);
    return v;
}

BiquadraticForm BiquadraticForm::from_vector(const Eigen::Matrix<Complex, 9, 1>& v) {
    BiquadraticForm f;
    for (int j = 0; j <= 2; ++j)
        for (int k = 0; k <= 2; ++k) f.c(j, k) = v(3 * j + k);
    return f;
}

Real BiquadraticForm::max_coeff() const {
    Real m = 0;
    for (int j = 0; j <= 2; ++j)
        for (int k = 0; k <= 2; ++k) m = std::max(m, std::abs(c(j, k)));
    return m;
}

std::string to_string(PencilClass c) {
    switch (c) {
        case PencilClass::i: return "i";
        case PencilClass::ii: return "ii";
        case PencilClass::iii: return "iii";
        case PencilClass::iv: return "iv";
        case PencilClass::v: return "v";
        case PencilClass::vi: return "vi";
    }
    return "?";
}

Poly char_poly(const QuadricPencil& pencil) {
    // Entries of M0 - lambda*MInf as degree-1 polynomials; cofactor expansion.
    Poly entry[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            entry[i][j] = Poly::linear(pencil.m0.m(i, j), -pencil.mInf.m(i, j));

    // det of the 3x3 minor skipping row 0 and column `skip`.
    auto det3 = [&](int skip) {
        int cols[3], n = 0;
        for (int j = 0; j < 4; ++j)
            if (j != skip) cols[n++] = j;
        const auto& a = entry;
        auto det2 = [&](int r1, int r2, int c1, int c2) {
            return a[r1][c1] * a[r2][c2] - a[r1][c2] * a[r2][c1];
        };
        return a[1][cols[0]] * det2(2, 3, cols[1], cols[2]) -
               a[1][cols[1]] * det2(2, 3, cols[0], cols[2]) +
               a[1][cols[2]] * det2(2, 3, cols[0], cols[1]);
    };

    Poly det;
    Real sign = 1;
    for (int j = 0; j < 4; ++j) {
        det = det + Poly::constant(sign) * entry[0][j] * det3(j);
        sign = -sign;
    }
    return det;
}

PencilType classify_pencil(const QuadricPencil& pencil, Real tol) {
    const Poly delta = char_poly(pencil);
    const int deg = delta.degree();
    if (deg < 0) throw UnrecognizedProfile("characteristic polynomial vanishes identically");

    struct Cluster {
        ProjPoint1 root;
        int mult;
        Mat4 matrix_at;
    };
    std::vector<Cluster> clusters;

    for (const Complex& r : poly_roots(delta)) {
        bool merged = false;
        for (auto& cl : clusters) {
            if (cl.root.is_finite() &&
                std::abs(cl.root.affine() - r) <= tol * (1 + std::abs(r))) {
                ++cl.mult;
                merged = true;
                break;
            }
        }
        if (!merged) clusters.push_back({ProjPoint1(r), 1, pencil.at(r)});
    }
    if (deg < 4)  // root at infinity of the homogenized quartic
        clusters.push_back({ProjPoint1::infinity(), 4 - deg, pencil.mInf.m});

    PencilType out;
    int mult_sum = 0;
    for (const auto& cl : clusters) {
        Eigen::JacobiSVD<Mat4> svd(cl.matrix_at);
        const auto& sv = svd.singularValues();
        int corank = 0;
        for (int k = 0; k < 4; ++k)
            if (sv(0) == 0 || sv(k) <= tol * sv(0)) ++corank;
        out.root_data.push_back({cl.root, cl.mult, corank});
        mult_sum += cl.mult;
    }
    if (mult_sum != 4) throw UnrecognizedProfile("root multiplicities do not sum to 4");

    // Sort by multiplicity descending, corank descending, for profile matching.
    std::sort(out.root_data.begin(), out.root_data.end(), [](const auto& a, const auto& b) {
        return std::tie(b.multiplicity, b.corank) < std::tie(a.multiplicity, a.corank);
    });

    std::vector<std::pair<int, int>> profile;
    for (const auto& rd : out.root_data) profile.push_back({rd.multiplicity, rd.corank});

    using P = std::vector<std::pair<int, int>>;
    const std::vector<std::tuple<P, PencilClass, const char*>> table = {
        {P{{1, 1}, {1, 1}, {1, 1}, {1, 1}}, PencilClass::i, "[1,1,1,1]"},
        {P{{2, 1}, {1, 1}, {1, 1}}, PencilClass::ii, "[2,1,1]"},
        {P{{3, 1}, {1, 1}}, PencilClass::iii, "[3,1]"},
        {P{{2, 2}, {1, 1}, {1, 1}}, PencilClass::iv, "[(1,1),1,1]"},
        {P{{3, 2}, {1, 1}}, PencilClass::v, "[(2,1),1]"},
        {P{{3, 3}, {1, 1}}, PencilClass::vi, "[(1,1,1),1]"},
    };
    for (const auto& [pat, cls, segre] : table) {
        if (profile == pat) {
            out.tag = cls;
            out.segre = segre;
            return out;
        }
    }
    std::string desc = "profile {";
    for (auto [m, c] : profile) desc += " (" + std::to_string(m) + "," + std::to_string(c) + ")";
    throw UnrecognizedProfile(desc + " } matches none of the six supported classes");
}

SymQuadForm segre_lift(const BiquadraticForm& f) {
    if (f.max_coeff() == 0) throw Error("segre_lift: zero biquadratic form");
    // (j, k) exponents of x^j y^k -> quadric monomial X_a X_b (1-indexed).
    static constexpr int kDict[3][3][2] = {
        {{4, 4}, {2, 4}, {2, 2}},  // 1, y, y^2
        {{1, 4}, {3, 4}, {2, 3}},  // x, xy, xy^2
        {{1, 1}, {1, 3}, {3, 3}},  // x^2, x^2y, x^2y^2
    };
    std::vector<std::tuple<int, int, Complex>> terms;
    for (int j = 0; j <= 2; ++j)
        for (int k = 0; k <= 2; ++k) {
            const Complex coeff = f.c(j, k);
            if (coeff == Complex(0)) continue;
            int a = kDict[j][k][0], b = kDict[j][k][1];
            if (a > b) std::swap(a, b);
            terms.push_back({a, b, coeff});
        }
    return SymQuadForm::from_monomials(terms);
}

std::vector<BiquadraticForm> biquadratic_space_through(
    const std::vector<std::pair<Complex, Complex>>& points,
    const std::vector<TangentCondition1>& tangents, Real tol) {
    const int rows = static_cast<int>(points.size() + tangents.size());
    if (rows == 0) {
        std::vector<BiquadraticForm> basis(9);
        for (int s = 0; s < 9; ++s) {
            Eigen::Matrix<Complex, 9, 1> e = Eigen::Matrix<Complex, 9, 1>::Zero();
            e(s) = 1;
            basis[static_cast<size_t>(s)] = BiquadraticForm::from_vector(e);
        }
        return basis;
    }
    Eigen::MatrixXcd m(rows, 9);
    int r = 0;
    for (const auto& [x, y] : points) {
        for (int j = 0; j <= 2; ++j)
            for (int k = 0; k <= 2; ++k) m(r, 3 * j + k) = int_pow(x, j) * int_pow(y, k);
        ++r;
    }
    for (const auto& t : tangents) {
        for (int j = 0; j <= 2; ++j)
            for (int k = 0; k <= 2; ++k) {
                Complex term(0);
                if (j > 0) term += t.dx * Real(j) * int_pow(t.x, j - 1) * int_pow(t.y, k);
                if (k > 0) term += t.dy * Real(k) * int_pow(t.x, j) * int_pow(t.y, k - 1);
                m(r, 3 * j + k) = term;
            }
        ++r;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
        if (sv(0) > 0 && sv(k) > tol * sv(0)) ++rank;
    std::vector<BiquadraticForm> basis;
    for (int k = rank; k < 9; ++k)
        basis.push_back(BiquadraticForm::from_vector(svd.matrixV().col(k)));
    return basis;
}

int quadric_space_dim_through(const std::vector<ProjPoint3>& points, Real tol,
                              const std::vector<TangentCondition3>& tangents) {
    const int rows = static_cast<int>(points.size() + tangents.size());
    if (rows == 0) return 10;
    Eigen::MatrixXcd m(rows, 10);
    int r = 0;
    for (const auto& p : points) {
        for (int s = 0; s < 10; ++s) {
            const int i = kQuadSlots[s][0], j = kQuadSlots[s][1];
            m(r, s) = p[i] * p[j];
        }
        ++r;
    }
    for (const auto& t : tangents) {
        for (int s = 0; s < 10; ++s) {
            const int i = kQuadSlots[s][0], j = kQuadSlots[s][1];
            m(r, s) = t.p[i] * t.dir(j) + t.p[j] * t.dir(i);
        }
        ++r;
    }
    return 10 - numeric_rank(m, tol);
}

}  // namespace qp
