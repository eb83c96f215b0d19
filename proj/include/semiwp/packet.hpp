#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include <json.hpp>

#include "semiwp/linalg.hpp"

namespace semiwp {

/// Parameter tuple (d, hbar, A, B, a, eta) of a wave-packet family.
struct PacketParams {
    int d = 1;
    double hbar = 1.0;
    ComplexMatrix A;
    ComplexMatrix B;
    RealVector a;    // position center
    RealVector eta;  // momentum center

    /// A = B = I, hbar = 1, centered at the origin (the Hermite case in d=1).
    static PacketParams identity(int dim) {
        if (dim < 1) throw input_error("PacketParams::identity: dimension must be >= 1");
        PacketParams p;
        p.d = dim;
        p.A = ComplexMatrix::Identity(dim, dim);
        p.B = ComplexMatrix::Identity(dim, dim);
        p.a = RealVector::Zero(dim);
        p.eta = RealVector::Zero(dim);
        return p;
    }

    AdmissibilityReport admissibility(double tol = kAdmissibilityTol) const {
        return check_admissible(A, B, tol);
    }

    bool centered() const { return a.isZero(0.0) && eta.isZero(0.0); }
};

/// Throws validation_error unless (A, B) pass the admissibility check and hbar > 0.
inline void ensure_admissible(const PacketParams& p, double tol = kAdmissibilityTol) {
    if (!(p.hbar > 0.0)) throw validation_error("packet parameters: hbar must be positive");
    if (p.d < 1 || p.A.rows() != p.d || p.B.rows() != p.d || p.a.size() != p.d ||
        p.eta.size() != p.d)
        throw validation_error("packet parameters: inconsistent dimensions");
    const auto rep = check_admissible(p.A, p.B, tol);
    if (!rep.ok)
        throw validation_error("packet parameters are not admissible (residuals " +
                               std::to_string(rep.residual1) + ", " +
                               std::to_string(rep.residual2) + ")");
}

/// Deterministic admissible pair. A = R U with R real symmetric positive
/// definite (eigenvalues floored away from zero) and U a unitary drawn from the
/// polar factor of a complex Gaussian matrix; this keeps A A* real, which the
/// admissibility conditions require of any valid A. B is then the partner
/// (|A|^-2 + iS) A with a random real symmetric S. Resamples until the
/// condition number of A is below the cap; hbar = 1, a = eta = 0.
inline PacketParams generate_params(std::uint64_t seed, int d, double spread = 1.0) {
    if (d < 1) throw input_error("generate_params: d must be >= 1");
    if (!(spread > 0.0)) throw input_error("generate_params: spread must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const auto real_gaussian = [&](int n) {
        RealMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = gauss(rng);
        return m;
    };

    constexpr int kMaxAttempts = 100;
    PacketParams p;
    p.d = d;
    p.a = RealVector::Zero(d);
    p.eta = RealVector::Zero(d);

    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        ComplexMatrix G(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) G(i, j) = Complex(gauss(rng), gauss(rng));
        Eigen::JacobiSVD<ComplexMatrix> svd(G, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const ComplexMatrix U = svd.matrixU() * svd.matrixV().adjoint();

        const RealMatrix M = real_gaussian(d);
        const RealMatrix sym = 0.5 * (M + M.transpose());
        Eigen::SelfAdjointEigenSolver<RealMatrix> eig(sym);
        // Eigenvalues mapped to 0.3 + |lambda|: positive definite, modest spread.
        RealVector lam = eig.eigenvalues().cwiseAbs().array() + 0.3;
        const RealMatrix R =
            spread * (eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose());

        const ComplexMatrix A = R.cast<Complex>() * U;
        if (condition_number(A) > kConditionCap) continue;

        RealMatrix T = real_gaussian(d);
        const RealMatrix S = 0.5 * (T + T.transpose());
        // |A|^-2 = R^-2 directly from the eigendecomposition of R.
        const RealMatrix abs2inv = eig.eigenvectors() *
                                   lam.cwiseProduct(lam).cwiseInverse().asDiagonal() *
                                   eig.eigenvectors().transpose() / (spread * spread);
        p.A = A;
        p.B = (abs2inv.cast<Complex>() + Complex(0.0, 1.0) * S.cast<Complex>()) * A;
        return p;
    }
    throw singular_error("generate_params: condition cap not met after bounded retries");
}

// --- JSON schema ----------------------------------------------------------
// {"d": int, "hbar": float, "A": [[[re,im],...]], "B": [[[re,im],...]],
//  "a": [float...], "eta": [float...]}   (matrices row-major)

namespace detail {

inline nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j, int d, const std::string& name) {
    if (!j.is_array() || static_cast<int>(j.size()) != d)
        throw input_error("params json: \"" + name + "\" must be a " + std::to_string(d) + "x" +
                          std::to_string(d) + " matrix");
    ComplexMatrix m(d, d);
    for (int i = 0; i < d; ++i) {
        const auto& row = j.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            throw input_error("params json: row " + std::to_string(i) + " of \"" + name +
                              "\" must have " + std::to_string(d) + " entries");
        for (int c = 0; c < d; ++c) {
            const auto& e = row.at(c);
            if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() || !e.at(1).is_number())
                throw input_error("params json: entry (" + std::to_string(i) + "," +
                                  std::to_string(c) + ") of \"" + name +
                                  "\" must be a [re, im] pair");
            m(i, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return m;
}

inline RealVector vector_from_json(const nlohmann::json& j, int d, const std::string& name) {
    if (!j.is_array() || static_cast<int>(j.size()) != d)
        throw input_error("params json: \"" + name + "\" must be a vector of length " +
                          std::to_string(d));
    RealVector v(d);
    for (int i = 0; i < d; ++i) {
        if (!j.at(i).is_number())
            throw input_error("params json: \"" + name + "\" entries must be numbers");
        v(i) = j.at(i).get<double>();
    }
    return v;
}

}  // namespace detail

inline nlohmann::ordered_json params_to_json(const PacketParams& p) {
    nlohmann::ordered_json j;
    j["d"] = p.d;
    j["hbar"] = p.hbar;
    j["A"] = detail::matrix_to_json(p.A);
    j["B"] = detail::matrix_to_json(p.B);
    j["a"] = std::vector<double>(p.a.data(), p.a.data() + p.a.size());
    j["eta"] = std::vector<double>(p.eta.data(), p.eta.data() + p.eta.size());
    return j;
}

inline PacketParams params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw input_error("params json: top level must be an object");
    for (const char* key : {"d", "hbar", "A", "B", "a", "eta"})
        if (!j.contains(key))
            throw input_error(std::string("params json: missing field \"") + key + "\"");
    if (!j.at("d").is_number_integer() || j.at("d").get<int>() < 1)
        throw input_error("params json: \"d\" must be a positive integer");
    PacketParams p;
    p.d = j.at("d").get<int>();
    if (!j.at("hbar").is_number() || !(j.at("hbar").get<double>() > 0.0))
        throw input_error("params json: \"hbar\" must be a positive number");
    p.hbar = j.at("hbar").get<double>();
    p.A = detail::matrix_from_json(j.at("A"), p.d, "A");
    p.B = detail::matrix_from_json(j.at("B"), p.d, "B");
    p.a = detail::vector_from_json(j.at("a"), p.d, "a");
    p.eta = detail::vector_from_json(j.at("eta"), p.d, "eta");
    return p;
}

}  // namespace semiwp
