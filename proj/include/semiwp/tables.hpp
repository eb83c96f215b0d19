#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "semiwp/multi_index.hpp"
#include "semiwp/packet.hpp"
#include "semiwp/sparse_poly.hpp"

namespace semiwp {

enum class BuildMethod { recurrence, generating, rodrigues, ladder };

inline const char* method_name(BuildMethod m) {
    switch (m) {
        case BuildMethod::recurrence: return "recurrence";
        case BuildMethod::generating: return "generating";
        case BuildMethod::rodrigues: return "rodrigues";
        case BuildMethod::ladder: return "ladder";
    }
    return "?";
}

inline BuildMethod method_from_name(const std::string& s) {
    if (s == "recurrence") return BuildMethod::recurrence;
    if (s == "generating") return BuildMethod::generating;
    if (s == "rodrigues") return BuildMethod::rodrigues;
    if (s == "ladder") return BuildMethod::ladder;
    throw input_error("unknown table method \"" + s + "\"");
}

// Default cap on the table order; factorials and table sizes stay small.
inline constexpr int kDefaultOrderCap = 12;

/// Family polynomials p_k for all |k| <= K, keyed by multi-index.
struct PolyTable {
    PacketParams params;
    int K = 0;
    Frame frame = Frame::Y;
    BuildMethod method = BuildMethod::recurrence;
    std::map<MultiIndex, SparsePoly, GradedLexLess> entries;

    const SparsePoly& at(const MultiIndex& k) const {
        const auto it = entries.find(k);
        if (it == entries.end())
            throw input_error("PolyTable: no entry for k = " + k.to_string());
        return it->second;
    }
};

namespace detail {

inline void check_build_args(const PacketParams& p, int K, int order_cap) {
    ensure_admissible(p);
    if (K < 0) throw input_error("table build: K must be >= 0");
    if (K > order_cap)
        throw capacity_error("table build: K = " + std::to_string(K) + " exceeds order cap " +
                             std::to_string(order_cap));
}

}  // namespace detail

/// One raising step in the rescaled frame:
///   p  ->  2 <u, y> p - <u, grad p>,
/// where u is the relevant column of the unitary polar factor of A.
inline SparsePoly recurrence_raise(const SparsePoly& p, const ComplexVector& u) {
    const SparsePoly lin = SparsePoly::inner_form(p.frame(), u);
    return 2.0 * (lin * p) - directional_gradient(p, u);
}

/// Builds p_k for |k| <= K by the raising recurrence, entirely in the rescaled
/// frame where only the unitary factor U_A enters. Each k > 0 is reached from
/// the parent k - e_l with l the smallest nonzero axis.
inline PolyTable build_recurrence(const PacketParams& params, int K,
                                  int order_cap = kDefaultOrderCap) {
    detail::check_build_args(params, K, order_cap);
    const ComplexMatrix U = polar_decompose(params.A).unitary;
    PolyTable table{params, K, Frame::Y, BuildMethod::recurrence, {}};
    for (const MultiIndex& k : enumerate_upto(params.d, K)) {
        if (k.order() == 0) {
            table.entries.emplace(k, SparsePoly::constant(params.d, Frame::Y, 1.0));
            continue;
        }
        const int l = k.first_nonzero_axis();
        const SparsePoly& parent = table.entries.at(k.sub_unit(l));
        table.entries.emplace(k, recurrence_raise(parent, U.col(l)));
    }
    return table;
}

/// Builds the same table by expanding the generating function
///   G = exp(-<U_A zbar, conj(U_A) z> + 2 <U_A zbar, y>)
/// as a truncated exponential series in the 2d variables (z, y) and reading
/// off p_k = k! [z^k]. Every term of the exponent has z-degree >= 1, so the
/// truncation at z-degree K is exact for every extracted coefficient.
inline PolyTable build_generating(const PacketParams& params, int K,
                                  int order_cap = kDefaultOrderCap) {
    detail::check_build_args(params, K, order_cap);
    const int d = params.d;
    const ComplexMatrix U = polar_decompose(params.A).unitary;
    // Quadratic z-coefficients -Q with Q = U_A^* conj(U_A) (symmetric), and
    // bilinear z,y coefficients 2 U_A^*.
    const ComplexMatrix Q = U.adjoint() * U.conjugate();
    const ComplexMatrix L = 2.0 * U.adjoint();

    const int dd = 2 * d;  // variables (z_1..z_d, y_1..y_d)
    const auto z_order = [d](const MultiIndex& e) {
        int o = 0;
        for (int j = 0; j < d; ++j) o += e[j];
        return o;
    };

    SparsePoly exponent(dd, Frame::Y);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (Q(i, j) != 0.0)
                exponent.add_term(MultiIndex(dd).add_unit(i).add_unit(j), -Q(i, j));
            if (L(i, j) != 0.0)
                exponent.add_term(MultiIndex(dd).add_unit(i).add_unit(d + j), L(i, j));
        }

    // Product with all result terms above z-degree K dropped.
    const auto mul_truncated = [&](const SparsePoly& a, const SparsePoly& b) {
        SparsePoly out(dd, Frame::Y);
        for (const auto& [ea, ca] : a.terms())
            for (const auto& [eb, cb] : b.terms()) {
                std::vector<int> e(static_cast<std::size_t>(dd));
                for (int j = 0; j < dd; ++j) e[static_cast<std::size_t>(j)] = ea[j] + eb[j];
                MultiIndex me(std::move(e));
                if (z_order(me) > K) continue;
                out.add_term(me, ca * cb);
            }
        out.prune();
        return out;
    };

    SparsePoly series = SparsePoly::constant(dd, Frame::Y, 1.0);  // exp(E) = sum E^m / m!
    SparsePoly power = series;
    for (int m = 1; m <= K; ++m) {
        power = mul_truncated(power, exponent);
        power *= Complex(1.0 / static_cast<double>(m));
        series += power;
    }

    PolyTable table{params, K, Frame::Y, BuildMethod::generating, {}};
    for (const MultiIndex& k : enumerate_upto(d, K))
        table.entries.emplace(k, SparsePoly::zero(d, Frame::Y));
    for (const auto& [e, c] : series.terms()) {
        std::vector<int> kz(static_cast<std::size_t>(d)), ky(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            kz[static_cast<std::size_t>(j)] = e[j];
            ky[static_cast<std::size_t>(j)] = e[d + j];
        }
        const MultiIndex k(std::move(kz));
        const auto it = table.entries.find(k);
        if (it == table.entries.end()) continue;  // z-degree beyond K
        it->second.add_term(MultiIndex(std::move(ky)),
                            c * static_cast<double>(k.factorial()));
    }
    for (auto& [k, p] : table.entries) p.prune();
    return table;
}

/// Builds the table from the Gaussian-conjugated derivative formula
///   P_k = exp(||A|^-1 x|^2 / hbar) (-sqrt(hbar) A* grad)^k exp(-||A|^-1 x|^2 / hbar).
/// The working state is the polynomial q in "q(x) exp(-<x,|A|^-2 x>/hbar)";
/// one factor of the operator maps
///   q -> -sqrt(hbar) [ (A* grad q)_l - (2/hbar) (A* |A|^-2 x)_l q ].
/// The factors commute, so each k is reached from its smallest-axis parent.
/// The finished x-frame polynomial is converted to the rescaled frame via
/// x = sqrt(hbar) |A| y.
inline PolyTable build_rodrigues(const PacketParams& params, int K,
                                 int order_cap = kDefaultOrderCap) {
    detail::check_build_args(params, K, order_cap);
    const int d = params.d;
    const double hbar = params.hbar;
    const PolarForm polar = polar_decompose(params.A);
    const ComplexMatrix abs2inv =
        (polar.abs * polar.abs).partialPivLu().solve(ComplexMatrix::Identity(d, d));

    // Per-axis ingredients: (A* grad q)_l = <A e_l, grad q>, and the linear
    // form <w_l, x> with w_l = |A|^-2 A e_l, whose value is (A* |A|^-2 x)_l.
    std::vector<SparsePoly> drift;
    drift.reserve(static_cast<std::size_t>(d));
    for (int l = 0; l < d; ++l)
        drift.push_back(SparsePoly::inner_form(Frame::X, (abs2inv * params.A.col(l)).eval()));

    const auto apply = [&](const SparsePoly& q, int l) {
        return -std::sqrt(hbar) *
               (directional_gradient(q, params.A.col(l)) -
                (2.0 / hbar) * (drift[static_cast<std::size_t>(l)] * q));
    };

    std::map<MultiIndex, SparsePoly, GradedLexLess> xframe;
    for (const MultiIndex& k : enumerate_upto(d, K)) {
        if (k.order() == 0) {
            xframe.emplace(k, SparsePoly::constant(d, Frame::X, 1.0));
            continue;
        }
        const int l = k.first_nonzero_axis();
        xframe.emplace(k, apply(xframe.at(k.sub_unit(l)), l));
    }

    const ComplexMatrix to_x = std::sqrt(hbar) * polar.abs;  // x = sqrt(hbar)|A| y
    PolyTable table{params, K, Frame::Y, BuildMethod::rodrigues, {}};
    for (auto& [k, q] : xframe)
        table.entries.emplace(
            k, compose_linear(q, to_x, ComplexVector::Zero(d), Frame::Y));
    return table;
}

/// Closed-form generating function G(x, z) = exp(-<zbar, A^-1 conj(A) z>
/// + (2/sqrt(hbar)) <zbar, A^-1 x>), evaluated directly.
inline Complex eval_generating(const PacketParams& params, const RealVector& x,
                               const ComplexVector& z) {
    ensure_admissible(params);
    if (x.size() != params.d || z.size() != params.d)
        throw input_error("eval_generating: x or z dimension mismatch");
    const ComplexMatrix Ainv =
        params.A.partialPivLu().solve(ComplexMatrix::Identity(params.d, params.d));
    const Complex quad = (z.transpose() * (Ainv * params.A.conjugate()) * z).value();
    const Complex lin = (z.transpose() * (Ainv * x.cast<Complex>())).value();
    return std::exp(-quad + 2.0 / std::sqrt(params.hbar) * lin);
}

/// Worst per-entry coefficient discrepancy between two tables over the shared
/// index set; also reports the offending k.
struct TableDiscrepancy {
    double value = 0.0;
    MultiIndex worst_k;
};

inline TableDiscrepancy table_discrepancy(const PolyTable& t1, const PolyTable& t2) {
    if (t1.params.d != t2.params.d || t1.K != t2.K || t1.frame != t2.frame)
        throw input_error("table_discrepancy: tables are not comparable");
    TableDiscrepancy out{0.0, MultiIndex(t1.params.d)};
    for (const auto& [k, p] : t1.entries) {
        const double dk = poly_discrepancy(p, t2.at(k));
        if (dk > out.value) {
            out.value = dk;
            out.worst_k = k;
        }
    }
    return out;
}

// --- JSON dump ------------------------------------------------------------
// {"method": str, "frame": str, "K": int,
//  "entries": {"[k]": [{"exp": [...], "re": f, "im": f}, ...]}}
// with terms listed in graded-lex exponent order.

inline nlohmann::ordered_json table_to_json(const PolyTable& table) {
    nlohmann::ordered_json j;
    j["method"] = method_name(table.method);
    j["frame"] = frame_name(table.frame);
    j["K"] = table.K;
    nlohmann::ordered_json entries = nlohmann::ordered_json::object();
    for (const auto& [k, p] : table.entries) {
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const auto& [e, c] : p.terms()) {
            nlohmann::ordered_json term;
            term["exp"] = e.components();
            term["re"] = c.real();
            term["im"] = c.imag();
            terms.push_back(std::move(term));
        }
        entries[k.to_string()] = std::move(terms);
    }
    j["entries"] = std::move(entries);
    return j;
}

inline PolyTable table_from_json(const nlohmann::json& j, const PacketParams& params) {
    if (!j.is_object() || !j.contains("method") || !j.contains("frame") || !j.contains("K") ||
        !j.contains("entries"))
        throw input_error("table json: expected fields method, frame, K, entries");
    PolyTable table;
    table.params = params;
    table.method = method_from_name(j.at("method").get<std::string>());
    const std::string fr = j.at("frame").get<std::string>();
    if (fr != "x" && fr != "y") throw input_error("table json: frame must be \"x\" or \"y\"");
    table.frame = fr == "x" ? Frame::X : Frame::Y;
    table.K = j.at("K").get<int>();
    for (const auto& [key, terms] : j.at("entries").items()) {
        nlohmann::json kj = nlohmann::json::parse(key, nullptr, false);
        if (kj.is_discarded() || !kj.is_array())
            throw input_error("table json: bad entry key " + key);
        std::vector<int> comps;
        for (const auto& v : kj) comps.push_back(v.get<int>());
        MultiIndex k(std::move(comps));
        SparsePoly p(params.d, table.frame);
        for (const auto& term : terms) {
            std::vector<int> e = term.at("exp").get<std::vector<int>>();
            p.add_term(MultiIndex(std::move(e)),
                       Complex(term.at("re").get<double>(), term.at("im").get<double>()));
        }
        table.entries.emplace(std::move(k), std::move(p));
    }
    return table;
}

}  // namespace semiwp
