#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semiwp/linalg.hpp"
#include "semiwp/multi_index.hpp"

namespace semiwp {

/// Coordinate frame a polynomial lives in: X is the physical coordinate,
/// Y the rescaled coordinate y = |A|^-1 x / sqrt(hbar).
enum class Frame { X, Y };

inline const char* frame_name(Frame f) { return f == Frame::X ? "x" : "y"; }

// Coefficients with magnitude below this fraction of the largest one are
// dropped after every arithmetic operation.
inline constexpr double kPruneRelTol = 1e-14;

/// Complex-coefficient multivariate polynomial, stored sparsely by exponent
/// multi-index in graded-lex order.
class SparsePoly {
  public:
    using Terms = std::map<MultiIndex, Complex, GradedLexLess>;

    SparsePoly(int dim, Frame frame) : d_(check(dim)), frame_(frame) {}

    static SparsePoly zero(int dim, Frame frame) { return SparsePoly(dim, frame); }

    static SparsePoly constant(int dim, Frame frame, Complex c) {
        SparsePoly p(dim, frame);
        if (c != 0.0) p.terms_.emplace(MultiIndex(dim), c);
        return p;
    }

    /// The inner-product form v -> <c, v> = sum_j conj(c_j) v_j.
    static SparsePoly inner_form(Frame frame, const ComplexVector& c) {
        SparsePoly p(static_cast<int>(c.size()), frame);
        for (int j = 0; j < c.size(); ++j) {
            const Complex coeff = std::conj(c(j));
            if (coeff != 0.0) p.terms_.emplace(MultiIndex(p.d_).add_unit(j), coeff);
        }
        return p;
    }

    int dim() const { return d_; }
    Frame frame() const { return frame_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Max total order over stored exponents (0 for the zero polynomial).
    int degree() const {
        int deg = 0;
        for (const auto& [e, c] : terms_) deg = std::max(deg, e.order());
        return deg;
    }

    Complex coeff(const MultiIndex& e) const {
        const auto it = terms_.find(e);
        return it == terms_.end() ? Complex(0.0) : it->second;
    }

    double max_coeff_abs() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    void set_frame(Frame f) { frame_ = f; }

    void add_term(const MultiIndex& e, Complex c) {
        if (e.dim() != d_) throw input_error("SparsePoly::add_term: exponent dimension mismatch");
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }

    /// Evaluation sum_e c_e * point^e, accumulated in graded-lex term order.
    Complex eval(const ComplexVector& point) const {
        if (point.size() != d_) throw input_error("SparsePoly::eval: point dimension mismatch");
        Complex acc = 0.0;
        for (const auto& [e, c] : terms_) {
            Complex mono = 1.0;
            for (int j = 0; j < d_; ++j)
                for (int r = 0; r < e[j]; ++r) mono *= point(j);
            acc += c * mono;
        }
        return acc;
    }

    Complex eval(const RealVector& point) const { return eval(point.cast<Complex>().eval()); }

    SparsePoly& operator+=(const SparsePoly& o) {
        check_compatible(o, "operator+=");
        for (const auto& [e, c] : o.terms_) {
            auto [it, inserted] = terms_.emplace(e, c);
            if (!inserted) it->second += c;
        }
        prune();
        return *this;
    }

    SparsePoly& operator-=(const SparsePoly& o) {
        check_compatible(o, "operator-=");
        for (const auto& [e, c] : o.terms_) {
            auto [it, inserted] = terms_.emplace(e, -c);
            if (!inserted) it->second -= c;
        }
        prune();
        return *this;
    }

    SparsePoly& operator*=(Complex s) {
        if (s == 0.0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        prune();
        return *this;
    }

    friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
    friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
    friend SparsePoly operator*(SparsePoly a, Complex s) { return a *= s; }
    friend SparsePoly operator*(Complex s, SparsePoly a) { return a *= s; }

    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
        a.check_compatible(b, "operator*");
        SparsePoly out(a.d_, a.frame_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                std::vector<int> e(static_cast<std::size_t>(a.d_));
                for (int j = 0; j < a.d_; ++j) e[static_cast<std::size_t>(j)] = ea[j] + eb[j];
                auto [it, inserted] = out.terms_.emplace(MultiIndex(std::move(e)), ca * cb);
                if (!inserted) it->second += ca * cb;
            }
        out.prune();
        return out;
    }

    /// Drops coefficients below kPruneRelTol times the largest magnitude.
    void prune() {
        const double cut = kPruneRelTol * max_coeff_abs();
        for (auto it = terms_.begin(); it != terms_.end();)
            it = (std::abs(it->second) <= cut) ? terms_.erase(it) : std::next(it);
    }

  private:
    static int check(int d) {
        if (d < 1) throw input_error("SparsePoly: dimension must be >= 1");
        return d;
    }
    void check_compatible(const SparsePoly& o, const char* where) const {
        if (o.d_ != d_ || o.frame_ != frame_)
            throw input_error(std::string("SparsePoly::") + where +
                              ": dimension or frame mismatch");
    }

    int d_;
    Frame frame_;
    Terms terms_;
};

/// <c, grad p> = sum_j conj(c_j) d_j p. The conjugation matches the convention
/// <a,b> = sum conj(a_j) b_j used throughout.
inline SparsePoly directional_gradient(const SparsePoly& p, const ComplexVector& c) {
    if (c.size() != p.dim())
        throw input_error("directional_gradient: direction dimension mismatch");
    SparsePoly out(p.dim(), p.frame());
    for (const auto& [e, coeff] : p.terms()) {
        for (int j = 0; j < p.dim(); ++j) {
            if (e[j] == 0) continue;
            const Complex w = std::conj(c(j)) * static_cast<double>(e[j]) * coeff;
            if (w != 0.0) out.add_term(e.sub_unit(j), w);
        }
    }
    out.prune();
    return out;
}

/// Linear substitution q(v) = p(M v + shift). The output frame defaults to the
/// input's; pass out_frame when the substitution is a change of frame.
inline SparsePoly compose_linear(const SparsePoly& p, const ComplexMatrix& M,
                                 const ComplexVector& shift,
                                 std::optional<Frame> out_frame = std::nullopt) {
    if (M.rows() != p.dim() || M.cols() != p.dim() || shift.size() != p.dim())
        throw input_error("compose_linear: matrix or shift dimension mismatch");
    const Frame frame = out_frame.value_or(p.frame());
    const int d = p.dim();

    // Degree-1 images of each variable, with powers cached on demand.
    std::vector<SparsePoly> image;
    image.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        SparsePoly lin(d, frame);
        if (shift(j) != 0.0) lin.add_term(MultiIndex(d), shift(j));
        for (int i = 0; i < d; ++i)
            if (M(j, i) != 0.0) lin.add_term(MultiIndex(d).add_unit(i), M(j, i));
        image.push_back(std::move(lin));
    }
    std::vector<std::vector<SparsePoly>> powers(static_cast<std::size_t>(d));
    const auto power = [&](int j, int n) -> const SparsePoly& {
        auto& cache = powers[static_cast<std::size_t>(j)];
        if (cache.empty()) cache.push_back(SparsePoly::constant(d, frame, 1.0));
        while (static_cast<int>(cache.size()) <= n)
            cache.push_back(cache.back() * image[static_cast<std::size_t>(j)]);
        return cache[static_cast<std::size_t>(n)];
    };

    SparsePoly out(d, frame);
    for (const auto& [e, c] : p.terms()) {
        SparsePoly term = SparsePoly::constant(d, frame, c);
        for (int j = 0; j < d; ++j)
            if (e[j] > 0) term = term * power(j, e[j]);
        out += term;
    }
    return out;
}

/// max over the union of exponents of |c1 - c2| / (1 + max |c|); robust to
/// absent-vs-zero entries and overall scale.
inline double poly_discrepancy(const SparsePoly& p, const SparsePoly& q) {
    double diff = 0.0;
    for (const auto& [e, c] : p.terms()) diff = std::max(diff, std::abs(c - q.coeff(e)));
    for (const auto& [e, c] : q.terms()) diff = std::max(diff, std::abs(p.coeff(e) - c));
    return diff / (1.0 + std::max(p.max_coeff_abs(), q.max_coeff_abs()));
}

}  // namespace semiwp
