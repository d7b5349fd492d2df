#ifndef OPQ_POLY_HPP
#define OPQ_POLY_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opq/real.hpp"

namespace opq {

/// Dense polynomial in the monomial basis, coefficient i multiplying x^i.
/// Canonical form: no trailing zero coefficients; the zero polynomial has an
/// empty coefficient list and degree() == nullopt (its "minus infinity").
class Poly {
public:
    Poly() = default;

    explicit Poly(std::vector<Real> coeffs) : c_(std::move(coeffs)) { strip(); }

    static Poly zero() { return Poly(); }

    static Poly constant(Real v) { return Poly(std::vector<Real>{std::move(v)}); }

    /// x^k
    static Poly monomial(std::size_t k) {
        std::vector<Real> c(k + 1, Real(0));
        c[k] = Real(1);
        return Poly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }

    std::optional<std::size_t> degree() const {
        if (c_.empty()) return std::nullopt;
        return c_.size() - 1;
    }

    std::size_t size() const { return c_.size(); }

    /// Coefficient of x^i; zero beyond the degree.
    Real coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Real(0); }

    const std::vector<Real>& coeffs() const { return c_; }

    Real leading() const {
        if (c_.empty()) throw std::logic_error("Poly::leading: zero polynomial");
        return c_.back();
    }

    /// Horner evaluation.
    Real eval(const Real& x) const {
        if (c_.empty()) return Real(0);
        Real acc = c_.back();
        for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    /// k-th formal derivative; k = 0 returns *this, k > degree returns zero.
    Poly derivative(unsigned k = 1) const {
        if (k == 0) return *this;
        if (c_.size() <= k) return Poly();
        std::vector<Real> d(c_.size() - k, Real(0));
        for (std::size_t i = k; i < c_.size(); ++i) {
            Real f(1);
            for (unsigned j = 0; j < k; ++j) f *= Real(static_cast<long>(i - j));
            d[i - k] = f * c_[i];
        }
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& p, const Poly& q) {
        std::vector<Real> c(std::max(p.c_.size(), q.c_.size()), Real(0));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.coeff(i) + q.coeff(i);
        return Poly(std::move(c));
    }

    friend Poly operator-(const Poly& p, const Poly& q) {
        std::vector<Real> c(std::max(p.c_.size(), q.c_.size()), Real(0));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.coeff(i) - q.coeff(i);
        return Poly(std::move(c));
    }

    friend Poly operator*(const Poly& p, const Poly& q) {
        if (p.is_zero() || q.is_zero()) return Poly();
        std::vector<Real> c(p.c_.size() + q.c_.size() - 1, Real(0));
        for (std::size_t i = 0; i < p.c_.size(); ++i)
            for (std::size_t j = 0; j < q.c_.size(); ++j) c[i + j] += p.c_[i] * q.c_[j];
        return Poly(std::move(c));
    }

    friend Poly operator*(const Real& s, const Poly& p) {
        std::vector<Real> c(p.c_.size(), Real(0));
        for (std::size_t i = 0; i < p.c_.size(); ++i) c[i] = s * p.c_[i];
        return Poly(std::move(c));
    }

private:
    void strip() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Real> c_;
};

/// c·p + q
inline Poly axpy(const Real& c, const Poly& p, const Poly& q) { return c * p + q; }

/// (x − a)² · p
inline Poly shift_square(const Poly& p, const Real& a) {
    std::vector<Real> f{a * a, Real(-2) * a, Real(1)};
    return Poly(std::move(f)) * p;
}

}  // namespace opq

#endif
