#pragma once

#include "owdvv/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace owdvv {

/* Sparse multivariate polynomial over Q; a constant has nvars() == 0 and adapts. */
class MPoly {
public:
    using Exponent = std::vector<int>;

    MPoly() = default;
    MPoly(const Rational& c);
    MPoly(long c) : MPoly(Rational(c)) {}

    static MPoly variable(int nvars, int index);

    int nvars() const { return n_; }
    const std::map<Exponent, Rational>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    int total_degree() const;

    MPoly derivative(int var) const;
    Rational evaluate(const std::vector<Rational>& x) const;
    /* Adds c * x^e. */
    void add_term(const Exponent& e, const Rational& c);

    MPoly& operator+=(const MPoly& o);
    MPoly& operator-=(const MPoly& o);
    MPoly operator-() const;
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
    friend bool operator==(const MPoly& a, const MPoly& b);

    /* Renders with the given variable names. */
    std::string str(const std::vector<std::string>& names = {}) const;

private:
    int n_ = 0;
    std::map<Exponent, Rational> t_;

    void promote(int n);
};

inline bool is_zero(const MPoly& x) { return x.is_zero(); }
/* MPoly is a domain: only exact zero counts as a vanishing leading coefficient. */
inline bool base_is_zero(const MPoly& x) { return x.is_zero(); }
inline int nilpotency(const MPoly&) { return 0; }
inline MPoly nilpotent_part(const MPoly&) { return MPoly(); }
Rational base_value(const MPoly& x);
MPoly inverse(const MPoly& x);

}  // namespace owdvv
