// Exact oracle for the flow on monomials. Applies (1/N^b) z^a (d/dz)^b term
// by term in rational arithmetic. Gamma values at half integers carry a sqrt(pi)
// factor that is tracked as an exponent, as is the N^{-b} normalisation, so the
// only floating point step is the final conversion.
#ifndef ROOTFLOW_TESTS_EXACT_FLOW_HPP
#define ROOTFLOW_TESTS_EXACT_FLOW_HPP

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <stdexcept>
#include <vector>

namespace oracle {

using boost::multiprecision::cpp_rational;
using big_float = boost::multiprecision::cpp_bin_float_50;

// Gamma(x) = value * pi^(half_pi / 2), for x a positive integer or a half integer.
struct ExactGamma {
    cpp_rational value;
    int half_pi = 0;
    bool pole = false;
};

inline big_float to_float(const cpp_rational& x) {
    return big_float(numerator(x)) / big_float(denominator(x));
}

inline bool is_integer(const cpp_rational& x) { return denominator(x) == 1; }

inline ExactGamma exact_gamma(const cpp_rational& x) {
    if (is_integer(x)) {
        if (x <= 0) return {0, 0, true};
        cpp_rational v = 1;
        for (cpp_rational k = 2; k < x; k += 1) v *= k;
        return {v, 0, false};
    }
    if (denominator(x) != 2) throw std::invalid_argument("oracle handles integer and half-integer Gamma arguments");
    // start from Gamma(1/2) = sqrt(pi) and walk with Gamma(x+1) = x Gamma(x)
    cpp_rational y(1, 2), v = 1;
    while (y < x) {
        v *= y;
        y += 1;
    }
    while (y > x) {
        y -= 1;
        v /= y;
    }
    return {v, 1, false};
}

// Term c * N^(-nb) * pi^(half_pi/2) * z^e.
struct Term {
    cpp_rational c;
    int half_pi = 0;
};

struct ExactPoly {
    std::map<cpp_rational, Term> terms;  // exponent -> term
    int applications = 0;                // number of N^{-b} factors
};

inline ExactPoly apply_flow_operator(const ExactPoly& p, const cpp_rational& a, const cpp_rational& b) {
    ExactPoly out;
    out.applications = p.applications + 1;
    for (const auto& [e, term] : p.terms) {
        if (term.c == 0) continue;
        const ExactGamma num = exact_gamma(e + 1);
        const ExactGamma den = exact_gamma(e + 1 - b);
        if (den.pole) continue;  // 1/Gamma vanishes
        if (num.pole) throw std::logic_error("numerator pole in oracle");
        const cpp_rational e_new = e - b + a;
        if (e_new < 0) continue;  // negative powers are discarded
        Term t{term.c * num.value / den.value, term.half_pi + num.half_pi - den.half_pi};
        auto [it, inserted] = out.terms.emplace(e_new, t);
        if (!inserted) throw std::logic_error("oracle terms collide");
    }
    return out;
}

// Coefficients of Q_t = z^{-steps (a-b)} (D^{a,b})^steps P_0, indexed by the
// source power j, as high-precision floats (0 where the term died).
inline std::vector<big_float> exact_flow(const std::vector<cpp_rational>& c0, const cpp_rational& a,
                                         const cpp_rational& b, int steps, unsigned N) {
    ExactPoly p;
    for (std::size_t j = 0; j < c0.size(); ++j) p.terms.emplace(cpp_rational(j), Term{c0[j], 0});
    for (int m = 0; m < steps; ++m) p = apply_flow_operator(p, a, b);

    const cpp_rational shift = cpp_rational(steps) * (a - b);
    std::vector<big_float> out(c0.size(), big_float(0));
    const big_float pi = boost::math::constants::pi<big_float>();
    const big_float nb = pow(big_float(N), to_float(-b * steps));
    for (const auto& [e, term] : p.terms) {
        const cpp_rational j = e - shift;
        if (!is_integer(j) || j < 0 || j >= static_cast<long>(c0.size())) throw std::logic_error("oracle index");
        const auto idx = static_cast<std::size_t>(numerator(j));
        out[idx] = to_float(term.c) * nb * pow(pi, big_float(term.half_pi) / 2);
    }
    return out;
}

}  // namespace oracle

#endif  // ROOTFLOW_TESTS_EXACT_FLOW_HPP
