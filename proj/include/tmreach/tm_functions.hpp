#ifndef TMREACH_TM_FUNCTIONS_HPP
#define TMREACH_TM_FUNCTIONS_HPP

#include <vector>

#include <tmreach/interval.hpp>
#include <tmreach/taylor_model.hpp>

namespace tmreach
{

enum class ElementaryFunction { exp, recip, sqrt, log, sin, cos, tanh, sigmoid };

// Enclosures of the Taylor coefficients f^(i)(c) / i! for i = 0..k.
std::vector<Interval> taylor_coefficients(ElementaryFunction f, double c, unsigned k);

// Encloses f^(n)(xi) / n! over xi in x.
Interval derivative_bound(ElementaryFunction f, const Interval &x, unsigned n);

// Dense coefficients (in y) of the polynomial D_n with d^n/dx^n tanh(x) =
// D_n(tanh(x)); likewise for the logistic sigmoid with y = sigmoid(x).
std::vector<double> tanh_derivative_poly(unsigned n);
std::vector<double> sigmoid_derivative_poly(unsigned n);

// Order-k expansion at the midpoint of the argument's enclosure with a
// Lagrange remainder. DomainError when the enclosure leaves the function's
// domain (0 for recip; nonpositive values for sqrt and log).
TaylorModel tm_apply(ElementaryFunction f, const TaylorModel &t);

inline TaylorModel tm_exp(const TaylorModel &t) { return tm_apply(ElementaryFunction::exp, t); }
inline TaylorModel tm_recip(const TaylorModel &t) { return tm_apply(ElementaryFunction::recip, t); }
inline TaylorModel tm_sqrt(const TaylorModel &t) { return tm_apply(ElementaryFunction::sqrt, t); }
inline TaylorModel tm_log(const TaylorModel &t) { return tm_apply(ElementaryFunction::log, t); }
inline TaylorModel tm_sin(const TaylorModel &t) { return tm_apply(ElementaryFunction::sin, t); }
inline TaylorModel tm_cos(const TaylorModel &t) { return tm_apply(ElementaryFunction::cos, t); }
inline TaylorModel tm_tanh(const TaylorModel &t) { return tm_apply(ElementaryFunction::tanh, t); }
inline TaylorModel tm_sigmoid(const TaylorModel &t) { return tm_apply(ElementaryFunction::sigmoid, t); }

TaylorModel tm_div(const TaylorModel &a, const TaylorModel &b);
// Integer power by squaring; negative exponents go through tm_recip.
TaylorModel tm_pow(const TaylorModel &t, int n);

inline TaylorModel operator/(const TaylorModel &a, const TaylorModel &b) { return tm_div(a, b); }

} // namespace tmreach

#endif
