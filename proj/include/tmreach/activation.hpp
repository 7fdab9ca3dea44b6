#ifndef TMREACH_ACTIVATION_HPP
#define TMREACH_ACTIVATION_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <tmreach/interval.hpp>
#include <tmreach/taylor_model.hpp>

namespace tmreach
{

enum class ActivationKind { relu, sigmoid, tanh, affine };

std::string activation_name(ActivationKind k);
// Accepts ReLU, sigmoid, tanh and affine; ParseError otherwise.
ActivationKind parse_activation(std::string_view name);

double activate(ActivationKind k, double z);
Interval activate(ActivationKind k, const Interval &z);
// Upper bound on |sigma'| over the range.
double activation_lipschitz(ActivationKind k, const Interval &range);

// A univariate polynomial stored in the normalized variable s = (z - center) / radius,
// which maps the approximation range onto [-1, 1]. radius == 0 means a constant.
struct LocalPolynomial {
    double center = 0;
    double radius = 1;
    std::vector<double> coeffs;
    // Bound on |exact - stored| over s in [-1, 1] from rounding the coefficients.
    double coeff_error = 0;

    unsigned degree() const { return coeffs.empty() ? 0 : unsigned(coeffs.size() - 1); }
    double operator()(double z) const;
    // Dense coefficients in z; exact only when center == 0 and radius == 1.
    std::vector<double> power_basis() const;
};

// sigma(z) in poly(z) + remainder for z in range.
struct UnivariateTM {
    LocalPolynomial poly;
    Interval remainder{0};
    Interval range{0};
};

// Order-k Bernstein polynomial of sigma over [a, b] with node values
// sigma(a + i (b - a) / k).
LocalPolynomial bernstein_poly(ActivationKind k, const Interval &range, unsigned order);

// Symmetric [-eps, eps] with eps = max over m midpoint samples of |p - sigma|
// plus L (b - a) / m, widened by the polynomial's rounding error.
Interval bernstein_remainder(ActivationKind k, const LocalPolynomial &p, const Interval &range, unsigned samples,
                             double lipschitz);

// Upper bound on |p'(z)| over the range the polynomial is normalized to.
double poly_lipschitz(const LocalPolynomial &p);

UnivariateTM relu_tm(const Interval &range, unsigned order);
UnivariateTM bernstein_tm(ActivationKind k, const Interval &range, unsigned order, unsigned samples);
// Expansion at the range midpoint; sigmoid and tanh only.
UnivariateTM taylor_tm(ActivationKind k, const Interval &range, unsigned order, unsigned samples);

// p(input) + I in order-k Taylor model arithmetic.
TaylorModel compose(const UnivariateTM &a, const TaylorModel &input, unsigned order);

struct ActivationSettings {
    unsigned bernstein_order = 4;
    unsigned samples = 100;
};

// Both candidates composed with the input; the narrower remainder wins and
// ties go to Bernstein. ReLU has only the Bernstein candidate.
struct Selection {
    UnivariateTM chosen;
    bool bernstein = true;
    std::optional<TaylorModel> composed;
};
Selection select_activation(ActivationKind k, const Interval &range, const TaylorModel &input, unsigned order,
                            const ActivationSettings &settings);
TaylorModel select_activation_tm(ActivationKind k, const TaylorModel &input, unsigned order,
                                 const ActivationSettings &settings);

// p(z) = q z + residual(z). q is the linear coefficient of the normalized form
// (the derivative at the center); residual carries the rest.
std::pair<double, UnivariateTM> linear_part_split(const UnivariateTM &a);

} // namespace tmreach

#endif
