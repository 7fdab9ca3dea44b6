#include <tmreach/model.hpp>

#include <algorithm>
#include <functional>

#include <tmreach/error.hpp>

namespace tmreach
{

namespace
{

void check_module(const GuardedModule &m, const char *which)
{
    const std::string name(which);
    if (m.identity() && m.input_dim() != m.output_dim()) {
        throw ShapeError(name + ": an identity module needs as many outputs as inputs");
    }
    for (const auto &r : m.rules) {
        if (r.transform.size() != m.output_dim()) {
            throw ShapeError(name + ": every transform must define each output");
        }
    }
}

bool guard_holds(const std::vector<Constraint> &guard, std::span<const double> x)
{
    return std::all_of(guard.begin(), guard.end(), [&](const Constraint &c) {
        return holds(c, evaluate<double>(c.g, x, 0.0));
    });
}

bool certainly_false(const std::vector<Constraint> &guard, std::span<const Interval> box)
{
    for (const auto &c : guard) {
        if (classify(c, evaluate<Interval>(c.g, box, Interval(0))) == Truth::no) {
            return true;
        }
    }
    return false;
}

} // namespace

void NNCSModel::validate() const
{
    plant.validate();
    if (initial.size() != plant.dim()) {
        throw ShapeError("initial set dimension does not match the state");
    }
    if (net.layers().empty()) {
        throw ShapeError("the controller network has no layers");
    }
    if (pre.input_dim() != plant.dim()) {
        throw ShapeError("preprocessing must read the state variables");
    }
    if (pre.output_dim() != net.input_dim()) {
        throw ShapeError("preprocessing outputs do not match the network input");
    }
    if (post.input_dim() != net.output_dim()) {
        throw ShapeError("postprocessing inputs do not match the network output");
    }
    if (post.output_dim() != plant.control_vars.size()) {
        throw ShapeError("postprocessing outputs do not match the plant controls");
    }
    check_module(pre, "preprocessing");
    check_module(post, "postprocessing");
    if (!(control_step > 0)) {
        throw ConfigError("control step must be positive");
    }
    if (steps == 0) {
        throw ConfigError("at least one control step is required");
    }
    if (settings.order == 0) {
        throw ConfigError("Taylor model order must be at least 1");
    }
    if (settings.sim_substeps == 0) {
        throw ConfigError("simulation substeps must be positive");
    }
    slices_per_step(control_step, ode_step());
    for (std::size_t i = 0; i < pre.rules.size(); ++i) {
        for (std::size_t j = i + 1; j < pre.rules.size(); ++j) {
            if (guard_overlap(pre.rules[i].guard, pre.rules[j].guard, initial)) {
                throw ConfigError("preprocessing guards " + std::to_string(i + 1) + " and " +
                                  std::to_string(j + 1) + " overlap on the initial set");
            }
        }
    }
}

InitialSymbols::InitialSymbols(const Box &initial)
{
    for (const auto &iv : initial) {
        center.push_back(iv.mid());
        if (iv.width() > 0) {
            // Rounded up, so c + r * [-1, 1] covers the box.
            radius.push_back(iv.radius());
            symbol.push_back(count++);
        } else {
            radius.push_back(0);
            symbol.push_back(npos);
        }
    }
}

TMVector InitialSymbols::tms(const DomainPtr &domain, unsigned order) const
{
    TMVector v;
    for (std::size_t i = 0; i < center.size(); ++i) {
        if (symbol[i] == npos) {
            v.push_back(TaylorModel::constant(center[i], domain, order));
        } else {
            const TaylorModel s = TaylorModel::variable(symbol[i], domain, order);
            v.push_back(tm_add_constant(tm_scale(s, radius[i]), center[i]));
        }
    }
    return v;
}

std::vector<double> InitialSymbols::preimage(std::span<const double> x0) const
{
    std::vector<double> s(count);
    for (std::size_t i = 0; i < center.size(); ++i) {
        if (symbol[i] != npos) {
            s[symbol[i]] = std::clamp((x0[i] - center[i]) / radius[i], -1.0, 1.0);
        }
    }
    return s;
}

std::vector<double> apply_module(const GuardedModule &module, std::span<const double> x)
{
    if (module.identity()) {
        return std::vector<double>(x.begin(), x.end());
    }
    for (const auto &r : module.rules) {
        if (guard_holds(r.guard, x)) {
            std::vector<double> out;
            for (const auto &e : r.transform) {
                out.push_back(evaluate<double>(e, x, 0.0));
            }
            return out;
        }
    }
    throw DomainError("no guard of the module holds at the current state");
}

std::optional<std::vector<double>> guard_overlap(const std::vector<Constraint> &a, const std::vector<Constraint> &b,
                                                 const Box &box)
{
    constexpr int kMaxDepth = 8;
    std::optional<std::vector<double>> witness;
    std::function<void(std::vector<Interval>, int)> search = [&](std::vector<Interval> cell, int depth) {
        if (witness || certainly_false(a, cell) || certainly_false(b, cell)) {
            return;
        }
        std::vector<double> mid;
        for (const auto &iv : cell) {
            mid.push_back(iv.mid());
        }
        if (guard_holds(a, mid) && guard_holds(b, mid)) {
            witness = mid;
            return;
        }
        if (depth == kMaxDepth || cell.empty()) {
            return;
        }
        const auto widest = std::max_element(cell.begin(), cell.end(), [](const Interval &x, const Interval &y) {
            return x.width() < y.width();
        });
        if (widest->width() == 0) {
            return;
        }
        const double m = widest->mid();
        const Interval whole = *widest;
        *widest = Interval(whole.lo(), m);
        search(cell, depth + 1);
        *widest = Interval(m, whole.hi());
        search(cell, depth + 1);
    };
    search(box.intervals(), 0);
    return witness;
}

std::vector<double> control_input(const NNCSModel &model, std::span<const double> x)
{
    const std::vector<double> z = apply_module(model.pre, x);
    const Eigen::VectorXd v = model.net.forward(Eigen::Map<const Eigen::VectorXd>(z.data(), Eigen::Index(z.size())));
    const std::vector<double> vv(v.data(), v.data() + v.size());
    return apply_module(model.post, vv);
}

} // namespace tmreach
