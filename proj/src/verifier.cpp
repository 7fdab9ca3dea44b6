#include <tmreach/verifier.hpp>

#include <algorithm>
#include <chrono>
#include <random>

#include <tmreach/error.hpp>
#include <tmreach/propagation.hpp>
#include <tmreach/thread_pool.hpp>

namespace tmreach
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

TaylorModel constraint_tm(const Constraint &c, const TMVector &x)
{
    return evaluate<TaylorModel>(c.g, std::span<const TaylorModel>(x.components()), x[0]);
}

bool all_hold(const std::vector<Constraint> &conj, std::span<const double> x)
{
    return std::all_of(conj.begin(), conj.end(),
                       [&](const Constraint &c) { return holds(c, evaluate<double>(c.g, x, 0.0)); });
}

bool excluded_on(const std::vector<TaylorModel> &g, const std::vector<Constraint> &avoid, Box &dom,
                 std::size_t tau, int depth)
{
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Interval r = poly_range(g[i].poly(), dom, RangeMethod::tight) + g[i].remainder();
        if (classify(avoid[i], r) == Truth::no) {
            return true;
        }
    }
    if (depth == 0) {
        return false;
    }
    const Interval whole = dom[tau];
    const double m = whole.mid();
    dom[tau] = Interval(whole.lo(), m);
    const bool left = excluded_on(g, avoid, dom, tau, depth - 1);
    bool right = false;
    if (left) {
        dom[tau] = Interval(m, whole.hi());
        right = excluded_on(g, avoid, dom, tau, depth - 1);
    }
    dom[tau] = whole;
    return left && right;
}

} // namespace

TMVector apply_guarded(const GuardedModule &module, const TMVector &input)
{
    if (input.size() != module.input_dim()) {
        throw ShapeError("module input dimension mismatch");
    }
    if (module.identity()) {
        return input;
    }
    std::optional<std::size_t> chosen;
    for (std::size_t r = 0; r < module.rules.size(); ++r) {
        std::vector<Interval> ranges;
        for (const auto &c : module.rules[r].guard) {
            ranges.push_back(tm_enclosure(constraint_tm(c, input), RangeMethod::tight));
        }
        const Truth t = classify(module.rules[r].guard, ranges);
        if (t == Truth::maybe || (t == Truth::yes && chosen)) {
            throw GuardStraddle("the enclosure is not inside exactly one guard (rule " + std::to_string(r + 1) +
                                ")");
        }
        if (t == Truth::yes) {
            chosen = r;
        }
    }
    if (!chosen) {
        throw GuardStraddle("the enclosure satisfies no guard");
    }
    TMVector out;
    for (const auto &e : module.rules[*chosen].transform) {
        out.push_back(evaluate<TaylorModel>(e, std::span<const TaylorModel>(input.components()), input[0]));
    }
    return out;
}

bool avoid_excluded(const std::vector<Constraint> &avoid, const Flowpipe &pipe, int max_depth)
{
    std::vector<TaylorModel> g;
    for (const auto &c : avoid) {
        g.push_back(constraint_tm(c, pipe.tms));
    }
    Box dom = *pipe.tms.domain();
    return excluded_on(g, avoid, dom, time_var(dom), max_depth);
}

bool target_reached(const std::vector<Constraint> &target, const TMVector &x)
{
    return std::all_of(target.begin(), target.end(), [&](const Constraint &c) {
        return classify(c, tm_enclosure(constraint_tm(c, x), RangeMethod::tight)) == Truth::yes;
    });
}

const char *verdict_name(VerdictTag tag)
{
    switch (tag) {
    case VerdictTag::yes:
        return "Yes";
    case VerdictTag::no:
        return "No";
    case VerdictTag::unknown:
        break;
    }
    return "Unknown";
}

VerificationResult verify(const NNCSModel &model)
{
    model.validate();
    const double delta = model.ode_step();
    const unsigned k = model.settings.order;
    VerificationResult result{Verdict{}, {}, InitialSymbols(model.initial)};
    const auto dom = make_domain(flow_domain(result.symbols.count, delta));
    TMVector x = result.symbols.tms(dom, k);

    PropagationSettings ps;
    ps.order = k;
    ps.activation = model.settings.activation;
    OdeSettings os;
    os.order = k;
    ThreadPool pool(model.settings.threads);

    Verdict &v = result.verdict;
    bool completed = true;
    std::optional<std::size_t> unexcluded;
    for (std::size_t i = 0; i < model.steps; ++i) {
        StepStats stats;
        stats.step = i;
        try {
            auto start = Clock::now();
            const TMVector y = apply_guarded(model.pre, x);
            const TMVector out = propagate(model.net, y, ps, pool, model.settings.symbolic_remainder);
            const TMVector u = apply_guarded(model.post, out);
            stats.nn_seconds = seconds_since(start);

            start = Clock::now();
            SegmentChain chain = flowpipe_segment_chain(model.plant, x, u, model.control_step, delta, os,
                                                        double(i) * model.control_step, i);
            if (model.avoid && !unexcluded) {
                for (const auto &p : chain.pipes) {
                    if (!avoid_excluded(*model.avoid, p)) {
                        unexcluded = i;
                        break;
                    }
                }
            }
            stats.ode_seconds = seconds_since(start);
            for (auto &p : chain.pipes) {
                result.pipes.push_back(std::move(p));
            }
            x = std::move(chain.end);
            stats.enclosure = x.enclosure();
        } catch (const GuardStraddle &e) {
            v.diagnostic = "step " + std::to_string(i) + ": guard straddle: " + e.what();
            completed = false;
        } catch (const RemainderDivergence &e) {
            v.diagnostic = "step " + std::to_string(i) + ": remainder divergence: " + e.what();
            completed = false;
        } catch (const DomainError &e) {
            v.diagnostic = "step " + std::to_string(i) + ": domain error: " + e.what();
            completed = false;
        }
        v.nn_seconds += stats.nn_seconds;
        v.ode_seconds += stats.ode_seconds;
        if (!completed) {
            break;
        }
        v.evidence.push_back(std::move(stats));
    }
    if (!completed) {
        v.tag = VerdictTag::unknown;
        return result;
    }
    const bool reached = !model.target || target_reached(*model.target, x);
    if (reached && !unexcluded) {
        v.tag = VerdictTag::yes;
        return result;
    }
    v.counterexample = falsify(model, model.settings.falsify_trials, model.settings.seed);
    if (v.counterexample) {
        v.tag = VerdictTag::no;
        v.diagnostic = v.counterexample->reason;
    } else {
        v.tag = VerdictTag::unknown;
        v.diagnostic = unexcluded ? "avoid set not excluded at step " + std::to_string(*unexcluded)
                                  : std::string("target not proven at the final step");
    }
    return result;
}

std::optional<Counterexample> find_violation(const NNCSModel &model, const Trace &trace)
{
    if (trace.points.empty()) {
        return std::nullopt;
    }
    auto step_of = [&](double t) {
        const auto s = static_cast<std::size_t>(t / model.control_step * (1 - 1e-12));
        return std::min(s, model.steps == 0 ? 0 : model.steps - 1);
    };
    if (model.avoid) {
        for (const auto &p : trace.points) {
            if (all_hold(*model.avoid, p.x)) {
                return Counterexample{trace, trace.points.front().x, step_of(p.t), p.t, "trace enters the avoid set"};
            }
        }
    }
    if (model.target) {
        const auto &last = trace.points.back();
        if (!all_hold(*model.target, last.x)) {
            return Counterexample{trace, trace.points.front().x, step_of(last.t), last.t,
                                  "trace misses the target at the final step"};
        }
    }
    return std::nullopt;
}

std::optional<Counterexample> falsify(const NNCSModel &model, unsigned trials, std::uint64_t seed)
{
    const double h = model.ode_step() / model.settings.sim_substeps;
    std::mt19937_64 rng(seed);
    for (unsigned n = 0; n < trials; ++n) {
        std::vector<double> x0;
        for (const auto &iv : model.initial) {
            x0.push_back(n == 0 ? iv.mid() : std::uniform_real_distribution<double>(iv.lo(), iv.hi())(rng));
        }
        try {
            Trace tr = simulate(model, x0, h);
            tr.seed = seed + n;
            if (auto cex = find_violation(model, tr)) {
                return cex;
            }
        } catch (const Error &) {
            // Traces that leave the expressions' domain are not counterexamples.
        }
    }
    return std::nullopt;
}

} // namespace tmreach
