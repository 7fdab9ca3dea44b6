// Acceptance criteria AC1..AC10. One line per criterion; exit status 1 when
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <time.h>

#include <tmreach/activation.hpp>
#include <tmreach/io.hpp>
#include <tmreach/propagation.hpp>
#include <tmreach/simulation.hpp>
#include <tmreach/verifier.hpp>

using namespace tmreach;
namespace fs = std::filesystem;

namespace
{

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::mt19937_64 gen(7340131);

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }

std::string fixture(const std::string &name) { return std::string(TMREACH_FIXTURES) + "/" + name; }

std::string fmt(const char *f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- AC1, AC2

Outcome ac1()
{
    std::size_t checked = 0;
    for (int r = 0; r < 50; ++r) {
        const double a = -uniform(0.01, 5);
        const double b = uniform(0.01, 5);
        const Interval range(a, b);
        std::vector<LocalPolynomial> p;
        for (unsigned k = 1; k <= 7; ++k) {
            p.push_back(bernstein_poly(ActivationKind::relu, range, k));
        }
        for (int i = 0; i < 1000; ++i) {
            const double x = i == 0 ? 0.0 : uniform(a, b);
            const double relu = std::max(x, 0.0);
            for (unsigned k = 1; k <= 6; ++k) {
                const double pk = p[k - 1](x);
                const double p0 = p[k - 1](0.0);
                const double tol = 1e-12 * (1 + std::fabs(pk));
                ++checked;
                if (relu < 0 || relu > pk + tol) {
                    return {false, "ReLU above p_" + std::to_string(k) + fmt(" at x=%g", x)};
                }
                if (pk - relu > p0 + tol) {
                    return {false, "p_" + std::to_string(k) + " - ReLU exceeds p_k(0)" + fmt(" at x=%g", x)};
                }
                if (p[k](x) > pk + 1e-12) {
                    return {false, "p_" + std::to_string(k + 1) + " above p_" + std::to_string(k) + fmt(" at x=%g", x)};
                }
            }
        }
    }
    return {true, std::to_string(checked) + " point checks"};
}

Outcome ac2()
{
    const double ulp = std::numeric_limits<double>::epsilon();
    double worst = 0;
    for (int r = 0; r < 50; ++r) {
        const Interval range(-uniform(0.01, 5), uniform(0.01, 5));
        for (unsigned k = 1; k <= 6; ++k) {
            const LocalPolynomial p = bernstein_poly(ActivationKind::relu, range, k);
            const UnivariateTM t = relu_tm(range, k);
            // Machine precision at the scale of the range: the node values are of that size.
            const double scale = std::max(-range.lo(), range.hi());
            const double half = p(0.0) / 2;
            worst = std::max(worst, std::fabs(t.remainder.hi() - half) / (scale * ulp));
            if (t.remainder.lo() != -t.remainder.hi()) {
                return {false, "remainder not symmetric"};
            }
        }
    }
    if (worst > 32) {
        return {false, fmt("half-width off p_k(0)/2 by %.1f ulp of the range", worst)};
    }
    const double h1 = relu_tm(Interval(-1, 1), 1).remainder.hi();
    const double h2 = relu_tm(Interval(-1, 1), 2).remainder.hi();
    if (std::fabs(h1 - 0.25) > 0.25 * ulp || std::fabs(h2 - 0.125) > 0.125 * ulp) {
        return {false, fmt("hand cases: k=1 gives %.17g", h1) + fmt(", k=2 gives %.17g", h2)};
    }
    return {true, fmt("max deviation %.1f ulp of the range; [-1,1] k=1 -> 1/4, k=2 -> 1/8", worst)};
}

// ---------------------------------------------------------------- AC3

Outcome ac3()
{
    const unsigned k = 3;
    const auto dom = make_domain(Box{Interval(-1, 1)});
    const SparsePolynomial q(1, {{Monomial{1}, 0.1}, {Monomial{2}, -0.1}});
    const TaylorModel qj(q, Interval(-0.1, 0.1), dom, k);
    const UnivariateTM p1{LocalPolynomial{0, 1, {0.5, 0.25, 0, -0.02083}, 0}, Interval(-7.93e-5, 1.92e-4),
                          Interval(-1, 1)};
    const UnivariateTM p2{LocalPolynomial{0, 1, {0.5, 0.24855, 0, -0.004583}, 0}, Interval(-2.42e-4, 2.42e-4),
                          Interval(-1, 1)};
    const Interval r1 = compose(p1, qj, k).remainder();
    const Interval r2 = compose(p2, qj, k).remainder();
    const auto rel = [](double got, double want) { return std::fabs(got - want) / std::fabs(want); };
    const bool ordered = r2.width() < r1.width();
    const double e1 = std::max(rel(r1.lo(), -0.0466), rel(r1.hi(), 0.0477));
    const double e2 = std::max(rel(r2.lo(), -0.0253), rel(r2.hi(), 0.0253));
    char buf[256];
    std::snprintf(buf, sizeof(buf), "p1 -> [%.4f, %.4f] (rel err %.2f), p2 -> [%.4f, %.4f] (rel err %.2f), %s",
                  r1.lo(), r1.hi(), e1, r2.lo(), r2.hi(), e2, ordered ? "ordering holds" : "ordering WRONG");
    return {ordered && e1 <= 0.25 && e2 <= 0.25, buf};
}

// ---------------------------------------------------------------- AC4, AC5

struct NetCase {
    NeuralNetwork net;
    std::vector<Interval> box;
};

NeuralNetwork random_net(std::size_t in, std::size_t out, const std::vector<std::size_t> &hidden,
                         ActivationKind act)
{
    std::vector<Layer> layers;
    std::size_t prev = in;
    std::vector<std::size_t> widths = hidden;
    widths.push_back(out);
    for (std::size_t l = 0; l < widths.size(); ++l) {
        Layer layer;
        layer.weights = Eigen::MatrixXd(Eigen::Index(widths[l]), Eigen::Index(prev));
        layer.bias = Eigen::VectorXd(Eigen::Index(widths[l]));
        const double s = 1.7 / std::sqrt(double(prev));
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) {
                layer.weights(i, j) = uniform(-s, s);
            }
            layer.bias(i) = uniform(-0.3, 0.3);
        }
        layer.activation = l + 1 == widths.size() ? ActivationKind::affine : act;
        layers.push_back(std::move(layer));
        prev = widths[l];
    }
    return NeuralNetwork(std::move(layers));
}

const std::vector<NetCase> &net_cases()
{
    static const std::vector<NetCase> cases = [] {
        const ActivationKind kinds[] = {ActivationKind::relu, ActivationKind::sigmoid, ActivationKind::tanh,
                                        ActivationKind::affine};
        const std::size_t widths[] = {5, 10, 20, 50, 100};
        std::vector<NetCase> out;
        for (int n = 0; n < 50; ++n) {
            const std::size_t in = 2 + std::size_t(n % 3);
            const std::size_t depth = 1 + std::size_t(n % 3);
            std::vector<std::size_t> hidden;
            for (std::size_t l = 0; l < depth; ++l) {
                // Every fifth net is full size (3 x 100 when depth allows).
                hidden.push_back(n % 5 == 4 ? 100 : widths[std::size_t(uniform(0, 5)) % 5]);
            }
            NetCase c{random_net(in, 1 + std::size_t(n % 2), hidden, kinds[n % 4]), {}};
            for (std::size_t i = 0; i < in; ++i) {
                const double w = uniform(0.05, 1.0);
                const double mid = uniform(-1, 1);
                c.box.push_back(Interval(mid - w / 2, mid + w / 2));
            }
            out.push_back(std::move(c));
        }
        return out;
    }();
    return cases;
}

TMVector box_tms(const std::vector<Interval> &box, unsigned order)
{
    const auto dom = make_domain(Box(std::vector<Interval>(box.size(), Interval(-1, 1))));
    TMVector v;
    for (std::size_t i = 0; i < box.size(); ++i) {
        v.push_back(TaylorModel::variable(i, dom, order) * box[i].radius() + box[i].mid());
    }
    return v;
}

struct PropagatedCase {
    TMVector plain;
    TMVector symbolic;
};

const std::vector<PropagatedCase> &propagated()
{
    static const std::vector<PropagatedCase> out = [] {
        std::vector<PropagatedCase> r;
        ThreadPool pool(1);
        const PropagationSettings settings;
        for (const auto &c : net_cases()) {
            const TMVector in = box_tms(c.box, settings.order);
            r.push_back({propagate_plain(c.net, in, settings, pool), propagate_symbolic(c.net, in, settings, pool)});
        }
        return r;
    }();
    return out;
}

Outcome ac4()
{
    std::size_t violations = 0, samples = 0;
    for (std::size_t n = 0; n < net_cases().size(); ++n) {
        const auto &c = net_cases()[n];
        const auto &res = propagated()[n];
        for (int s = 0; s < 1000; ++s) {
            std::vector<double> pt(c.box.size());
            Eigen::VectorXd x(Eigen::Index(c.box.size()));
            for (std::size_t i = 0; i < c.box.size(); ++i) {
                pt[i] = s == 0 ? -1.0 : s == 1 ? 1.0 : uniform(-1, 1);
                x(Eigen::Index(i)) = c.box[i].mid() + c.box[i].radius() * pt[i];
            }
            const Eigen::VectorXd y = c.net.forward(x);
            for (Eigen::Index j = 0; j < y.size(); ++j) {
                for (const TMVector *tms : {&res.plain, &res.symbolic}) {
                    const auto &tm = (*tms)[std::size_t(j)];
                    if (!tm_enclosure(tm).contains(y(j)) || !tm.evaluate(pt).contains(y(j))) {
                        ++violations;
                    }
                }
            }
            ++samples;
        }
    }
    return {violations == 0,
            std::to_string(samples) + " forward passes, " + std::to_string(violations) + " violations"};
}

Outcome ac5()
{
    std::vector<double> ratios;
    double worst = 0;
    for (const auto &res : propagated()) {
        for (std::size_t j = 0; j < res.plain.size(); ++j) {
            const double wp = res.plain[j].remainder().width();
            const double ws = res.symbolic[j].remainder().width();
            if (wp > 0) {
                ratios.push_back(ws / wp);
                worst = std::max(worst, ws / wp);
            } else if (ws > 0) {
                worst = std::max(worst, HUGE_VAL);
            }
        }
    }
    std::sort(ratios.begin(), ratios.end());
    const double median = ratios.empty() ? 1.0 : ratios[ratios.size() / 2];
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu components, worst ratio %.6f, median ratio %.4f", ratios.size(), worst,
                  median);
    return {worst <= 1 + 1e-6 && median < 1, buf};
}

// ---------------------------------------------------------------- AC6

std::vector<std::string> all_fixtures()
{
    std::vector<std::string> out;
    for (const auto &dir : {fs::path(TMREACH_FIXTURES), fs::path(TMREACH_FIXTURES) / "benchmarks"}) {
        for (const auto &e : fs::directory_iterator(dir)) {
            if (e.path().extension() == ".json") {
                out.push_back(e.path().string());
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string exported(const NNCSModel &m)
{
    const VerificationResult r = verify(m);
    std::vector<std::size_t> vars;
    for (std::size_t i = 0; i < m.plant.dim(); ++i) {
        vars.push_back(i);
    }
    std::ostringstream out;
    write_flowpipes(out, r.pipes, m.plant.state_vars, vars);
    out << "RESULT " << verdict_name(r.verdict.tag) << "\n";
    return out.str();
}

Outcome ac6()
{
    std::size_t n = 0;
    for (const auto &path : all_fixtures()) {
        NNCSModel m = load_spec(path);
        m.settings.threads = 1;
        const std::string one = exported(m);
        m.settings.threads = 12;
        const std::string twelve = exported(m);
        if (one != twelve) {
            return {false, "exports differ for " + fs::path(path).filename().string()};
        }
        ++n;
    }
    return {true, std::to_string(n) + " fixtures byte-identical"};
}

// ---------------------------------------------------------------- AC7, AC8

// Trial i: the box vertices first (while i < 2^dims), then uniform draws.
std::vector<double> sample_box(const Box &b, int i)
{
    std::vector<double> x;
    const bool vertex = b.size() < 30 && i < (1 << b.size());
    for (std::size_t d = 0; d < b.size(); ++d) {
        const Interval &iv = b[d];
        if (iv.is_point()) {
            x.push_back(iv.lo());
        } else if (vertex) {
            x.push_back((i >> d) & 1 ? iv.hi() : iv.lo());
        } else {
            x.push_back(uniform(iv.lo(), iv.hi()));
        }
    }
    return x;
}

// Trace step: 20 samples per flowpipe slice.
double trace_step(const NNCSModel &m) { return m.ode_step() / 20; }

Outcome ac7()
{
    std::string detail;
    bool pass = true;
    for (const std::string name : {"exp_growth.json", "oscillator.json", "docking.json"}) {
        const NNCSModel m = load_spec(fixture(name));
        const VerificationResult r = verify(m);
        std::size_t checked = 0, violations = 0;
        if (r.pipes.size() != m.steps * std::size_t(std::llround(m.control_step / m.ode_step()))) {
            pass = false;
            detail += name + std::string(": flowpipes cover only part of the horizon; ");
            continue;
        }
        for (int i = 0; i < 1000; ++i) {
            const std::vector<double> x0 = sample_box(m.initial, i);
            const Trace tr = simulate(m, x0, trace_step(m));
            const ContainmentReport rep = containment_check(tr, r.pipes, r.symbols.preimage(x0));
            checked += rep.checked;
            violations += rep.violations.size();
        }
        pass = pass && violations == 0;
        detail += name + ": " + std::to_string(checked) + " checks, " + std::to_string(violations) + " violations; ";
    }
    return {pass, detail};
}

std::vector<Flowpipe> shrink_remainders(std::vector<Flowpipe> pipes)
{
    for (auto &p : pipes) {
        TMVector tms;
        for (const auto &t : p.tms) {
            const Interval r = t.remainder();
            tms.push_back(t.with_remainder(Interval(r.mid() - r.radius() / 10, r.mid() + r.radius() / 10)));
        }
        p.tms = tms;
    }
    return pipes;
}

constexpr double kFineTolerance = 1e-9;

Outcome ac8()
{
    std::string detail;
    bool pass = true;
    for (const std::string name : {"docking.json", "benchmarks/b2.json", "benchmarks/b5.json", "benchmarks/b6.json"}) {
        const NNCSModel m = load_spec(fixture(name));
        const VerificationResult r = verify(m);
        const std::vector<Flowpipe> shrunk = shrink_remainders(r.pipes);
        std::size_t violations = 0, unshrunk = 0;
        for (int i = 0; i < 100; ++i) {
            const std::vector<double> x0 = sample_box(m.initial, i);
            // Fine steps so that integration error stays far below the remainders.
            const Trace tr = simulate(m, x0, m.ode_step() / 100);
            const auto pre = r.symbols.preimage(x0);
            unshrunk += containment_check(tr, r.pipes, pre, kFineTolerance, 5).violations.size();
            violations += containment_check(tr, shrunk, pre, kFineTolerance, 5).violations.size();
        }
        pass = pass && violations > 0 && unshrunk == 0;
        detail += name + ": " + std::to_string(violations) + " violations (" + std::to_string(unshrunk) +
                  " before shrinking); ";
    }
    return {pass, detail};
}

// ---------------------------------------------------------------- AC9

double thread_seconds()
{
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return double(ts.tv_sec) + 1e-9 * double(ts.tv_nsec);
}

struct Timing {
    double plain = 0;
    double symbolic = 0;
    double ratio = 0;
};

// Back-to-back pairs in the calling thread; minimum times and the median of
// the per-pair ratios.
Timing time_propagation(const NeuralNetwork &net, const TMVector &in, const PropagationSettings &settings)
{
    ThreadPool pool(1);
    Timing t{HUGE_VAL, HUGE_VAL, 0};
    std::vector<double> ratios;
    for (int rep = 0; rep < 31; ++rep) {
        double secs[2];
        for (int symbolic = 0; symbolic < 2; ++symbolic) {
            const double t0 = thread_seconds();
            const TMVector out = propagate(net, in, settings, pool, symbolic == 1);
            secs[symbolic] = thread_seconds() - t0;
            if (out.empty()) {
                return {};
            }
        }
        t.plain = std::min(t.plain, secs[0]);
        t.symbolic = std::min(t.symbolic, secs[1]);
        ratios.push_back(secs[1] / secs[0]);
    }
    std::nth_element(ratios.begin(), ratios.begin() + 15, ratios.end());
    t.ratio = ratios[15];
    return t;
}

constexpr unsigned kScalingOrder = 1;

Outcome ac9()
{
    std::vector<double> ratios;
    std::string detail;
    const std::vector<Interval> box{Interval(-0.1, 0.1), Interval(0.2, 0.3)};
    PropagationSettings settings;
    settings.order = kScalingOrder;
    const TMVector in = box_tms(box, settings.order);
    for (std::size_t m : {2, 4, 8, 16}) {
        const NeuralNetwork net = random_net(2, 2, std::vector<std::size_t>(m, 20), ActivationKind::tanh);
        const Timing t = time_propagation(net, in, settings);
        ratios.push_back(t.ratio);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "M=%zu plain %.4fs symbolic %.4fs ratio %.3f; ", m, t.plain, t.symbolic,
                      t.ratio);
        detail += buf;
    }
    const bool increasing = std::is_sorted(ratios.begin(), ratios.end(), std::less_equal<double>()) &&
                            std::adjacent_find(ratios.begin(), ratios.end()) == ratios.end();
    return {increasing, detail};
}

// ---------------------------------------------------------------- AC10

struct CliRun {
    int status = -1;
    std::string out;
};

CliRun run_cli(const std::string &args)
{
    const std::string cmd = std::string("\"") + TMREACH_CLI + "\" " + args + " 2>/dev/null";
    CliRun r;
    FILE *p = popen(cmd.c_str(), "r");
    if (p == nullptr) {
        return r;
    }
    char buf[512];
    while (std::fgets(buf, sizeof(buf), p) != nullptr) {
        r.out += buf;
    }
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

Outcome ac10()
{
    const fs::path tmp = fs::temp_directory_path() / "tmreach_acceptance";
    fs::remove_all(tmp);
    struct Case {
        const char *name;
        const char *verdict;
        int status;
    };
    const Case cases[] = {{"frozen", "Yes", 0},
                          {"translation", "Yes", 0},
                          {"frozen_excluded", "No", 0},
                          {"guard_straddle", "Unknown", 2},
                          {"divergence", "Unknown", 2}};
    std::string detail;
    bool pass = true;
    for (const auto &c : cases) {
        const fs::path out = tmp / c.name;
        const CliRun r =
            run_cli("verify --spec \"" + fixture(std::string(c.name) + ".json") + "\" --out \"" + out.string() + "\"");
        const bool verdict_ok = r.out.find(std::string("RESULT: ") + c.verdict + "\n") != std::string::npos;
        bool ok = verdict_ok && r.status == c.status;
        if (std::string(c.verdict) == "No") {
            std::ifstream cex(out / "counterexample.csv");
            std::string first;
            ok = ok && std::getline(cex, first) && !first.empty();
        }
        pass = pass && ok;
        detail += std::string(c.name) + (ok ? " ok" : " WRONG") + "; ";
    }
    fs::remove_all(tmp);
    return {pass, detail};
}

} // namespace

// Optional arguments restrict the run to the named criteria, e.g. "AC9".
int main(int argc, char **argv)
{
    const std::vector<std::string> only(argv + 1, argv + argc);
    struct Criterion {
        const char *id;
        Outcome (*run)();
        double limit_seconds;
    };
    const Criterion criteria[] = {{"AC1", ac1, 10},  {"AC2", ac2, 1},   {"AC3", ac3, 1},   {"AC4", ac4, 120},
                                  {"AC5", ac5, 120}, {"AC6", ac6, 60},  {"AC7", ac7, 300}, {"AC8", ac8, 60},
                                  {"AC9", ac9, 600}, {"AC10", ac10, 30}};
    int failures = 0;
    for (const auto &c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = seconds_since(t0);
        if (secs > c.limit_seconds) {
            o.pass = false;
            o.detail += fmt(" [over the %.0fs budget]", c.limit_seconds);
        }
        std::printf("%s %s (%.2fs) %s\n", c.id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
