#include <tmreach/propagation.hpp>

#include <limits>
#include <optional>

#include <tmreach/error.hpp>

namespace tmreach
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_input(const NeuralNetwork &net, const TMVector &input)
{
    if (input.size() != net.input_dim()) {
        throw ShapeError("propagation: input has " + std::to_string(input.size()) + " components, network expects " +
                         std::to_string(net.input_dim()));
    }
}

std::vector<double> norms_of(const TMVector &v)
{
    std::vector<double> n;
    n.reserve(v.size());
    for (const auto &c : v) {
        n.push_back(c.poly().abs_norm(*c.domain()));
    }
    return n;
}

TMVector collect(std::vector<std::optional<TaylorModel>> &slots)
{
    TMVector out;
    for (auto &s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

TaylorModel zero_like(const TaylorModel &z) { return TaylorModel::constant(0.0, z.domain(), z.order()); }

} // namespace

NeuronImage neuron_image(ActivationKind kind, const TaylorModel &z, const PropagationSettings &settings)
{
    const unsigned k = settings.order;
    if (kind == ActivationKind::affine) {
        return {1.0, zero_like(z), z};
    }
    const Interval range = tm_enclosure(z, RangeMethod::tight);
    std::vector<UnivariateTM> cands{
        bernstein_tm(kind, range, settings.activation.bernstein_order, settings.activation.samples)};
    if (kind != ActivationKind::relu) {
        cands.push_back(taylor_tm(kind, range, settings.activation.bernstein_order, settings.activation.samples));
    }
    std::optional<NeuronImage> best;
    for (const UnivariateTM &c : cands) {
        auto [q, res] = linear_part_split(c);
        TaylorModel r = compose(res, z, k);
        TaylorModel full = q == 0 ? r : tm_scale(z, q) + r;
        if (!best || full.remainder().width() < best->full.remainder().width()) {
            best = NeuronImage{q, std::move(r), std::move(full)};
        }
    }
    return std::move(*best);
}

TMVector propagate_plain(const NeuralNetwork &net, const TMVector &input, const PropagationSettings &settings,
                         ThreadPool &pool)
{
    check_input(net, input);
    TMVector v = input;
    for (const Layer &layer : net.layers()) {
        const std::vector<double> norms = norms_of(v);
        std::vector<std::optional<TaylorModel>> out(std::size_t(layer.weights.rows()));
        pool.parallel_for(out.size(), [&](std::size_t j) {
            const auto row = Eigen::Index(j);
            const TaylorModel z = tm_linear_row(layer.weights.row(row), layer.bias(row), v, norms);
            out[j] = neuron_image(layer.activation, z, settings).full;
        });
        v = collect(out);
    }
    return v;
}

Interval SymbolicRemainderState::image(Eigen::Index row) const
{
    double center = 0;
    double rad = 0;
    double scale = 0;
    std::size_t terms = 0;
    for (const Source &s : sources) {
        for (std::size_t k = 0; k < s.box.size(); ++k) {
            const auto col = Eigen::Index(k);
            const double t = s.transport(row, col);
            const Interval &b = s.box[k];
            const double m = b.mid();
            center += t * m;
            scale += std::fabs(t * m);
            rad += std::fabs(t) * b.radius() + s.error(row, col) * b.mag();
            ++terms;
        }
    }
    const double gamma = double(terms + 4) * kRelEps;
    rad = rad * (1 + gamma) + gamma * scale + gamma * std::fabs(center);
    return Interval(center - rad, center + rad);
}

TMVector propagate_symbolic(const NeuralNetwork &net, const TMVector &input, const PropagationSettings &settings,
                            ThreadPool &pool)
{
    check_input(net, input);
    SymbolicRemainderState state;

    // Split the input into polynomial parts and a first remainder source.
    auto split_remainders = [&state](const TMVector &v) {
        TMVector q;
        SymbolicRemainderState::Source src;
        bool any = false;
        for (const auto &c : v) {
            src.box.push_back(c.remainder());
            any = any || !(c.remainder() == Interval(0));
            q.push_back(c.with_remainder(Interval(0)));
        }
        if (any) {
            const auto n = Eigen::Index(v.size());
            src.transport = Eigen::MatrixXd::Identity(n, n);
            src.error = Eigen::MatrixXd::Zero(n, n);
            state.sources.push_back(std::move(src));
        }
        return q;
    };

    TMVector q = split_remainders(input);
    for (const Layer &layer : net.layers()) {
        const Eigen::MatrixXd &W = layer.weights;
        const Eigen::MatrixXd absW = W.cwiseAbs();
        const double gamma_n = double(W.cols() + 2) * kRelEps;

        // Transport every source through W.
        for (auto &s : state.sources) {
            const Eigen::MatrixXd wt = W * s.transport;
            s.error = absW * s.error + gamma_n * (absW * s.transport.cwiseAbs());
            s.transport = wt;
        }

        const std::vector<double> norms = norms_of(q);
        const auto rows = std::size_t(W.rows());
        std::vector<std::optional<TaylorModel>> next(rows);
        Eigen::VectorXd Q(W.rows());
        pool.parallel_for(rows, [&](std::size_t j) {
            const auto row = Eigen::Index(j);
            const TaylorModel t = tm_linear_row(W.row(row), layer.bias(row), q, norms);
            const Interval img = state.image(row);
            const TaylorModel z = tm_add_interval(t, img);
            if (layer.activation == ActivationKind::affine) {
                Q(row) = 1;
                next[j] = t;
                return;
            }
            NeuronImage ni = neuron_image(layer.activation, z, settings);
            Q(row) = ni.q;
            next[j] = ni.q == 0 ? std::move(ni.residual) : tm_scale(t, ni.q) + ni.residual;
        });

        // Apply diag(Q) to the transports, accounting for the scaling rounding.
        const Eigen::VectorXd absQ = Q.cwiseAbs();
        for (auto &s : state.sources) {
            s.transport = Q.asDiagonal() * s.transport;
            s.error = absQ.asDiagonal() * s.error;
            s.error = (s.error + kRelEps * s.transport.cwiseAbs()) * (1 + 4 * double(W.cols() + 4) * kEps);
        }
        q = split_remainders(collect(next));
    }

    TMVector out;
    for (std::size_t j = 0; j < q.size(); ++j) {
        out.push_back(tm_add_interval(q[j], state.image(Eigen::Index(j))));
    }
    return out;
}

} // namespace tmreach
