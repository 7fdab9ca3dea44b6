#include <tmreach/io.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <tmreach/error.hpp>
#include <tmreach/format.hpp>

namespace tmreach
{

namespace
{

using json = nlohmann::json;

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

class LineReader
{
public:
    explicit LineReader(std::string_view text)
    {
        std::size_t line = 0;
        while (!text.empty()) {
            ++line;
            const auto nl = text.find('\n');
            const auto piece = trim(text.substr(0, nl));
            if (!piece.empty()) {
                lines_.push_back({line, piece});
            }
            if (nl == std::string_view::npos) {
                break;
            }
            text.remove_prefix(nl + 1);
        }
        end_line_ = line + 1;
    }

    std::pair<std::size_t, std::string_view> next(const char *what)
    {
        if (pos_ == lines_.size()) {
            throw ParseError(std::string("unexpected end of file, expected ") + what, end_line_);
        }
        return lines_[pos_++];
    }

    double number(const char *what)
    {
        const auto [line, text] = next(what);
        try {
            return parse_double(text);
        } catch (const ParseError &) {
            throw ParseError(std::string("invalid ") + what + " '" + std::string(text) + "'", line);
        }
    }

    std::size_t count(const char *what, bool allow_zero)
    {
        const auto [line, text] = next(what);
        std::size_t v = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || (!allow_zero && v == 0)) {
            throw ParseError(std::string("invalid ") + what + " '" + std::string(text) + "'", line);
        }
        return v;
    }

    ActivationKind activation()
    {
        const auto [line, text] = next("activation name");
        try {
            return parse_activation(text);
        } catch (const ParseError &e) {
            throw ParseError(e.what(), line);
        }
    }

    void finish()
    {
        if (pos_ != lines_.size()) {
            throw ParseError("unexpected content after the last bias", lines_[pos_].first);
        }
    }

private:
    std::vector<std::pair<std::size_t, std::string_view>> lines_;
    std::size_t pos_ = 0;
    std::size_t end_line_ = 1;
};

// Schema helpers for the JSON system description.

[[noreturn]] void bad(const std::string &key, const std::string &msg)
{
    throw ConfigError("spec: '" + key + "' " + msg);
}

const json &require(const json &obj, const char *key)
{
    if (!obj.contains(key)) {
        bad(key, "is required");
    }
    return obj.at(key);
}

std::vector<std::string> string_list(const json &j, const std::string &key)
{
    if (j.is_string()) {
        return {j.get<std::string>()};
    }
    if (!j.is_array()) {
        bad(key, "must be a string or a list of strings");
    }
    std::vector<std::string> out;
    for (const auto &e : j) {
        if (!e.is_string()) {
            bad(key, "must contain only strings");
        }
        out.push_back(e.get<std::string>());
    }
    return out;
}

double number_of(const json &j, const std::string &key)
{
    if (!j.is_number()) {
        bad(key, "must be a number");
    }
    return j.get<double>();
}

std::size_t count_of(const json &j, const std::string &key)
{
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        bad(key, "must be a non-negative integer");
    }
    return j.get<std::size_t>();
}

Interval interval_of(const json &j, const std::string &key)
{
    if (j.is_number()) {
        return Interval(j.get<double>());
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number() || j[0].get<double>() > j[1].get<double>()) {
        bad(key, "must be a number or [lo, hi] with lo <= hi");
    }
    return Interval(j[0].get<double>(), j[1].get<double>());
}

// Lists given either positionally or as an object keyed by variable name.
template <class T, class F>
std::vector<T> per_variable(const json &j, const std::vector<std::string> &vars, const std::string &key, F convert)
{
    std::vector<T> out;
    if (j.is_array()) {
        if (j.size() != vars.size()) {
            bad(key, "must have one entry per state variable");
        }
        for (std::size_t i = 0; i < vars.size(); ++i) {
            out.push_back(convert(j[i], key + "[" + std::to_string(i) + "]"));
        }
    } else if (j.is_object()) {
        if (j.size() != vars.size()) {
            bad(key, "must have one entry per state variable");
        }
        for (const auto &v : vars) {
            if (!j.contains(v)) {
                bad(key, "has no entry for '" + v + "'");
            }
            out.push_back(convert(j.at(v), key + "." + v));
        }
    } else {
        bad(key, "must be a list or an object");
    }
    return out;
}

std::vector<Constraint> conjunction(const json &j, const std::string &key, std::span<const std::string> names)
{
    std::vector<Constraint> out;
    for (const auto &text : string_list(j, key)) {
        try {
            out.push_back(parse_constraint(text, names));
        } catch (const ParseError &e) {
            bad(key, std::string("contains an invalid constraint: ") + e.what());
        }
    }
    return out;
}

Expr expression(const std::string &text, const std::string &key, std::span<const std::string> names)
{
    try {
        return parse_expression(text, names);
    } catch (const ParseError &e) {
        bad(key, std::string("contains an invalid expression: ") + e.what());
    }
}

std::vector<std::string> default_names(const char *prefix, std::size_t n)
{
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(prefix + std::to_string(i));
    }
    return out;
}

void check_keys(const json &obj, const std::string &where, std::initializer_list<const char *> allowed)
{
    for (const auto &item : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char *a) { return item.key() == a; }) ==
            allowed.end()) {
            bad(where.empty() ? item.key() : where + "." + item.key(), "is not a recognized key");
        }
    }
}

GuardedModule parse_module(const json *j, const std::string &key, std::vector<std::string> inputs,
                           std::vector<std::string> outputs)
{
    GuardedModule m{std::move(inputs), std::move(outputs), {}};
    if (!j) {
        return m;
    }
    if (!j->is_object()) {
        bad(key, "must be an object");
    }
    check_keys(*j, key, {"inputs", "outputs", "rules"});
    if (j->contains("rules")) {
        const json &rules = j->at("rules");
        if (!rules.is_array()) {
            bad(key + ".rules", "must be a list");
        }
        for (std::size_t r = 0; r < rules.size(); ++r) {
            const std::string rk = key + ".rules[" + std::to_string(r) + "]";
            if (!rules[r].is_object()) {
                bad(rk, "must be an object");
            }
            check_keys(rules[r], rk, {"guard", "transform"});
            GuardedTransition t;
            if (rules[r].contains("guard")) {
                t.guard = conjunction(rules[r].at("guard"), rk + ".guard", m.inputs);
            }
            for (const auto &e : string_list(require(rules[r], "transform"), rk + ".transform")) {
                t.transform.push_back(expression(e, rk + ".transform", m.inputs));
            }
            m.rules.push_back(std::move(t));
        }
    }
    return m;
}

std::string bracket(const Interval &iv) { return format_double(iv.lo()) + " " + format_double(iv.hi()); }

} // namespace

NeuralNetwork parse_network(std::string_view text)
{
    LineReader in(text);
    const std::size_t n_in = in.count("input dimension", false);
    const std::size_t n_out = in.count("output dimension", false);
    const std::size_t hidden = in.count("hidden layer count", true);
    std::vector<std::size_t> widths{n_in};
    for (std::size_t h = 0; h < hidden; ++h) {
        widths.push_back(in.count("hidden layer width", false));
    }
    widths.push_back(n_out);
    std::vector<ActivationKind> acts;
    for (std::size_t h = 0; h <= hidden; ++h) {
        acts.push_back(in.activation());
    }
    std::vector<Layer> layers;
    for (std::size_t l = 0; l <= hidden; ++l) {
        Layer layer;
        const auto rows = Eigen::Index(widths[l + 1]);
        const auto cols = Eigen::Index(widths[l]);
        layer.weights.resize(rows, cols);
        layer.bias.resize(rows);
        layer.activation = acts[l];
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) {
                layer.weights(i, j) = in.number("weight");
            }
            layer.bias(i) = in.number("bias");
        }
        layers.push_back(std::move(layer));
    }
    in.finish();
    return NeuralNetwork(std::move(layers));
}

std::string serialize_network(const NeuralNetwork &net)
{
    std::ostringstream out;
    const auto &layers = net.layers();
    out << net.input_dim() << '\n' << net.output_dim() << '\n' << net.hidden_count() << '\n';
    for (std::size_t h = 0; h + 1 < layers.size(); ++h) {
        out << layers[h].weights.rows() << '\n';
    }
    for (const auto &l : layers) {
        out << activation_name(l.activation) << '\n';
    }
    for (const auto &l : layers) {
        for (Eigen::Index i = 0; i < l.weights.rows(); ++i) {
            for (Eigen::Index j = 0; j < l.weights.cols(); ++j) {
                out << format_double(l.weights(i, j)) << '\n';
            }
            out << format_double(l.bias(i)) << '\n';
        }
    }
    return out.str();
}

NeuralNetwork load_network(const std::filesystem::path &path)
{
    const std::string text = read_file(path);
    try {
        return parse_network(text);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
    }
}

NNCSModel parse_spec(std::string_view json_text, const std::filesystem::path &base_dir)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("spec: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("spec: the document must be an object");
    }
    check_keys(j, "",
               {"comment", "description", "state_vars", "control_vars", "dynamics", "control_step", "steps",
                "initial_set", "preprocess", "postprocess", "network_path", "target", "avoid", "settings"});

    NNCSModel m;
    const auto states = string_list(require(j, "state_vars"), "state_vars");
    if (states.empty()) {
        bad("state_vars", "must not be empty");
    }

    std::filesystem::path net_path = require(j, "network_path").get<std::string>();
    if (net_path.is_relative()) {
        net_path = base_dir / net_path;
    }
    m.net = load_network(net_path);

    std::vector<std::string> controls = j.contains("control_vars")
                                            ? string_list(j.at("control_vars"), "control_vars")
                                            : default_names("u", m.net.output_dim());

    m.plant.state_vars = states;
    m.plant.control_vars = controls;
    const auto all = m.plant.all_vars();
    m.plant.rhs = per_variable<Expr>(require(j, "dynamics"), states, "dynamics", [&](const json &e, const std::string &k) {
        if (!e.is_string()) {
            bad(k, "must be an expression string");
        }
        return expression(e.get<std::string>(), k, all);
    });

    m.control_step = number_of(require(j, "control_step"), "control_step");
    m.steps = count_of(require(j, "steps"), "steps");
    m.initial = Box(per_variable<Interval>(require(j, "initial_set"), states, "initial_set", interval_of));

    const json *pre = j.contains("preprocess") ? &j.at("preprocess") : nullptr;
    std::vector<std::string> pre_out = states;
    if (pre && pre->is_object() && pre->contains("rules")) {
        pre_out = pre->contains("outputs") ? string_list(pre->at("outputs"), "preprocess.outputs")
                                           : default_names("z", m.net.input_dim());
    }
    if (pre && pre->is_object() && pre->contains("inputs")) {
        bad("preprocess.inputs", "is fixed to the state variables");
    }
    m.pre = parse_module(pre, "preprocess", states, pre_out);

    const json *post = j.contains("postprocess") ? &j.at("postprocess") : nullptr;
    std::vector<std::string> post_in = controls;
    if (post && post->is_object() && post->contains("inputs")) {
        post_in = string_list(post->at("inputs"), "postprocess.inputs");
    } else if (post && post->is_object() && post->contains("rules")) {
        post_in = default_names("y", m.net.output_dim());
    }
    if (post && post->is_object() && post->contains("outputs")) {
        bad("postprocess.outputs", "is fixed to the control variables");
    }
    m.post = parse_module(post, "postprocess", post_in, controls);

    if (j.contains("target")) {
        m.target = conjunction(j.at("target"), "target", states);
    }
    if (j.contains("avoid")) {
        m.avoid = conjunction(j.at("avoid"), "avoid", states);
    }

    if (j.contains("settings")) {
        const json &s = j.at("settings");
        if (!s.is_object()) {
            bad("settings", "must be an object");
        }
        check_keys(s, "settings",
                   {"order", "ode_step", "bernstein_order", "remainder_samples", "symbolic_remainder", "threads",
                    "falsify_trials", "seed", "sim_substeps"});
        auto &st = m.settings;
        if (s.contains("order")) {
            st.order = unsigned(count_of(s.at("order"), "settings.order"));
        }
        if (s.contains("ode_step")) {
            st.ode_step = number_of(s.at("ode_step"), "settings.ode_step");
        }
        if (s.contains("bernstein_order")) {
            st.activation.bernstein_order = unsigned(count_of(s.at("bernstein_order"), "settings.bernstein_order"));
        }
        if (s.contains("remainder_samples")) {
            st.activation.samples = unsigned(count_of(s.at("remainder_samples"), "settings.remainder_samples"));
        }
        if (s.contains("symbolic_remainder")) {
            if (!s.at("symbolic_remainder").is_boolean()) {
                bad("settings.symbolic_remainder", "must be true or false");
            }
            st.symbolic_remainder = s.at("symbolic_remainder").get<bool>();
        }
        if (s.contains("threads")) {
            st.threads = unsigned(count_of(s.at("threads"), "settings.threads"));
        }
        if (s.contains("falsify_trials")) {
            st.falsify_trials = unsigned(count_of(s.at("falsify_trials"), "settings.falsify_trials"));
        }
        if (s.contains("seed")) {
            st.seed = count_of(s.at("seed"), "settings.seed");
        }
        if (s.contains("sim_substeps")) {
            st.sim_substeps = unsigned(count_of(s.at("sim_substeps"), "settings.sim_substeps"));
        }
    }
    m.validate();
    return m;
}

NNCSModel load_spec(const std::filesystem::path &path)
{
    return parse_spec(read_file(path), path.parent_path());
}

void write_flowpipes(std::ostream &out, const std::vector<Flowpipe> &pipes, std::span<const std::string> names,
                     std::span<const std::size_t> vars)
{
    out << "# tmreach flowpipes\n# columns: step slice t_begin t_end";
    for (std::size_t v : vars) {
        if (v >= names.size()) {
            throw ShapeError("export: unknown variable index");
        }
        out << ' ' << names[v] << "_lo " << names[v] << "_hi";
    }
    out << '\n';
    std::vector<std::vector<Interval>> boxes;
    for (const auto &p : pipes) {
        out << p.step_index << ' ' << p.slice_index << ' ' << format_double(p.t_begin) << ' '
            << format_double(p.t_end);
        std::vector<Interval> box;
        for (std::size_t v : vars) {
            box.push_back(tm_enclosure(p.tms[v], RangeMethod::tight));
            out << ' ' << bracket(box.back());
        }
        out << '\n';
        boxes.push_back(std::move(box));
    }
    if (vars.size() == 2 && !pipes.empty()) {
        out << "\n\n# rectangles: " << names[vars[0]] << "_lo " << names[vars[0]] << "_hi " << names[vars[1]]
            << "_lo " << names[vars[1]] << "_hi\n";
        for (const auto &b : boxes) {
            out << bracket(b[0]) << ' ' << bracket(b[1]) << '\n';
        }
    }
}

void export_flowpipes(const std::vector<Flowpipe> &pipes, std::span<const std::string> names,
                      std::span<const std::size_t> vars, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    write_flowpipes(out, pipes, names, vars);
    if (!out) {
        throw Error("write to '" + path.string() + "' failed");
    }
}

} // namespace tmreach
