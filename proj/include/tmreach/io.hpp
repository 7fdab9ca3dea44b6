#ifndef TMREACH_IO_HPP
#define TMREACH_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <tmreach/model.hpp>
#include <tmreach/network.hpp>
#include <tmreach/ode.hpp>

namespace tmreach
{

// Line-oriented network format:
//   input dim, output dim, hidden count H, H widths, H + 1 activation names,
//   then per layer and per neuron its incoming weights followed by its bias,
//   one number per line. Blank lines are ignored.
NeuralNetwork parse_network(std::string_view text);
std::string serialize_network(const NeuralNetwork &net);
NeuralNetwork load_network(const std::filesystem::path &path);

// JSON system description; relative network paths resolve against base_dir.
NNCSModel parse_spec(std::string_view json_text, const std::filesystem::path &base_dir);
NNCSModel load_spec(const std::filesystem::path &path);

// Header, one line per slice "step slice t_begin t_end lo hi ..." for the
// requested variables and, for two variables, a second block of rectangles
// "x_lo x_hi y_lo y_hi".
void write_flowpipes(std::ostream &out, const std::vector<Flowpipe> &pipes, std::span<const std::string> names,
                     std::span<const std::size_t> vars);
void export_flowpipes(const std::vector<Flowpipe> &pipes, std::span<const std::string> names,
                      std::span<const std::size_t> vars, const std::filesystem::path &path);

} // namespace tmreach

#endif
