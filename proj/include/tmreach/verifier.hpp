#ifndef TMREACH_VERIFIER_HPP
#define TMREACH_VERIFIER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <tmreach/model.hpp>
#include <tmreach/simulation.hpp>

namespace tmreach
{

// Taylor model image of a module. The input enclosure must satisfy one rule's
// guard entirely and violate all others, or GuardStraddle is raised.
TMVector apply_guarded(const GuardedModule &module, const TMVector &input);

// True when the slice provably misses the set where every constraint holds.
// The slice's time range is bisected up to max_depth times.
bool avoid_excluded(const std::vector<Constraint> &avoid, const Flowpipe &pipe, int max_depth = 4);

// True when every constraint provably holds on the enclosure of x.
bool target_reached(const std::vector<Constraint> &target, const TMVector &x);

enum class VerdictTag { yes, no, unknown };

const char *verdict_name(VerdictTag tag);

struct StepStats {
    std::size_t step = 0;
    // State enclosure at the end of the control step.
    std::vector<Interval> enclosure;
    double nn_seconds = 0;
    double ode_seconds = 0;
};

struct Counterexample {
    Trace trace;
    std::vector<double> x0;
    std::size_t step = 0;
    double time = 0;
    std::string reason;
};

struct Verdict {
    VerdictTag tag = VerdictTag::unknown;
    std::vector<StepStats> evidence;
    std::string diagnostic;
    std::optional<Counterexample> counterexample;
    double nn_seconds = 0;
    double ode_seconds = 0;
};

struct VerificationResult {
    Verdict verdict;
    std::vector<Flowpipe> pipes;
    InitialSymbols symbols;
};

VerificationResult verify(const NNCSModel &model);

// Simulates `trials` initial states drawn from the initial box; returns the
// first trace that enters the avoid set or misses the target at the end.
std::optional<Counterexample> falsify(const NNCSModel &model, unsigned trials, std::uint64_t seed);

// Checks one simulated trace against the reach-avoid property.
std::optional<Counterexample> find_violation(const NNCSModel &model, const Trace &trace);

} // namespace tmreach

#endif
