#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmon/context.hpp"
#include "pmon/narration.hpp"
#include "pmon/theory.hpp"
#include "pmon/trace.hpp"

namespace pmon {

/// Send steps compute a message from the inputs received so far; receive
/// steps bind the next input and check their tests. Positions v_j in recipes
/// and tests name the j-th input.
struct FrameStep {
  Polarity polarity;
  std::optional<Context> recipe;  // send steps
  TestSystem tests;               // receive steps

  static FrameStep send(Context recipe) { return {Polarity::Sent, std::move(recipe), {}}; }
  static FrameStep receive(TestSystem tests = {}) {
    return {Polarity::Received, std::nullopt, std::move(tests)};
  }
  bool is_send() const { return polarity == Polarity::Sent; }
  friend bool operator==(const FrameStep&, const FrameStep&) = default;
};

struct ActiveFrame {
  std::vector<FrameStep> steps;

  std::size_t inputs() const;
  /// Checks that recipes and tests only read inputs already received.
  void validate() const;
  friend bool operator==(const ActiveFrame&, const ActiveFrame&) = default;
};

struct TestOutcome {
  std::size_t step;  // 1-based
  Equation equation;
  bool passed;
};

struct EvalResult {
  bool accepted = true;
  /// Steps performed, up to and including a rejecting receive.
  Trace trace;
  std::optional<TestOutcome> rejection;
  std::vector<TestOutcome> transcript;
};

/// Runs `frame` on the positive trace of its inputs. Stops at the first
/// failing test. Throws LengthMismatch when the input count is wrong.
EvalResult evaluate(const ActiveFrame& frame, const Trace& inputs, const DeductionSystem& sys);

/// Frame reproducing `trace` on input(trace). Prudent frames test every
/// equality of the inputs seen so far that involves the new input, so they
/// accept exactly the refinements of input(trace). Throws NotExecutable.
ActiveFrame compile(const Trace& trace, const DeductionSystem& sys, bool prudent);

bool is_implementation(const ActiveFrame& frame, const Trace& trace, const DeductionSystem& sys);

struct ProtocolImplementation {
  std::vector<std::string> strands;
  std::map<std::string, ActiveFrame> frames;
  bool prudent = false;

  const ActiveFrame& frame(const std::string& strand) const;
};

/// Throws NotExecutable naming the strand.
ProtocolImplementation compile_protocol(const Protocol& p, const DeductionSystem& sys,
                                        bool prudent);

/// Human-readable listing, one line per step.
std::string pseudocode(const ActiveFrame& frame);

}  // namespace pmon
