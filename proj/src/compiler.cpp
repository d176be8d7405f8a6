#include "pmon/compiler.hpp"

#include <sstream>

#include "pmon/deduction.hpp"
#include "pmon/errors.hpp"

namespace pmon {

std::size_t ActiveFrame::inputs() const {
  std::size_t n = 0;
  for (const auto& s : steps) n += !s.is_send();
  return n;
}

void ActiveFrame::validate() const {
  std::size_t received = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const FrameStep& s = steps[i];
    if (s.is_send()) {
      if (!s.recipe) throw Error("send step " + std::to_string(i + 1) + " has no recipe");
      if (s.recipe->arity() > received)
        throw PositionOutOfRange(s.recipe->arity(), received);
    } else {
      ++received;
      if (s.tests.arity() > received) throw PositionOutOfRange(s.tests.arity(), received);
    }
  }
}

EvalResult evaluate(const ActiveFrame& frame, const Trace& inputs, const DeductionSystem& sys) {
  if (inputs.size() != frame.inputs()) throw LengthMismatch(frame.inputs(), inputs.size());
  EvalResult r;
  std::vector<Term> bound;
  for (std::size_t i = 0; i < frame.steps.size(); ++i) {
    const FrameStep& s = frame.steps[i];
    if (s.is_send()) {
      r.trace.push_sent(apply_context(*s.recipe, std::span<const Term>(bound), sys));
      continue;
    }
    const Term& m = inputs[bound.size()].payload;
    bound.push_back(m);
    r.trace.push_received(m);
    for (const Equation& eq : s.tests.equations) {
      bool ok = satisfies(std::span<const Term>(bound), eq, sys);
      r.transcript.push_back({i + 1, eq, ok});
      if (!ok) {
        r.accepted = false;
        r.rejection = r.transcript.back();
        return r;
      }
    }
  }
  return r;
}

ActiveFrame compile(const Trace& trace, const DeductionSystem& sys, bool prudent) {
  ActiveFrame frame;
  Trace received;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const LabeledMessage& m = trace[i];
    if (m.polarity == Polarity::Sent) {
      auto recipe = synthesize(received, m.payload, sys);
      if (!recipe) throw NotExecutable("", i + 1, m.payload.str());
      frame.steps.push_back(FrameStep::send(std::move(*recipe)));
      continue;
    }
    received.push_sent(m.payload);
    TestSystem tests;
    if (prudent) {
      std::size_t j = received.size();
      for (Equation& eq : finite_basis(received, sys).equations)
        if (eq.lhs.mentions(j) || eq.rhs.mentions(j)) tests.equations.push_back(std::move(eq));
    }
    frame.steps.push_back(FrameStep::receive(std::move(tests)));
  }
  return frame;
}

bool is_implementation(const ActiveFrame& frame, const Trace& trace, const DeductionSystem& sys) {
  Trace in = input(trace);
  if (in.size() != frame.inputs() || frame.steps.size() != trace.size()) return false;
  EvalResult r = evaluate(frame, in, sys);
  if (!r.accepted) return false;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (r.trace[i].polarity != trace[i].polarity) return false;
    if (!eq_mod_e(r.trace[i].payload, trace[i].payload, sys)) return false;
  }
  return true;
}

const ActiveFrame& ProtocolImplementation::frame(const std::string& strand) const {
  auto it = frames.find(strand);
  if (it == frames.end()) throw Error("no frame for strand " + strand);
  return it->second;
}

ProtocolImplementation compile_protocol(const Protocol& p, const DeductionSystem& sys,
                                        bool prudent) {
  ProtocolImplementation impl{p.strands, {}, prudent};
  for (const auto& s : p.strands) {
    try {
      impl.frames.emplace(s, compile(p.trace(s), sys, prudent));
    } catch (const NotExecutable& e) {
      throw e.with_strand(s);
    }
  }
  return impl;
}

std::string pseudocode(const ActiveFrame& frame) {
  std::ostringstream out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < frame.steps.size(); ++i) {
    const FrameStep& s = frame.steps[i];
    out << (i + 1) << ". ";
    if (s.is_send()) {
      out << "send " << s.recipe->str() << "\n";
      continue;
    }
    out << "receive v" << ++j;
    for (std::size_t k = 0; k < s.tests.equations.size(); ++k)
      out << (k ? ", " : " check ") << s.tests.equations[k].str();
    out << "\n";
  }
  return out.str();
}

}  // namespace pmon
