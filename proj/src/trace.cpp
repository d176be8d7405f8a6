#include "pmon/trace.hpp"

#include <algorithm>

namespace pmon {

Trace Trace::sent(std::vector<Term> payloads) {
  Trace t;
  for (Term& p : payloads) t.push_sent(std::move(p));
  return t;
}

bool Trace::is_positive() const {
  return std::all_of(messages_.begin(), messages_.end(),
                     [](const LabeledMessage& m) { return m.polarity == Polarity::Sent; });
}

bool Trace::is_negative() const {
  return std::all_of(messages_.begin(), messages_.end(),
                     [](const LabeledMessage& m) { return m.polarity == Polarity::Received; });
}

std::vector<Term> Trace::payloads() const {
  std::vector<Term> out;
  out.reserve(messages_.size());
  for (const auto& m : messages_) out.push_back(m.payload);
  return out;
}

Trace Trace::prefix(std::size_t n) const {
  n = std::min(n, messages_.size());
  return Trace({messages_.begin(), messages_.begin() + static_cast<std::ptrdiff_t>(n)});
}

std::string Trace::str() const {
  std::string out;
  for (std::size_t i = 0; i < messages_.size(); ++i) {
    if (i) out += ", ";
    out += polarity_mark(messages_[i].polarity);
    out += messages_[i].payload.str();
  }
  return out;
}

Trace restrict(const Trace& trace, Polarity p) {
  Trace out;
  for (const auto& m : trace)
    if (m.polarity == p) out.push(p, m.payload);
  return out;
}

Trace negate(const Trace& trace) {
  Trace out;
  for (const auto& m : trace)
    out.push(m.polarity == Polarity::Sent ? Polarity::Received : Polarity::Sent, m.payload);
  return out;
}

Trace input(const Trace& trace) { return negate(restrict(trace, Polarity::Received)); }

Trace output(const Trace& trace) { return negate(restrict(trace, Polarity::Sent)); }

}  // namespace pmon
