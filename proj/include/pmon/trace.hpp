#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pmon/term.hpp"

namespace pmon {

enum class Polarity { Sent, Received };

inline char polarity_mark(Polarity p) { return p == Polarity::Sent ? '!' : '?'; }

struct LabeledMessage {
  Polarity polarity;
  Term payload;

  friend bool operator==(const LabeledMessage&, const LabeledMessage&) = default;
};

/// A principal's send/receive history.
class Trace {
 public:
  Trace() = default;
  explicit Trace(std::vector<LabeledMessage> messages) : messages_(std::move(messages)) {}

  /// Positive trace over `payloads`.
  static Trace sent(std::vector<Term> payloads);

  std::size_t size() const { return messages_.size(); }
  bool empty() const { return messages_.empty(); }
  const LabeledMessage& operator[](std::size_t i) const { return messages_[i]; }
  const std::vector<LabeledMessage>& messages() const { return messages_; }
  auto begin() const { return messages_.begin(); }
  auto end() const { return messages_.end(); }

  void push(Polarity p, Term payload) { messages_.push_back({p, std::move(payload)}); }
  void push_sent(Term payload) { push(Polarity::Sent, std::move(payload)); }
  void push_received(Term payload) { push(Polarity::Received, std::move(payload)); }

  bool is_positive() const;
  bool is_negative() const;
  std::vector<Term> payloads() const;
  Trace prefix(std::size_t n) const;

  /// `!a, ?b, ...`
  std::string str() const;

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<LabeledMessage> messages_;
};

/// Keeps the messages carrying polarity `p`.
Trace restrict(const Trace& trace, Polarity p);
/// Flips every label.
Trace negate(const Trace& trace);
/// Received messages, relabeled as sent.
Trace input(const Trace& trace);
/// Sent messages, relabeled as received.
Trace output(const Trace& trace);

}  // namespace pmon
