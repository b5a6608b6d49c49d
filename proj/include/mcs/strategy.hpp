#pragma once

#include <optional>
#include <vector>

#include "mcs/domain.hpp"
#include "mcs/rng.hpp"

namespace mcs {

struct OfferResponse {
  Offer offer;
  ResponseFeedback feedback;
  std::optional<ExecutionOutcome> outcome;  // set when accepted
};

class McspStrategy {
 public:
  virtual ~McspStrategy() = default;
  virtual std::vector<Offer> propose(int t, Rng& rng) = 0;
  // Called once per step with one response per emitted offer, in order.
  virtual void feedback(const std::vector<OfferResponse>& responses) = 0;
  virtual std::optional<double> perception_error() const { return std::nullopt; }
  // True when the last proposal was an exploration round.
  virtual bool exploring() const { return false; }
};

struct MuDecision {
  int accepted = -1;  // index into the offers, -1 for none
  std::vector<ResponseFeedback> feedback;
};

class MuSide {
 public:
  virtual ~MuSide() = default;
  virtual MuDecision decide(int k, const std::vector<Offer>& offers, Rng& rng) = 0;
  virtual void completed(int /*k*/, int /*z*/, double /*realized_cost*/) {}
  virtual void end_step() {}
};

}  // namespace mcs
