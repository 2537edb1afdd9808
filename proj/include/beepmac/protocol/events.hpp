#pragma once

#include <beepmac/core.hpp>

#include <compare>
#include <variant>

namespace beepmac {

struct SyncRoundChosen {
  LocalRound round = 0;
  friend auto operator<=>(const SyncRoundChosen&, const SyncRoundChosen&) = default;
};

struct OutputDecided {
  Value value = 0;
  LocalRound round = 0;
  friend auto operator<=>(const OutputDecided&, const OutputDecided&) = default;
};

using Event = std::variant<std::monostate, SyncRoundChosen, OutputDecided>;

/// Result of advancing a state machine by one local round.
template <class State>
struct StepResult {
  Action action = Action::Listen;
  State state;
  Event emitted;
};

}  // namespace beepmac
