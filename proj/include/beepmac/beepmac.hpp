#pragma once

#include <beepmac/adversary.hpp>
#include <beepmac/channel.hpp>
#include <beepmac/core.hpp>
#include <beepmac/harness/estimate.hpp>
#include <beepmac/harness/exact.hpp>
#include <beepmac/harness/invariants.hpp>
#include <beepmac/harness/monte_carlo.hpp>
#include <beepmac/harness/network.hpp>
#include <beepmac/harness/trial.hpp>
#include <beepmac/probability.hpp>
#include <beepmac/protocol/codeword.hpp>
#include <beepmac/protocol/constants.hpp>
#include <beepmac/protocol/decision.hpp>
#include <beepmac/protocol/global_sync.hpp>
