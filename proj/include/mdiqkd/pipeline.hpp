#pragma once

#include "mdiqkd/finitekey.hpp"
#include "mdiqkd/model.hpp"
#include "mdiqkd/protocol.hpp"
#include "mdiqkd/security.hpp"

namespace mdiqkd {

/// Exact-expectation key rate: model table -> decoy estimates -> I_E -> rate.
/// The biased variant uses p_z^2 as P_zz; the symmetric variants use the
/// configured prefactors (both default to 1).
KeyRateReport asymptotic_key_rate(const ProtocolConfig& protocol, const ChannelParams& channel,
                                  RfiUForm form = RfiUForm::Sqrt);

/// Finite-size rate on model-expectation counts (no integer rounding), the
/// optimizer's objective.
KeyRateReport finite_key_rate_expected(const ProtocolConfig& protocol,
                                       const ChannelParams& channel,
                                       const FiniteKeyConfig& finite,
                                       RfiUForm form = RfiUForm::Sqrt);

/// Dispatch on mode.
KeyRateReport evaluate_key_rate(Mode mode, const ProtocolConfig& protocol,
                                const ChannelParams& channel, const FiniteKeyConfig& finite,
                                RfiUForm form = RfiUForm::Sqrt);

}  // namespace mdiqkd
