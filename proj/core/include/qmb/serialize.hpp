#pragma once

#include <string>

#include "qmb/ce.hpp"
#include "qmb/channel.hpp"
#include "qmb/cs.hpp"
#include "qmb/qfi.hpp"

namespace qmb {

/// Parses a channel document:
///   { "d_in", "d_out", "phi0",
///     "kraus": [ {"re": [[..]], "im": [[..]]}, ... ],
///     and exactly one of "generator": {re, im} or "kraus_dot": [...] }
/// Matrices are row-major nested arrays of numbers. With "generator" the
/// channel is composed via phase_encode at phi0; with "kraus_dot" the
/// derivatives are taken as given. Schema violations throw parse errors;
/// physics violations (completeness, positivity, hermiticity) surface as
/// input/validation errors from channel construction.
Channel channel_from_json(const std::string& text,
                          const Tolerances& tol = default_tolerances());

/// Emits the kraus_dot form of the document; round-trips through
/// channel_from_json.
std::string channel_to_json(const Channel& ch, int indent = 2);

std::string to_json(const CSResult& r, int indent = 2);
std::string to_json(const CEResult& r, int indent = 2);
std::string to_json(const OracleResult& r, int indent = 2);

}  // namespace qmb
