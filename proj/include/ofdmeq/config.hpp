// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ofdmeq/harness.hpp"

namespace ofdmeq {

// Thrown for malformed config files, unknown keys (named), or out-of-range
// values; the CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Load a JSON config file and apply dotted-key overrides
// ("channel.n_cp=64", "jlcozf.delta=inf", "snr_db=[10,15]"). Every key is
// checked against the schema; unknown keys are rejected by name. An empty
// path loads pure defaults (Table-like simulation parameters).
SimConfig load_sim_config(const std::string& path, const std::vector<std::string>& overrides);

std::string equalizer_name(EqualizerKind k);
EqualizerKind parse_equalizer(const std::string& name);
std::string transform_name(TransformKind k);
TransformKind parse_transform(const std::string& name);

}  // namespace ofdmeq
