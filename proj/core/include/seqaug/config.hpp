// SPDX-License-Identifier: Apache-2.0
//
// Key-value run settings. A config file holds `key = value` lines; `#`
// starts a comment. Every key can also be given on the command line.
#pragma once

#include "seqaug/dataset.hpp"
#include "seqaug/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace seqaug {

struct RunSettings {
  ExperimentConfig experiment;
  CsvFormat csv;
  std::string input;
  std::string out = "out";
};

struct SettingKey {
  const char* name;
  const char* help;
};

/// Every recognized key, in documentation order.
const std::vector<SettingKey>& setting_keys();

std::map<std::string, std::string> parse_key_values(std::istream& is);
std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path);

/// Throws InvalidConfig for unknown keys or unparsable values.
void apply_setting(RunSettings& s, const std::string& key, const std::string& value);
void apply_settings(RunSettings& s, const std::map<std::string, std::string>& kv);

/// Current value of a key rendered in config-file syntax.
std::string setting_value(const RunSettings& s, const std::string& key);

} // namespace seqaug
