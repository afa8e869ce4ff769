// SPDX-License-Identifier: Apache-2.0
#include "seqaug/config.hpp"

#include "seqaug/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <type_traits>

namespace seqaug {

const std::vector<SettingKey>& setting_keys() {
  static const std::vector<SettingKey> keys = {
      {"input", "dataset CSV (feature_count values + class token per row)"},
      {"out", "output directory"},
      {"task", "number of classes (4 or 10)"},
      {"ratios", "comma-separated reduction ratios"},
      {"counts", "explicit per-class reduced sizes, 'idx=c0,c1,...;idx=...' by ratio index"},
      {"folds", "cross-validation folds"},
      {"target_train_size", "synthetic set size (0 = original train size)"},
      {"downsample_size", "label-proportional downsampling before splitting (0 = off)"},
      {"seed", "base seed"},
      {"jobs", "worker threads for generation"},
      {"feature_count", "features per CSV row"},
      {"class_tokens", "comma-separated class tokens in class order (default 0..C-1)"},
      {"finest_side", "generator finest scale side"},
      {"coarsest_side", "generator coarsest scale side"},
      {"scale_rate", "generator scale decrease rate"},
      {"patch_side", "generator patch side"},
      {"num_projections", "sliced Wasserstein directions per step"},
      {"gen_learning_rate", "generator pixel learning rate"},
      {"steps_per_scale", "generator iterations per scale"},
      {"noise_sigma", "initial noise, in target standard deviations"},
      {"optimizer", "generator pixel optimizer (adam or sgd)"},
      {"hidden", "comma-separated hidden layer widths ('none' for no hidden layer)"},
      {"mlp_learning_rate", "classifier Adam learning rate"},
      {"batch_size", "classifier batch size"},
      {"patience_fraction", "early stopping patience as a fraction of the training size"},
      {"max_epochs", "classifier epoch limit"},
      {"improvement_threshold", "minimum loss decrease counted as improvement"},
  };
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T v{};
  const std::string t = trim(value);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty())
    throw InvalidConfig("setting '" + key + "': cannot parse '" + value + "'");
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  for (const auto& item : split_list(value, ',')) out.push_back(parse_number<T>(key, item));
  return out;
}

template <class T>
std::string render(const T& v) {
  if constexpr (std::is_floating_point_v<T>) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  } else {
    std::ostringstream os;
    os << v;
    return os.str();
  }
}

template <class T>
std::string join(const std::vector<T>& v, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? std::string(1, sep) : "") + render(v[i]);
  return out;
}

} // namespace

std::map<std::string, std::string> parse_key_values(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidConfig("config line " + std::to_string(lineno) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidConfig("cannot open config file " + path.string());
  return parse_key_values(is);
}

void apply_setting(RunSettings& s, const std::string& key, const std::string& value) {
  auto& e = s.experiment;
  auto& g = e.generator;
  auto& m = e.classifier;
  if (key == "input") s.input = value;
  else if (key == "out") s.out = value;
  else if (key == "task") e.task = parse_number<std::size_t>(key, value);
  else if (key == "ratios") e.reduction_ratios = parse_list<double>(key, value);
  else if (key == "counts") {
    e.explicit_counts.clear();
    for (const auto& entry : split_list(value, ';')) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos) throw InvalidConfig("setting 'counts': expected idx=c0,c1,...");
      e.explicit_counts[parse_number<std::size_t>(key, entry.substr(0, eq))] =
          parse_list<std::size_t>(key, entry.substr(eq + 1));
    }
  } else if (key == "folds") e.folds = parse_number<std::size_t>(key, value);
  else if (key == "target_train_size") e.target_train_size = parse_number<std::size_t>(key, value);
  else if (key == "downsample_size") e.downsample_size = parse_number<std::size_t>(key, value);
  else if (key == "seed") e.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "jobs") e.jobs = parse_number<unsigned>(key, value);
  else if (key == "feature_count") s.csv.feature_count = parse_number<std::size_t>(key, value);
  else if (key == "class_tokens") s.csv.class_tokens = split_list(value, ',');
  else if (key == "finest_side") g.finest_side = parse_number<std::size_t>(key, value);
  else if (key == "coarsest_side") g.coarsest_side = parse_number<std::size_t>(key, value);
  else if (key == "scale_rate") g.scale_rate = parse_number<double>(key, value);
  else if (key == "patch_side") g.patch_side = parse_number<std::size_t>(key, value);
  else if (key == "num_projections") g.num_projections = parse_number<std::size_t>(key, value);
  else if (key == "gen_learning_rate") g.learning_rate = parse_number<double>(key, value);
  else if (key == "steps_per_scale") g.steps_per_scale = parse_number<std::size_t>(key, value);
  else if (key == "noise_sigma") g.noise_sigma = parse_number<double>(key, value);
  else if (key == "optimizer") g.optimizer = parse_pixel_optimizer(trim(value));
  else if (key == "hidden")
    m.hidden = trim(value) == "none" ? std::vector<std::size_t>{} : parse_list<std::size_t>(key, value);
  else if (key == "mlp_learning_rate") m.learning_rate = parse_number<double>(key, value);
  else if (key == "batch_size") m.batch_size = parse_number<std::size_t>(key, value);
  else if (key == "patience_fraction") m.patience_fraction = parse_number<double>(key, value);
  else if (key == "max_epochs") m.max_epochs = parse_number<std::size_t>(key, value);
  else if (key == "improvement_threshold") m.improvement_threshold = parse_number<double>(key, value);
  else throw InvalidConfig("unknown setting '" + key + "'");
}

void apply_settings(RunSettings& s, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) apply_setting(s, k, v);
}

std::string setting_value(const RunSettings& s, const std::string& key) {
  const auto& e = s.experiment;
  const auto& g = e.generator;
  const auto& m = e.classifier;
  std::ostringstream os;
  if (key == "input") os << s.input;
  else if (key == "out") os << s.out;
  else if (key == "task") os << e.task;
  else if (key == "ratios") os << join(e.reduction_ratios);
  else if (key == "counts") {
    bool first = true;
    for (const auto& [idx, c] : e.explicit_counts) {
      os << (first ? "" : ";") << idx << '=' << join(c);
      first = false;
    }
  } else if (key == "folds") os << e.folds;
  else if (key == "target_train_size") os << e.target_train_size;
  else if (key == "downsample_size") os << e.downsample_size;
  else if (key == "seed") os << e.seed;
  else if (key == "jobs") os << e.jobs;
  else if (key == "feature_count") os << s.csv.feature_count;
  else if (key == "class_tokens") os << join(s.csv.class_tokens);
  else if (key == "finest_side") os << g.finest_side;
  else if (key == "coarsest_side") os << g.coarsest_side;
  else if (key == "scale_rate") os << render(g.scale_rate);
  else if (key == "patch_side") os << g.patch_side;
  else if (key == "num_projections") os << g.num_projections;
  else if (key == "gen_learning_rate") os << render(g.learning_rate);
  else if (key == "steps_per_scale") os << g.steps_per_scale;
  else if (key == "noise_sigma") os << render(g.noise_sigma);
  else if (key == "optimizer") os << to_string(g.optimizer);
  else if (key == "hidden") os << (m.hidden.empty() ? std::string("none") : join(m.hidden));
  else if (key == "mlp_learning_rate") os << render(m.learning_rate);
  else if (key == "batch_size") os << m.batch_size;
  else if (key == "patience_fraction") os << render(m.patience_fraction);
  else if (key == "max_epochs") os << m.max_epochs;
  else if (key == "improvement_threshold") os << render(m.improvement_threshold);
  else throw InvalidConfig("unknown setting '" + key + "'");
  return os.str();
}

} // namespace seqaug
