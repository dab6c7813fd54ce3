#include "tbdd/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace tbdd {
namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct FieldSetter {
  std::function<bool(SimConfig&, const std::string&)> set;
};

bool parse_double(const std::string& v, double& out) {
  try {
    size_t pos = 0;
    out = std::stod(v, &pos);
    return pos == v.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& v, int& out) {
  try {
    size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) return false;
    out = static_cast<int>(x);
    return true;
  } catch (...) {
    return false;
  }
}

bool parse_u64(const std::string& v, uint64_t& out) {
  try {
    size_t pos = 0;
    out = std::stoull(v, &pos);
    return pos == v.size();
  } catch (...) {
    return false;
  }
}

bool parse_bool(const std::string& v, bool& out) {
  if (v == "true" || v == "1") { out = true; return true; }
  if (v == "false" || v == "0") { out = false; return true; }
  return false;
}

const std::map<std::string, FieldSetter>& field_table() {
  static const std::map<std::string, FieldSetter> table = [] {
    std::map<std::string, FieldSetter> t;
    auto add_d = [&t](const std::string& key, double SimConfig::* ignored,
                      std::function<double&(SimConfig&)> ref) {
      (void)ignored;
      t[key] = FieldSetter{[ref](SimConfig& c, const std::string& v) {
        return parse_double(v, ref(c));
      }};
    };
    auto dbl = [&t](const std::string& key, std::function<double&(SimConfig&)> ref) {
      t[key] = FieldSetter{[ref](SimConfig& c, const std::string& v) {
        return parse_double(v, ref(c));
      }};
    };
    auto integer = [&t](const std::string& key, std::function<int&(SimConfig&)> ref) {
      t[key] = FieldSetter{[ref](SimConfig& c, const std::string& v) {
        return parse_int(v, ref(c));
      }};
    };
    auto boolean = [&t](const std::string& key, std::function<bool&(SimConfig&)> ref) {
      t[key] = FieldSetter{[ref](SimConfig& c, const std::string& v) {
        return parse_bool(v, ref(c));
      }};
    };
    (void)add_d;

    integer("network.n_total", [](SimConfig& c) -> int& { return c.network.n_total; });
    integer("network.d_shards", [](SimConfig& c) -> int& { return c.network.d_shards; });
    integer("network.n_min", [](SimConfig& c) -> int& { return c.network.n_min; });
    integer("network.leads_per_episode",
            [](SimConfig& c) -> int& { return c.network.leads_per_episode; });
    t["network.seed"] = FieldSetter{[](SimConfig& c, const std::string& v) {
      return parse_u64(v, c.network.seed);
    }};

    integer("attack.h_dishonest", [](SimConfig& c) -> int& { return c.attack.h_dishonest; });
    dbl("attack.fail_prob", [](SimConfig& c) -> double& { return c.attack.fail_prob; });
    dbl("attack.tau", [](SimConfig& c) -> double& { return c.attack.tau; });
    dbl("attack.kappa", [](SimConfig& c) -> double& { return c.attack.kappa; });
    dbl("attack.w_g", [](SimConfig& c) -> double& { return c.attack.w_g; });
    dbl("attack.w_u", [](SimConfig& c) -> double& { return c.attack.w_u; });

    dbl("trust.alpha", [](SimConfig& c) -> double& { return c.trust.alpha; });
    dbl("trust.beta", [](SimConfig& c) -> double& { return c.trust.beta; });
    dbl("trust.mu", [](SimConfig& c) -> double& { return c.trust.mu; });
    dbl("trust.gamma", [](SimConfig& c) -> double& { return c.trust.gamma; });
    dbl("trust.rho_t", [](SimConfig& c) -> double& { return c.trust.rho_t; });
    dbl("trust.bootstrap", [](SimConfig& c) -> double& { return c.trust.bootstrap; });

    dbl("risk.rho_cr", [](SimConfig& c) -> double& { return c.risk.rho_cr; });

    dbl("txgen.base_mean", [](SimConfig& c) -> double& { return c.txgen.base_mean; });
    dbl("txgen.base_sd", [](SimConfig& c) -> double& { return c.txgen.base_sd; });
    dbl("txgen.collusion_boost",
        [](SimConfig& c) -> double& { return c.txgen.collusion_boost; });
    boolean("txgen.resample_each_episode",
            [](SimConfig& c) -> bool& { return c.txgen.resample_each_episode; });

    dbl("reward.e_a", [](SimConfig& c) -> double& { return c.reward.e_a; });
    dbl("reward.e_b", [](SimConfig& c) -> double& { return c.reward.e_b; });
    dbl("reward.lambda_a", [](SimConfig& c) -> double& { return c.reward.lambda_a; });
    dbl("reward.lambda_b", [](SimConfig& c) -> double& { return c.reward.lambda_b; });
    dbl("reward.lambda_c", [](SimConfig& c) -> double& { return c.reward.lambda_c; });
    integer("reward.balance_slack",
            [](SimConfig& c) -> int& { return c.reward.balance_slack; });

    dbl("dqn.epsilon_start", [](SimConfig& c) -> double& { return c.dqn.epsilon_start; });
    dbl("dqn.epsilon_end", [](SimConfig& c) -> double& { return c.dqn.epsilon_end; });
    integer("dqn.epsilon_decay_steps",
            [](SimConfig& c) -> int& { return c.dqn.epsilon_decay_steps; });
    integer("dqn.replay_capacity",
            [](SimConfig& c) -> int& { return c.dqn.replay_capacity; });
    integer("dqn.batch_size", [](SimConfig& c) -> int& { return c.dqn.batch_size; });
    dbl("dqn.learning_rate", [](SimConfig& c) -> double& { return c.dqn.learning_rate; });
    dbl("dqn.momentum", [](SimConfig& c) -> double& { return c.dqn.momentum; });
    integer("dqn.target_sync_period",
            [](SimConfig& c) -> int& { return c.dqn.target_sync_period; });
    integer("dqn.epochs", [](SimConfig& c) -> int& { return c.dqn.epochs; });
    integer("dqn.samples_per_epoch",
            [](SimConfig& c) -> int& { return c.dqn.samples_per_epoch; });
    integer("dqn.updates_per_epoch",
            [](SimConfig& c) -> int& { return c.dqn.updates_per_epoch; });
    integer("dqn.hidden_units", [](SimConfig& c) -> int& { return c.dqn.hidden_units; });

    dbl("ppo.clip_ratio", [](SimConfig& c) -> double& { return c.ppo.clip_ratio; });
    dbl("ppo.entropy_coef", [](SimConfig& c) -> double& { return c.ppo.entropy_coef; });
    dbl("ppo.value_coef", [](SimConfig& c) -> double& { return c.ppo.value_coef; });
    integer("ppo.minibatches", [](SimConfig& c) -> int& { return c.ppo.minibatches; });
    integer("ppo.update_epochs", [](SimConfig& c) -> int& { return c.ppo.update_epochs; });
    dbl("ppo.learning_rate", [](SimConfig& c) -> double& { return c.ppo.learning_rate; });
    dbl("ppo.momentum", [](SimConfig& c) -> double& { return c.ppo.momentum; });
    integer("ppo.rollout_batch", [](SimConfig& c) -> int& { return c.ppo.rollout_batch; });
    integer("ppo.epochs", [](SimConfig& c) -> int& { return c.ppo.epochs; });
    integer("ppo.hidden_units", [](SimConfig& c) -> int& { return c.ppo.hidden_units; });

    dbl("throughput.cst_cost", [](SimConfig& c) -> double& { return c.throughput.cst_cost; });
    integer("community.sweeps", [](SimConfig& c) -> int& { return c.community_sweeps; });
    return t;
  }();
  return table;
}

bool in01(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

std::vector<std::string> validate(const SimConfig& cfg) {
  std::vector<std::string> errs;
  auto bad = [&errs](const std::string& field, const std::string& why) {
    errs.push_back(field + ": " + why);
  };

  const auto& n = cfg.network;
  if (n.d_shards < 1) bad("network.d_shards", "must be >= 1");
  if (n.n_min < 4) bad("network.n_min", "must be >= 4");
  if (n.leads_per_episode < 1) bad("network.leads_per_episode", "must be >= 1");
  if (n.d_shards >= 1 && n.n_min >= 1 && n.n_total < n.d_shards * n.n_min)
    bad("network.n_total", "must be >= d_shards * n_min");

  const auto& a = cfg.attack;
  if (a.h_dishonest < 0) bad("attack.h_dishonest", "must be >= 0");
  if (a.h_dishonest > n.n_total) bad("attack.h_dishonest", "must be <= n_total");
  if (!in01(a.fail_prob)) bad("attack.fail_prob", "must be in [0,1]");
  if (!in01(a.tau)) bad("attack.tau", "must be in [0,1]");
  if (!in01(a.kappa)) bad("attack.kappa", "must be in [0,1]");
  if (a.w_g <= 0.0 || a.w_g > 1.0) bad("attack.w_g", "must be in (0,1]");
  if (a.w_u <= 0.0 || a.w_u > 1.0) bad("attack.w_u", "must be in (0,1]");

  const auto& t = cfg.trust;
  if (t.alpha < 0.0 || t.beta < 0.0 || t.mu < 0.0)
    bad("trust.alpha", "alpha, beta, mu must be non-negative");
  if (t.alpha + t.beta + t.mu != 1.0)
    bad("trust.alpha", "alpha+beta+mu must sum to 1 exactly");
  if (t.gamma <= 0.0 || t.gamma > 1.0) bad("trust.gamma", "must be in (0,1]");
  if (t.rho_t <= 0.0 || t.rho_t >= 1.0) bad("trust.rho_t", "must be in (0,1)");
  if (t.bootstrap < 0.0 || t.bootstrap > 1.0) bad("trust.bootstrap", "must be in [0,1]");

  if (cfg.risk.rho_cr <= 0.0 || cfg.risk.rho_cr >= 1.0)
    bad("risk.rho_cr", "must be in (0,1)");

  const auto& g = cfg.txgen;
  if (g.base_mean <= 0.0) bad("txgen.base_mean", "must be > 0");
  if (g.base_sd < 0.0) bad("txgen.base_sd", "must be >= 0");
  if (g.collusion_boost < 0.0) bad("txgen.collusion_boost", "must be >= 0");

  const auto& r = cfg.reward;
  if (r.e_a <= 0.0) bad("reward.e_a", "must be > 0");
  if (r.e_b <= 0.0) bad("reward.e_b", "must be > 0");
  if (r.lambda_a <= 0.0) bad("reward.lambda_a", "must be > 0");
  if (r.lambda_b <= 0.0 || r.lambda_b > 1.0) bad("reward.lambda_b", "must be in (0,1]");
  if (r.lambda_c < 0.0) bad("reward.lambda_c", "must be >= 0");
  if (r.balance_slack < 0) bad("reward.balance_slack", "must be >= 0");

  const auto& q = cfg.dqn;
  if (!in01(q.epsilon_start)) bad("dqn.epsilon_start", "must be in [0,1]");
  if (!in01(q.epsilon_end)) bad("dqn.epsilon_end", "must be in [0,1]");
  if (q.epsilon_decay_steps < 1) bad("dqn.epsilon_decay_steps", "must be >= 1");
  if (q.replay_capacity < 1) bad("dqn.replay_capacity", "must be >= 1");
  if (q.batch_size < 1) bad("dqn.batch_size", "must be >= 1");
  if (q.learning_rate <= 0.0) bad("dqn.learning_rate", "must be > 0");
  if (q.target_sync_period < 1) bad("dqn.target_sync_period", "must be >= 1");
  if (q.epochs < 30 || q.epochs > 100) bad("dqn.epochs", "must be in [30,100]");
  if (q.samples_per_epoch < 1) bad("dqn.samples_per_epoch", "must be >= 1");
  if (q.updates_per_epoch < 1) bad("dqn.updates_per_epoch", "must be >= 1");
  if (q.hidden_units < 1) bad("dqn.hidden_units", "must be >= 1");

  const auto& p = cfg.ppo;
  if (p.clip_ratio <= 0.0 || p.clip_ratio >= 1.0) bad("ppo.clip_ratio", "must be in (0,1)");
  if (p.entropy_coef < 0.0) bad("ppo.entropy_coef", "must be >= 0");
  if (p.value_coef < 0.0) bad("ppo.value_coef", "must be >= 0");
  if (p.minibatches < 1) bad("ppo.minibatches", "must be >= 1");
  if (p.update_epochs < 1) bad("ppo.update_epochs", "must be >= 1");
  if (p.learning_rate <= 0.0) bad("ppo.learning_rate", "must be > 0");
  if (p.rollout_batch < 1) bad("ppo.rollout_batch", "must be >= 1");
  if (p.epochs < 30 || p.epochs > 100) bad("ppo.epochs", "must be in [30,100]");
  if (p.hidden_units < 1) bad("ppo.hidden_units", "must be >= 1");

  if (cfg.throughput.cst_cost < 1.0) bad("throughput.cst_cost", "must be >= 1");
  if (cfg.community_sweeps < 1) bad("community.sweeps", "must be >= 1");
  return errs;
}

Result<SimConfig> parse_config_text(const std::string& text) {
  SimConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        return make_error(Errc::config_invalid,
                          "line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      return make_error(Errc::config_invalid,
                        "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    std::string full = section.empty() ? key : section + "." + key;
    auto it = field_table().find(full);
    if (it == field_table().end())
      return make_error(Errc::config_invalid, full + ": unknown config key");
    if (!it->second.set(cfg, value))
      return make_error(Errc::config_invalid, full + ": cannot parse value '" + value + "'");
  }
  auto errs = validate(cfg);
  if (!errs.empty()) return make_error(Errc::config_invalid, errs.front());
  return cfg;
}

Result<SimConfig> load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) return make_error(Errc::io_error, "cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

Result<SimConfig> apply_overrides(SimConfig cfg,
                                  const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    auto it = field_table().find(key);
    if (it == field_table().end())
      return make_error(Errc::config_invalid, key + ": unknown config key");
    if (!it->second.set(cfg, value))
      return make_error(Errc::config_invalid, key + ": cannot parse value '" + value + "'");
  }
  auto errs = validate(cfg);
  if (!errs.empty()) return make_error(Errc::config_invalid, errs.front());
  return cfg;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  keys.reserve(field_table().size());
  for (const auto& [key, setter] : field_table()) keys.push_back(key);
  return keys;
}

std::string dump_config(const SimConfig& c) {
  char buf[64];
  auto d = [&buf](double x) {
    snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "[network]\n"
      << "n_total = " << c.network.n_total << "\n"
      << "d_shards = " << c.network.d_shards << "\n"
      << "n_min = " << c.network.n_min << "\n"
      << "leads_per_episode = " << c.network.leads_per_episode << "\n"
      << "seed = " << c.network.seed << "\n\n"
      << "[attack]\n"
      << "h_dishonest = " << c.attack.h_dishonest << "\n"
      << "fail_prob = " << d(c.attack.fail_prob) << "\n"
      << "tau = " << d(c.attack.tau) << "\n"
      << "kappa = " << d(c.attack.kappa) << "\n"
      << "w_g = " << d(c.attack.w_g) << "\n"
      << "w_u = " << d(c.attack.w_u) << "\n\n"
      << "[trust]\n"
      << "alpha = " << d(c.trust.alpha) << "\n"
      << "beta = " << d(c.trust.beta) << "\n"
      << "mu = " << d(c.trust.mu) << "\n"
      << "gamma = " << d(c.trust.gamma) << "\n"
      << "rho_t = " << d(c.trust.rho_t) << "\n"
      << "bootstrap = " << d(c.trust.bootstrap) << "\n\n"
      << "[risk]\n"
      << "rho_cr = " << d(c.risk.rho_cr) << "\n\n"
      << "[txgen]\n"
      << "base_mean = " << d(c.txgen.base_mean) << "\n"
      << "base_sd = " << d(c.txgen.base_sd) << "\n"
      << "collusion_boost = " << d(c.txgen.collusion_boost) << "\n"
      << "resample_each_episode = " << (c.txgen.resample_each_episode ? "true" : "false")
      << "\n\n"
      << "[reward]\n"
      << "e_a = " << d(c.reward.e_a) << "\n"
      << "e_b = " << d(c.reward.e_b) << "\n"
      << "lambda_a = " << d(c.reward.lambda_a) << "\n"
      << "lambda_b = " << d(c.reward.lambda_b) << "\n"
      << "lambda_c = " << d(c.reward.lambda_c) << "\n"
      << "balance_slack = " << c.reward.balance_slack << "\n\n"
      << "[dqn]\n"
      << "epsilon_start = " << d(c.dqn.epsilon_start) << "\n"
      << "epsilon_end = " << d(c.dqn.epsilon_end) << "\n"
      << "epsilon_decay_steps = " << c.dqn.epsilon_decay_steps << "\n"
      << "replay_capacity = " << c.dqn.replay_capacity << "\n"
      << "batch_size = " << c.dqn.batch_size << "\n"
      << "learning_rate = " << d(c.dqn.learning_rate) << "\n"
      << "momentum = " << d(c.dqn.momentum) << "\n"
      << "target_sync_period = " << c.dqn.target_sync_period << "\n"
      << "epochs = " << c.dqn.epochs << "\n"
      << "samples_per_epoch = " << c.dqn.samples_per_epoch << "\n"
      << "updates_per_epoch = " << c.dqn.updates_per_epoch << "\n"
      << "hidden_units = " << c.dqn.hidden_units << "\n\n"
      << "[ppo]\n"
      << "clip_ratio = " << d(c.ppo.clip_ratio) << "\n"
      << "entropy_coef = " << d(c.ppo.entropy_coef) << "\n"
      << "value_coef = " << d(c.ppo.value_coef) << "\n"
      << "minibatches = " << c.ppo.minibatches << "\n"
      << "update_epochs = " << c.ppo.update_epochs << "\n"
      << "learning_rate = " << d(c.ppo.learning_rate) << "\n"
      << "momentum = " << d(c.ppo.momentum) << "\n"
      << "rollout_batch = " << c.ppo.rollout_batch << "\n"
      << "epochs = " << c.ppo.epochs << "\n"
      << "hidden_units = " << c.ppo.hidden_units << "\n\n"
      << "[throughput]\n"
      << "cst_cost = " << d(c.throughput.cst_cost) << "\n\n"
      << "[community]\n"
      << "sweeps = " << c.community_sweeps << "\n";
  return out.str();
}

}  // namespace tbdd
