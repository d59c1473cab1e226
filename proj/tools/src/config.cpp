// Copyright 2026 The cesaro-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cesaro/cli/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "cesaro/errors.hpp"

namespace cesaro::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

constexpr std::array<std::string_view, 9> kExperimentNames = {
    "counterexample", "l1",         "as_diag",  "aui",        "supermart",
    "expbound",       "bayes_risk", "mar_mean", "bound_table"};

/// Field-tracking view of one JSON object.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string child(std::string_view key) const {
    return path_ + "." + std::string(key);
  }

  bool has(std::string_view key) const { return j_.contains(key); }

  const json& at(std::string_view key) {
    auto it = j_.find(key);
    if (it == j_.end()) throw ConfigError(child(key), "missing required field");
    seen_.insert(std::string(key));
    return *it;
  }

  double number(std::string_view key) { return as_number(at(key), child(key)); }
  double number(std::string_view key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::uint64_t u64(std::string_view key) { return as_u64(at(key), child(key)); }
  std::uint64_t u64(std::string_view key, std::uint64_t fallback) {
    return has(key) ? u64(key) : fallback;
  }

  int integer(std::string_view key, int fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(child(key), "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      throw ConfigError(child(key), "integer out of range");
    }
    return static_cast<int>(x);
  }

  std::string string(std::string_view key) {
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError(child(key), "expected a string");
    return v.get<std::string>();
  }
  std::string string(std::string_view key, std::string fallback) {
    return has(key) ? string(key) : fallback;
  }

  std::vector<double> numbers(std::string_view key) {
    std::vector<double> out;
    const auto& v = array(key);
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(as_number(v[i], element(key, i)));
    }
    return out;
  }

  std::vector<std::uint64_t> u64s(std::string_view key) {
    std::vector<std::uint64_t> out;
    const auto& v = array(key);
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(as_u64(v[i], element(key, i)));
    }
    return out;
  }

  std::vector<int> ints(std::string_view key) {
    std::vector<int> out;
    const auto& v = array(key);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto x = as_u64(v[i], element(key, i));
      if (x > 1000) throw ConfigError(element(key, i), "integer out of range");
      out.push_back(static_cast<int>(x));
    }
    return out;
  }

  Reader object(std::string_view key) { return Reader(at(key), child(key)); }

  /// Rejects every field that was not read.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError(child(key), "unknown field");
    }
  }

 private:
  const json& array(std::string_view key) {
    const auto& v = at(key);
    if (!v.is_array()) throw ConfigError(child(key), "expected an array");
    return v;
  }

  std::string element(std::string_view key, std::size_t i) const {
    return child(key) + "[" + std::to_string(i) + "]";
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
    return x;
  }

  static std::uint64_t as_u64(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      const auto x = v.get<std::int64_t>();
      if (x >= 0) return static_cast<std::uint64_t>(x);
      throw ConfigError(path, "expected a non-negative integer");
    }
    throw ConfigError(path, "expected an integer");
  }

  const json& j_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

// -------------------------------------------------------------- validation

void check(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

template <class T>
void check_grid(const std::vector<T>& grid, const std::string& path, T lower) {
  check(!grid.empty(), path, "grid must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    check(grid[i] >= lower, path + "[" + std::to_string(i) + "]",
          "must be >= " + std::to_string(lower));
    if (i > 0) {
      check(grid[i - 1] < grid[i], path, "grid must be strictly increasing");
    }
  }
}

void check_positive(const std::vector<double>& grid, const std::string& path) {
  check(!grid.empty(), path, "grid must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    check(grid[i] > 0.0, path + "[" + std::to_string(i) + "]", "must be > 0");
  }
}

void check_rate(double beta, const std::string& path) {
  check(beta >= 0.0, path, "beta must be >= 0");
}

// Lifts an owning module's validation error onto a config path.
template <class F>
void with_path(const std::string& base, F&& f) {
  try {
    f();
  } catch (const ParamError& e) {
    throw ConfigError(base + "." + e.field(), e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(base, e.what());
  }
}

// Every stochastic experiment reports at least one confidence interval.
bool needs_interval(Experiment e) { return is_stochastic(e); }

// -------------------------------------------------------------- sections

FamilySection parse_family(Reader r) {
  const std::string kind = r.string("kind");
  FamilySection out = BayesDgpSpec{};
  if (kind == "sine") {
    BayesDgpSpec s;
    s.dim = r.integer("dim", s.dim);
    s.amplitude = r.number("amplitude", s.amplitude);
    s.points_per_axis = r.integer("points_per_axis", s.points_per_axis);
    out = s;
  } else if (kind == "tail_params") {
    TailParamsSpec s;
    auto& p = s.params;
    p.c0 = r.number("c0", p.c0);
    p.c1 = r.number("c1", p.c1);
    p.c2 = r.number("c2", p.c2);
    p.beta = r.number("beta", p.beta);
    p.gamma = r.number("gamma", p.gamma);
    p.delta = r.number("delta", p.delta);
    with_path("$.family", [&] { bounds::validate_params(p); });
    out = s;
  } else if (kind == "trig") {
    MarDgpSpec s;
    s.dim = r.integer("dim", s.dim);
    s.points_per_axis = r.integer("points_per_axis", s.points_per_axis);
    out = s;
  } else {
    const auto parsed = seq::parse_family(kind);
    if (!parsed) {
      throw ConfigError(r.child("kind"), "unknown family '" + kind + "'");
    }
    const seq::Family family = *parsed;
    const std::string base = "$.family";
    with_path(base, [&] {
      switch (family) {
        case seq::Family::kCounterexample: {
          seq::CounterexampleSpec s;
          s.alpha = r.number("alpha", s.alpha);
          s.beta = r.number("beta", s.beta);
          s.bound_b = r.number("bound_b", s.bound_b);
          out = seq::SequenceSpec(s);
          break;
        }
        case seq::Family::kPowerLaw: {
          seq::PowerLawSpec s;
          s.r = r.number("r", s.r);
          s.spread = r.number("spread", s.spread);
          out = seq::SequenceSpec(s);
          break;
        }
        case seq::Family::kExpTail: {
          seq::ExpTailSpec s;
          auto& p = s.params;
          p.c0 = r.number("c0", p.c0);
          p.c1 = r.number("c1", p.c1);
          p.c2 = r.number("c2", p.c2);
          p.beta = r.number("beta", p.beta);
          p.gamma = r.number("gamma", p.gamma);
          p.delta = r.number("delta", p.delta);
          out = seq::SequenceSpec(s);
          break;
        }
        case seq::Family::kSupermartingale: {
          seq::SupermartingaleSpec s;
          s.beta = r.number("beta", s.beta);
          s.contraction = r.number("contraction", s.contraction);
          s.x0 = r.number("x0", s.x0);
          out = seq::SequenceSpec(s);
          break;
        }
        case seq::Family::kBorelCantelli: {
          seq::BorelCantelliSpec s;
          s.beta = r.number("beta", s.beta);
          s.a = r.number("a", s.a);
          s.s = r.number("s", s.s);
          out = seq::SequenceSpec(s);
          break;
        }
      }
    });
  }
  r.finish();
  return out;
}

ExperimentParams parse_params(Experiment e, Reader r) {
  ExperimentParams out;
  switch (e) {
    case Experiment::kCounterexample: {
      CounterexampleParams p;
      p.M = r.number("M", p.M);
      p.k_grid = r.ints("k_grid");
      out = p;
      break;
    }
    case Experiment::kL1: {
      L1Params p;
      p.beta = r.number("beta", p.beta);
      p.n_grid = r.u64s("n_grid");
      out = p;
      break;
    }
    case Experiment::kAsDiag: {
      AsDiagParams p;
      p.beta = r.number("beta", p.beta);
      p.m_grid = r.u64s("m_grid");
      p.n_cap = r.u64("n_cap");
      p.epsilon = r.number("epsilon", p.epsilon);
      out = p;
      break;
    }
    case Experiment::kAui: {
      AuiParams p;
      p.beta = r.number("beta", p.beta);
      p.q = r.number("q", p.q);
      p.n_grid = r.u64s("n_grid");
      p.x_grid = r.numbers("x_grid");
      out = p;
      break;
    }
    case Experiment::kSupermart: {
      SupermartParams p;
      p.beta = r.number("beta", p.beta);
      p.n_grid = r.u64s("n_grid");
      out = p;
      break;
    }
    case Experiment::kExpbound:
    case Experiment::kBoundTable: {
      TailGridParams p;
      p.n_grid = r.u64s("n_grid");
      p.y_grid = r.numbers("y_grid");
      out = p;
      break;
    }
    case Experiment::kBayesRisk: {
      BayesRiskParams p;
      p.n = r.u64("n");
      p.schedule.rate_r = r.number("rate_r", p.schedule.rate_r);
      p.schedule.perturb_scale =
          r.number("perturb_scale", p.schedule.perturb_scale);
      out = p;
      break;
    }
    case Experiment::kMarMean: {
      MarMeanParams p;
      p.n = r.u64("n");
      auto& s = p.schedule;
      s.rate_g = r.number("rate_g", s.rate_g);
      s.rate_q = r.number("rate_q", s.rate_q);
      s.perturb_scale_g = r.number("perturb_scale_g", s.perturb_scale_g);
      s.perturb_scale_q = r.number("perturb_scale_q", s.perturb_scale_q);
      out = p;
      break;
    }
  }
  r.finish();
  return out;
}

void validate_family(const RunConfig& c) {
  const std::string kind = "$.family.kind";
  const auto* seq_spec = std::get_if<seq::SequenceSpec>(&c.family);
  auto need_seq = [&](std::optional<seq::Family> family) {
    check(seq_spec != nullptr, kind,
          "experiment " + std::string(experiment_name(c.experiment)) +
              " needs a sequence family");
    if (family) {
      check(seq_spec->family() == *family, kind,
            "experiment " + std::string(experiment_name(c.experiment)) +
                " needs family " + std::string(seq::family_name(*family)));
    }
  };
  switch (c.experiment) {
    case Experiment::kCounterexample:
      need_seq(seq::Family::kCounterexample);
      break;
    case Experiment::kL1:
    case Experiment::kAsDiag:
    case Experiment::kAui:
      need_seq(std::nullopt);
      break;
    case Experiment::kSupermart:
      need_seq(seq::Family::kSupermartingale);
      break;
    case Experiment::kExpbound:
      need_seq(seq::Family::kExpTail);
      break;
    case Experiment::kBoundTable:
      check(std::holds_alternative<TailParamsSpec>(c.family), kind,
            "experiment bound_table needs family tail_params");
      break;
    case Experiment::kBayesRisk: {
      const auto* s = std::get_if<BayesDgpSpec>(&c.family);
      check(s != nullptr, kind, "experiment bayes_risk needs family sine");
      check(s->dim == 1 || s->dim == 2, "$.family.dim", "must be 1 or 2");
      check(s->amplitude >= 0.0 && s->amplitude <= 0.5, "$.family.amplitude",
            "must lie in [0, 0.5]");
      check(s->points_per_axis >= 0 && s->points_per_axis % 4 == 0,
            "$.family.points_per_axis",
            "must be 0 (default) or a positive multiple of 4");
      break;
    }
    case Experiment::kMarMean: {
      const auto* s = std::get_if<MarDgpSpec>(&c.family);
      check(s != nullptr, kind, "experiment mar_mean needs family trig");
      check(s->dim == 1 || s->dim == 2, "$.family.dim", "must be 1 or 2");
      check(s->points_per_axis >= 0 && s->points_per_axis % 4 == 0,
            "$.family.points_per_axis",
            "must be 0 (default) or a positive multiple of 4");
      break;
    }
  }
}

void validate_params(const RunConfig& c) {
  const std::string base = "$.params";
  auto path = [&](const char* f) { return base + "." + f; };
  std::visit(
      Overloaded{
          [&](const CounterexampleParams& p) {
            check(p.M > 0.0, path("M"), "must be > 0");
            check_grid(p.k_grid, path("k_grid"), 1);
            check(p.k_grid.back() <= 62, path("k_grid"),
                  "values must lie in [1, 62]");
          },
          [&](const L1Params& p) {
            check_rate(p.beta, path("beta"));
            check_grid(p.n_grid, path("n_grid"), std::uint64_t{1});
          },
          [&](const AsDiagParams& p) {
            check_rate(p.beta, path("beta"));
            check_grid(p.m_grid, path("m_grid"), std::uint64_t{1});
            check(p.n_cap > p.m_grid.back(), path("n_cap"),
                  "must exceed every m in m_grid");
            check(p.epsilon > 0.0, path("epsilon"), "must be > 0");
          },
          [&](const AuiParams& p) {
            check_rate(p.beta, path("beta"));
            check(p.q >= 1.0, path("q"), "must be >= 1");
            check_grid(p.n_grid, path("n_grid"), std::uint64_t{1});
            check_positive(p.x_grid, path("x_grid"));
          },
          [&](const SupermartParams& p) {
            check_rate(p.beta, path("beta"));
            check_grid(p.n_grid, path("n_grid"), std::uint64_t{1});
          },
          [&](const TailGridParams& p) {
            check_grid(p.n_grid, path("n_grid"), std::uint64_t{1});
            check_grid(p.y_grid, path("y_grid"), 1.0);
          },
          [&](const BayesRiskParams& p) {
            check(p.n >= 1, path("n"), "must be >= 1");
            with_path(base, [&] { online::validate(p.schedule); });
          },
          [&](const MarMeanParams& p) {
            check(p.n >= 1, path("n"), "must be >= 1");
            with_path(base, [&] { online::validate(p.schedule); });
          },
      },
      c.params);
}

ordered_json family_json(const FamilySection& family) {
  return std::visit(
      Overloaded{
          [](const seq::SequenceSpec& spec) {
            ordered_json j;
            j["kind"] = spec.name();
            std::visit(
                Overloaded{
                    [&](const seq::CounterexampleSpec& s) {
                      j["alpha"] = s.alpha;
                      j["beta"] = s.beta;
                      j["bound_b"] = s.bound_b;
                    },
                    [&](const seq::PowerLawSpec& s) {
                      j["r"] = s.r;
                      j["spread"] = s.spread;
                    },
                    [&](const seq::ExpTailSpec& s) {
                      j["c0"] = s.params.c0;
                      j["c1"] = s.params.c1;
                      j["c2"] = s.params.c2;
                      j["beta"] = s.params.beta;
                      j["gamma"] = s.params.gamma;
                      j["delta"] = s.params.delta;
                    },
                    [&](const seq::SupermartingaleSpec& s) {
                      j["beta"] = s.beta;
                      j["contraction"] = s.contraction;
                      j["x0"] = s.x0;
                    },
                    [&](const seq::BorelCantelliSpec& s) {
                      j["beta"] = s.beta;
                      j["a"] = s.a;
                      j["s"] = s.s;
                    },
                },
                spec.params());
            return j;
          },
          [](const BayesDgpSpec& s) {
            return ordered_json{{"kind", "sine"},
                                {"dim", s.dim},
                                {"amplitude", s.amplitude},
                                {"points_per_axis", s.points_per_axis}};
          },
          [](const TailParamsSpec& s) {
            const auto& p = s.params;
            return ordered_json{{"kind", "tail_params"}, {"c0", p.c0},
                                {"c1", p.c1},            {"c2", p.c2},
                                {"beta", p.beta},        {"gamma", p.gamma},
                                {"delta", p.delta}};
          },
          [](const MarDgpSpec& s) {
            return ordered_json{{"kind", "trig"},
                                {"dim", s.dim},
                                {"points_per_axis", s.points_per_axis}};
          },
      },
      family);
}

ordered_json params_json(const ExperimentParams& params) {
  return std::visit(
      Overloaded{
          [](const CounterexampleParams& p) {
            return ordered_json{{"M", p.M}, {"k_grid", p.k_grid}};
          },
          [](const L1Params& p) {
            return ordered_json{{"beta", p.beta}, {"n_grid", p.n_grid}};
          },
          [](const AsDiagParams& p) {
            return ordered_json{{"beta", p.beta},
                                {"m_grid", p.m_grid},
                                {"n_cap", p.n_cap},
                                {"epsilon", p.epsilon}};
          },
          [](const AuiParams& p) {
            return ordered_json{{"beta", p.beta},
                                {"q", p.q},
                                {"n_grid", p.n_grid},
                                {"x_grid", p.x_grid}};
          },
          [](const SupermartParams& p) {
            return ordered_json{{"beta", p.beta}, {"n_grid", p.n_grid}};
          },
          [](const TailGridParams& p) {
            return ordered_json{{"n_grid", p.n_grid}, {"y_grid", p.y_grid}};
          },
          [](const BayesRiskParams& p) {
            return ordered_json{{"n", p.n},
                                {"rate_r", p.schedule.rate_r},
                                {"perturb_scale", p.schedule.perturb_scale}};
          },
          [](const MarMeanParams& p) {
            const auto& s = p.schedule;
            return ordered_json{{"n", p.n},
                                {"rate_g", s.rate_g},
                                {"rate_q", s.rate_q},
                                {"perturb_scale_g", s.perturb_scale_g},
                                {"perturb_scale_q", s.perturb_scale_q}};
          },
      },
      params);
}

}  // namespace

std::string_view experiment_name(Experiment e) {
  return kExperimentNames[static_cast<std::size_t>(e)];
}

Experiment parse_experiment(std::string_view name) {
  for (std::size_t i = 0; i < kExperimentNames.size(); ++i) {
    if (kExperimentNames[i] == name) return static_cast<Experiment>(i);
  }
  throw ConfigError("$.experiment",
                    "unknown experiment '" + std::string(name) + "'");
}

bool is_stochastic(Experiment e) { return e != Experiment::kBoundTable; }

std::string RunConfig::stem() const {
  return output.stem.empty() ? std::string(experiment_name(experiment))
                             : output.stem;
}

void validate(const RunConfig& c) {
  check(c.schema_version == kSchemaVersion, "$.schema_version",
        "unsupported schema version " + std::to_string(c.schema_version));
  check(c.mc.replications >= 1, "$.mc.replications", "must be >= 1");
  if (needs_interval(c.experiment)) {
    check(c.mc.replications >= mc::kMinReplicationsForCi, "$.mc.replications",
          "must be >= 30 for interval-reporting experiments");
  }
  check(c.mc.confidence > 0.0 && c.mc.confidence < 1.0, "$.mc.confidence",
        "must lie in (0, 1)");
  check(c.mc.workers >= 1 && c.mc.workers <= 1024, "$.mc.workers",
        "must lie in [1, 1024]");
  check(c.output.stem.find_first_of("/\\") == std::string::npos,
        "$.output.stem", "must not contain path separators");
  validate_family(c);
  validate_params(c);
}

RunConfig parse_config(const json& doc) {
  Reader root(doc, "$");
  RunConfig c;
  c.schema_version = root.integer("schema_version", -1);
  check(root.has("schema_version"), "$.schema_version",
        "missing required field");
  check(c.schema_version == kSchemaVersion, "$.schema_version",
        "unsupported schema version " + std::to_string(c.schema_version));
  c.experiment = parse_experiment(root.string("experiment"));
  c.seed = root.u64("seed");
  if (root.has("mc")) {
    Reader m = root.object("mc");
    c.mc.replications = m.u64("replications", c.mc.replications);
    c.mc.confidence = m.number("confidence", c.mc.confidence);
    const auto workers = m.u64("workers", c.mc.workers);
    check(workers >= 1 && workers <= 1024, "$.mc.workers",
          "must lie in [1, 1024]");
    c.mc.workers = static_cast<unsigned>(workers);
    m.finish();
  }
  c.family = parse_family(root.object("family"));
  c.params = parse_params(c.experiment, root.object("params"));
  if (root.has("output")) {
    Reader o = root.object("output");
    c.output.dir = o.string("dir", "");
    c.output.stem = o.string("stem", "");
    o.finish();
  }
  root.finish();
  validate(c);
  return c;
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["schema_version"] = c.schema_version;
  j["experiment"] = experiment_name(c.experiment);
  j["seed"] = c.seed;
  j["mc"] = {{"replications", c.mc.replications},
             {"confidence", c.mc.confidence},
             {"workers", c.mc.workers}};
  j["family"] = family_json(c.family);
  j["params"] = params_json(c.params);
  j["output"] = {{"dir", c.output.dir}, {"stem", c.output.stem}};
  return j;
}

std::string serialize_config(const RunConfig& c) {
  return to_json(c).dump(2) + "\n";
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(std::string_view(buf.str()));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.path(), e.detail());
  }
}

}  // namespace cesaro::cli
