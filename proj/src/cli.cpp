// Copyright 2026 The gok-bounds Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gok/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "gok/bounds.hpp"
#include "gok/core.hpp"
#include "gok/io.hpp"
#include "gok/polytope.hpp"
#include "gok/sampler.hpp"
#include "gok/vqe.hpp"
#include "gok/weights.hpp"

namespace gok {
namespace {

using nlohmann::json;

// Rounds to the 12 significant digits used for every printed number.
json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

json num_list(std::span<const double> values) {
  json a = json::array();
  for (double v : values) a.push_back(num(v));
  return a;
}

json prefactors_json(const std::optional<Prefactors>& p) {
  if (!p) return nullptr;
  return {{"lower", num(p->lower)}, {"upper", num(p->upper)}};
}

std::string join(std::span<const double> values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += format_number(values[i]);
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_numbers(const std::string& body, const std::string& origin) {
  std::vector<double> out;
  std::string token;
  const auto flush = [&] {
    if (token.empty()) return;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(v)) {
      throw InvalidArgument("cannot parse '" + token + "' in " + origin + " as a number");
    }
    out.push_back(v);
    token.clear();
  };
  for (char c : body) {
    if (c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return out;
}

std::vector<std::vector<double>> parse_matrix(const std::string& text) {
  if (text.empty() || text[0] != '@') {
    throw InvalidArgument("basis matrices are read from a file given as @path");
  }
  const std::string body = read_file(text.substr(1));
  std::vector<std::vector<double>> rows;
  std::istringstream lines(body);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row = parse_numbers(line, text);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::size_t> parse_indices(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_vector(text)) {
    if (v < 0.0 || v != std::floor(v)) {
      throw InvalidArgument("expected non-negative integer indices, got " + format_number(v));
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

WeightVector weights_from(const std::string& text) {
  return WeightVector::from_unnormalized(parse_vector(text));
}

EnergySpectrum spectrum_from(const std::string& text) {
  std::vector<double> e = parse_vector(text);
  return EnergySpectrum(std::move(e));
}

// Named (w, E) setups for the scatter experiments.
struct Preset {
  std::vector<double> weights;
  std::vector<double> energies;
};

const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> table = {
      {"d3-near-equal", {{0.35, 0.33, 0.32}, {-1, 0, 2}}},
      {"d3-optimal", {{2, 1, 0}, {-1, 0, 2}}},
      {"d3-ratio4", {{16, 4, 1}, {-1, 0, 2}}},
      {"d3-ratio8", {{64, 8, 1}, {-1, 0, 2}}},
      {"d5-near-equal", {{0.35, 0.33, 0.32, 0, 0}, {-1, 0, 2, 5, 8}}},
      {"d5-optimal", {{3, 2, 1, 0, 0}, {-1, 0, 2, 5, 8}}},
      {"d5-ratio4", {{16, 4, 1, 0, 0}, {-1, 0, 2, 5, 8}}},
      {"d5-ratio8", {{64, 8, 1, 0, 0}, {-1, 0, 2, 5, 8}}},
  };
  return table;
}

struct Globals {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out_path;
};

class Output {
 public:
  Output(const Globals& g, std::ostream& fallback) : stream_(&fallback) {
    if (!g.out_path.empty()) {
      file_ = std::make_unique<std::ofstream>(g.out_path);
      if (!*file_) throw IoError("cannot open " + g.out_path + " for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw IoError("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

json header(const Globals& g, const std::string& command) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"seed", g.seed}};
}

void csv_header(std::ostream& os, const Globals& g, const std::string& command) {
  write_csv_preamble(os);
  os << "# command: " << command << "\n# seed: " << g.seed << '\n';
}

json bundle_json(const ErrorBundle& b) {
  return {{"delta_E_w", num(b.delta_E_w)},
          {"delta_rho_w", num(b.delta_rho_w)},
          {"delta_psi", num_list(b.delta_psi)},
          {"delta_E", num_list(b.delta_E)},
          {"targeted", b.targeted},
          {"sum_psi", num(b.sum_psi)},
          {"sum_abs_E", num(b.sum_abs_E)},
          {"kyfan_partials", num_list(b.kyfan_partials)}};
}

json report_json(const ComplianceReport& r) {
  json checks = json::array();
  for (const BoundCheck& c : r.checks) {
    checks.push_back({{"quantity", c.label()},
                      {"value", num(c.value)},
                      {"lower", num(c.lower)},
                      {"upper", num(c.upper)},
                      {"lower_slack", num(c.lower_slack)},
                      {"upper_slack", num(c.upper_slack)},
                      {"pass", c.pass}});
  }
  return {{"delta_E_w", num(r.delta_E_w)},
          {"validity_threshold", num(r.validity_threshold)},
          {"in_regime", r.in_regime},
          {"violations", r.violations()},
          {"checks", checks}};
}

json bounds_json(const BoundSet& b, bool with_energies) {
  json j;
  j["targeted"] = b.targeted;
  if (b.gaps) {
    j["g"] = num(b.gaps->min_swap_error);
    j["G"] = num(b.gaps->max_swap_error);
  }
  if (with_energies) {
    j["ensemble_state"] = prefactors_json(b.ensemble_state);
    json states = json::array();
    for (std::size_t k = 0; k < b.dim; ++k) {
      if (b.eigenstate[k]) states.push_back({{"k", k}, {"upper", num(*b.eigenstate[k])}});
    }
    j["eigenstate"] = states;
    j["eigenstate_sum"] = prefactors_json(b.eigenstate_sum);
  }
  json energies = json::array();
  for (std::size_t k = 0; k < b.dim; ++k) {
    if (b.eigenenergy[k]) {
      energies.push_back(
          {{"k", k}, {"lower", num(b.eigenenergy[k]->lower)}, {"upper", num(b.eigenenergy[k]->upper)}});
    }
  }
  j["eigenenergy"] = energies;
  j["eigenenergy_sum"] = prefactors_json(b.eigenenergy_sum);
  j["refused"] = b.refusals;
  return j;
}

void bounds_csv(std::ostream& os, const BoundSet& b, bool with_energies) {
  const std::string g = b.gaps ? format_number(b.gaps->min_swap_error) : "";
  const std::string big_g = b.gaps ? format_number(b.gaps->max_swap_error) : "";
  os << "quantity,lower_prefactor,upper_prefactor,g,G\n";
  const auto row = [&](const std::string& name, const std::optional<Prefactors>& p) {
    if (!p) return;
    os << name << ',' << format_number(p->lower) << ',' << format_number(p->upper) << ',' << g
       << ',' << big_g << '\n';
  };
  if (with_energies) {
    row("delta_rho_w", b.ensemble_state);
    for (std::size_t k = 0; k < b.dim; ++k) {
      if (b.eigenstate[k]) row("delta_psi_" + std::to_string(k), Prefactors{0.0, *b.eigenstate[k]});
    }
    row("sum_psi", b.eigenstate_sum);
  }
  for (std::size_t k = 0; k < b.dim; ++k) row("delta_E_" + std::to_string(k), b.eigenenergy[k]);
  row("sum_abs_E", b.eigenenergy_sum);
}

// Spectrum-free part of the bound set.
BoundSet energy_only_bounds(const WeightVector& w) {
  BoundSet set;
  set.dim = w.size();
  set.targeted = w.targeted_count();
  set.eigenstate.assign(set.dim, std::nullopt);
  set.eigenenergy.assign(set.dim, std::nullopt);
  for (std::size_t k = 0; k < set.dim; ++k) {
    try {
      set.eigenenergy[k] = eigenenergy_prefactors(k, w);
    } catch (const Error& e) {
      set.refusals.push_back("eigenenergy " + std::to_string(k) + ": " + e.what());
    }
  }
  try {
    set.eigenenergy_sum = eigenenergy_sum_prefactors(w);
  } catch (const Error& e) {
    set.refusals.push_back(std::string("eigenenergy sum: ") + e.what());
  }
  return set;
}

struct TargetOptions {
  std::string target;
  std::size_t dim = 0;
  std::optional<std::size_t> k;
  std::optional<std::size_t> count;
};

TargetSpec make_target_spec(const TargetOptions& o, const std::optional<EnergySpectrum>& e) {
  TargetSpec spec;
  spec.target = parse_weight_target(o.target);
  spec.dim = e ? e->size() : o.dim;
  if (e && o.dim != 0 && o.dim != e->size()) {
    throw DimensionMismatch("--D disagrees with the length of --E");
  }
  if (spec.dim == 0) throw InvalidArgument("give the dimension with --D or a spectrum with --E");
  if (needs_spectrum(spec.target) && !e) {
    throw InvalidArgument(o.target + " depends on the spectrum; pass --E");
  }
  if (spec.target == WeightTarget::single_energy || spec.target == WeightTarget::single_state) {
    if (!o.k) throw InvalidArgument(o.target + " needs --k");
    spec.index = *o.k;
  } else if (spec.target == WeightTarget::lowest_energies ||
             spec.target == WeightTarget::lowest_states) {
    if (!o.count) throw InvalidArgument(o.target + " needs --K");
    spec.index = *o.count;
  }
  spec.energies = e;
  return spec;
}

CLI::Option* add_target_options(CLI::App* cmd, TargetOptions& o, const std::string& flag,
                                const std::string& help) {
  CLI::Option* opt = cmd->add_option(flag, o.target, help);
  cmd->add_option("--D", o.dim, "Hilbert-space dimension");
  cmd->add_option("--k", o.k, "State index for E_k and Psi_k");
  cmd->add_option("--K", o.count, "Number of targeted states for sumE_K and sumPsi_K");
  return opt;
}

// bounds ---------------------------------------------------------------------

struct BoundsOptions {
  std::string energies;
  std::string weights;
  TargetOptions target;
};

int cmd_bounds(const BoundsOptions& o, const Globals& g, std::ostream& out, std::ostream& err) {
  std::optional<EnergySpectrum> e;
  if (!o.energies.empty()) e = spectrum_from(o.energies);
  std::optional<TargetSpec> spec;
  std::optional<WeightVector> w;
  if (!o.target.target.empty()) {
    spec = make_target_spec(o.target, e);
    w = optimal_weights(*spec).weights;
  }
  if (!o.weights.empty()) {
    if (w) throw InvalidArgument("--w and --w-optimal are mutually exclusive");
    w = weights_from(o.weights);
  }
  if (!w) throw InvalidArgument("give the weights with --w or --w-optimal");
  if (e && e->size() != w->size()) {
    throw DimensionMismatch("--w and --E have different lengths");
  }

  const BoundSet bounds = e ? compute_bounds(*w, *e) : energy_only_bounds(*w);
  Output sink(g, out);
  if (g.format == "csv") {
    csv_header(*sink, g, "bounds");
    *sink << "# weights: " << join(w->values()) << "\n# shape: " << to_string(w->shape()) << '\n';
    if (spec) {
      *sink << "# target: " << to_string(spec->target)
            << "\n# lowest_upper_bound: " << format_number(lowest_upper_bound(*spec)) << '\n';
    }
    bounds_csv(*sink, bounds, e.has_value());
  } else {
    json j = header(g, "bounds");
    j["weights"] = num_list(w->values());
    j["shape"] = std::string(to_string(w->shape()));
    j["energies"] = e ? num_list(e->values()) : json(nullptr);
    j["bounds"] = bounds_json(bounds, e.has_value());
    if (spec) {
      j["optimal"] = {{"target", std::string(to_string(spec->target))},
                      {"index", spec->index},
                      {"lowest_upper_bound", num(lowest_upper_bound(*spec))},
                      {"attained_upper_prefactor", num(target_upper_prefactor(*spec, *w))}};
    }
    *sink << j.dump(2) << '\n';
  }
  sink.finish();

  if (w->shape() == WeightShape::other) {
    err << "warning: weights " << join(w->values())
        << " contain equal positive entries; bounds for states whose weight coincides with a "
           "neighbour are meaningless and were not emitted:\n";
    for (const std::string& r : bounds.refusals) err << "  " << r << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

// weights --------------------------------------------------------------------

struct WeightsOptions {
  TargetOptions target;
  std::string energies;
  std::optional<double> grid;
  bool verify = false;
};

int cmd_weights(const WeightsOptions& o, const Globals& g, std::ostream& out, std::ostream&) {
  std::optional<EnergySpectrum> e;
  if (!o.energies.empty()) e = spectrum_from(o.energies);
  const TargetSpec spec = make_target_spec(o.target, e);
  const double resolution = o.grid.value_or(1e-3);

  const OptimalWeights closed = optimal_weights(spec);
  std::optional<OptimalWeights> grid;
  if (o.grid || o.verify) grid = grid_search_optimal(spec, resolution);
  const OptimalWeights& primary = (o.grid && !o.verify) ? *grid : closed;

  bool agree = true;
  double max_weight_diff = 0.0;
  double bound_rel_diff = 0.0;
  if (o.verify) {
    for (std::size_t k = 0; k < spec.dim; ++k) {
      max_weight_diff = std::max(max_weight_diff, std::abs(closed.weights[k] - grid->weights[k]));
    }
    bound_rel_diff = std::abs(grid->bound - closed.bound) / closed.bound;
    agree = max_weight_diff <= resolution * (1.0 + 1e-9) && bound_rel_diff <= 0.01;
  }

  Output sink(g, out);
  if (g.format == "csv") {
    csv_header(*sink, g, "weights");
    *sink << "source,target,bound";
    for (std::size_t k = 0; k < spec.dim; ++k) *sink << ",w_" << k;
    *sink << '\n';
    const auto row = [&](const char* source, const OptimalWeights& r) {
      *sink << source << ',' << to_string(spec.target) << ',' << format_number(r.bound) << ','
            << join(r.weights.values()) << '\n';
    };
    if (!o.grid || o.verify) row("closed_form", closed);
    if (grid) row("grid", *grid);
  } else {
    json j = header(g, "weights");
    j["target"] = std::string(to_string(spec.target));
    j["dimension"] = spec.dim;
    j["index"] = spec.index;
    j["weights"] = num_list(primary.weights.values());
    j["lowest_upper_bound"] = num(primary.bound);
    j["source"] = (o.grid && !o.verify) ? "grid" : "closed_form";
    if (o.verify) {
      j["verify"] = {{"resolution", num(resolution)},
                     {"grid_weights", num_list(grid->weights.values())},
                     {"grid_bound", num(grid->bound)},
                     {"max_weight_difference", num(max_weight_diff)},
                     {"bound_relative_difference", num(bound_rel_diff)},
                     {"agree", agree}};
    }
    *sink << j.dump(2) << '\n';
  }
  sink.finish();
  return agree ? kExitOk : kExitNumerical;
}

// sample ---------------------------------------------------------------------

struct SampleOptions {
  std::string preset;
  std::string energies;
  std::string weights;
  std::size_t samples = 100000;
  std::string mode = "orthogonal";
  std::size_t sweep_points = 32;
  bool no_permutations = false;
  bool no_jacobi = false;
  bool check = false;
  std::string records_path;
};

json envelope_json(const Envelope& env) {
  json q = json::object();
  for (const QuantityEnvelope& e : env.quantities) {
    json bins = json::array();
    for (double v : e.bin_max) bins.push_back(num(v));
    q[e.name] = {{"count", e.count},
                 {"min_ratio", e.count ? num(e.min_ratio) : json(nullptr)},
                 {"max_ratio", e.count ? num(e.max_ratio) : json(nullptr)},
                 {"lower_prefactor", e.lower_prefactor ? num(*e.lower_prefactor) : json(nullptr)},
                 {"upper_prefactor", e.upper_prefactor ? num(*e.upper_prefactor) : json(nullptr)},
                 {"bin_max", bins}};
  }
  return {{"records", env.records},
          {"in_regime", env.in_regime},
          {"violations", env.violations},
          {"quantities", q}};
}

int cmd_sample(const SampleOptions& o, const Globals& g, std::ostream& out, std::ostream& err) {
  std::vector<double> wv;
  std::vector<double> ev;
  if (!o.preset.empty()) {
    const auto it = presets().find(o.preset);
    if (it == presets().end()) {
      std::string names;
      for (const auto& [name, _] : presets()) names += " " + name;
      throw InvalidArgument("unknown preset '" + o.preset + "'; available:" + names);
    }
    wv = it->second.weights;
    ev = it->second.energies;
  }
  if (!o.weights.empty()) wv = parse_vector(o.weights);
  if (!o.energies.empty()) ev = parse_vector(o.energies);
  if (wv.empty() || ev.empty()) throw InvalidArgument("give --preset or both --w and --E");
  const WeightVector w = WeightVector::from_unnormalized(wv);
  const EnergySpectrum e(ev);
  if (w.size() != e.size()) throw DimensionMismatch("--w and --E have different lengths");

  ScatterConfig config;
  config.samples = o.samples;
  config.seed = g.seed;
  config.permutations = !o.no_permutations;
  config.jacobi_sweep = !o.no_jacobi;
  config.sweep_points = o.sweep_points;
  if (o.mode == "orthogonal") {
    config.mode = BasisMode::orthogonal;
  } else if (o.mode == "unitary") {
    config.mode = BasisMode::unitary;
  } else {
    throw InvalidArgument("--mode must be orthogonal or unitary");
  }

  std::unique_ptr<std::ofstream> records;
  RecordSink sink_fn;
  if (!o.records_path.empty()) {
    records = std::make_unique<std::ofstream>(o.records_path);
    if (!*records) throw IoError("cannot open " + o.records_path + " for writing");
    std::ostream& r = *records;
    write_csv_preamble(r);
    r << "# seed: " << g.seed << '\n';
    r << "seed,sample_index,source,delta_E_w,delta_rho_w";
    for (std::size_t k = 0; k < w.size(); ++k) r << ",delta_psi_" << k;
    for (std::size_t k = 0; k < w.size(); ++k) r << ",delta_E_" << k;
    r << ",sum_psi,sum_abs_E\n";
    sink_fn = [&r, seed = g.seed](const ScatterRecord& rec) {
      const ErrorBundle& b = rec.bundle;
      r << seed << ',' << rec.index << ',' << to_string(rec.source) << ','
        << format_number(b.delta_E_w) << ',' << format_number(b.delta_rho_w);
      for (double v : b.delta_psi) r << ',' << format_number(v);
      for (double v : b.delta_E) r << ',' << format_number(v);
      r << ',' << format_number(b.sum_psi) << ',' << format_number(b.sum_abs_E) << '\n';
    };
  }

  const ScatterResult result = scatter_experiment(w, e, config, sink_fn);
  if (records) {
    records->flush();
    if (!*records) throw IoError("write failed for " + o.records_path);
  }

  Output sink(g, out);
  if (g.format == "csv") {
    csv_header(*sink, g, "sample");
    *sink << "source,quantity,count,min_ratio,max_ratio,lower_prefactor,upper_prefactor\n";
    const auto rows = [&](const char* source, const Envelope& env) {
      for (const QuantityEnvelope& q : env.quantities) {
        *sink << source << ',' << q.name << ',' << q.count << ','
              << (q.count ? format_number(q.min_ratio) : "") << ','
              << (q.count ? format_number(q.max_ratio) : "") << ','
              << (q.lower_prefactor ? format_number(*q.lower_prefactor) : "") << ','
              << (q.upper_prefactor ? format_number(*q.upper_prefactor) : "") << '\n';
      }
    };
    rows("all", result.combined);
    for (SampleSource s : {SampleSource::random, SampleSource::permutation, SampleSource::jacobi}) {
      rows(std::string(to_string(s)).c_str(), result.by_source[static_cast<std::size_t>(s)]);
    }
  } else {
    json j = header(g, "sample");
    j["weights"] = num_list(w.values());
    j["energies"] = num_list(e.values());
    j["mode"] = o.mode;
    j["samples"] = o.samples;
    j["validity_threshold"] = num(result.combined.validity_threshold);
    j["envelope"] = envelope_json(result.combined);
    j["by_source"] = {{"random", envelope_json(result.by_source[0])},
                      {"permutation", envelope_json(result.by_source[1])},
                      {"jacobi", envelope_json(result.by_source[2])}};
    *sink << j.dump(2) << '\n';
  }
  sink.finish();

  if (o.check && result.combined.violations > 0) {
    err << "error: " << result.combined.violations
        << " in-regime records violate at least one bound\n";
    return kExitNumerical;
  }
  return kExitOk;
}

// vqe ------------------------------------------------------------------------

struct VqeOptions {
  bool reference_model = false;
  std::string field;
  std::vector<std::string> couplings;
  std::vector<int> exponents{1, 2, 3};
  std::size_t max_iter = 5000;
  double learning_rate = 0.01;
  std::string gradient = "analytic";
  std::string out_dir = "vqe_out";
};

int cmd_vqe(const VqeOptions& o, const Globals& g, std::ostream& out, std::ostream&) {
  IsingModel model;
  if (o.reference_model) {
    if (!o.field.empty() || !o.couplings.empty()) {
      throw InvalidArgument("--reference-model cannot be combined with --field or --coupling");
    }
    model = IsingModel::reference_model();
  } else {
    if (o.field.empty()) throw InvalidArgument("give --reference-model or --field");
    model.field = parse_vector(o.field);
    model.spins = model.field.size();
    for (const std::string& c : o.couplings) {
      const std::vector<double> parts = parse_numbers(c, "--coupling");
      if (parts.size() != 3 || parts[0] < 0 || parts[1] < 0) {
        throw InvalidArgument("--coupling expects i,j,value");
      }
      model.couplings.push_back(
          {static_cast<std::size_t>(parts[0]), static_cast<std::size_t>(parts[1]), parts[2]});
    }
  }
  AdamConfig config;
  config.max_iter = o.max_iter;
  config.learning_rate = o.learning_rate;
  if (o.gradient == "analytic") {
    config.gradient = GradientMethod::analytic;
  } else if (o.gradient == "fd") {
    config.gradient = GradientMethod::finite_difference;
  } else {
    throw InvalidArgument("--gradient must be analytic or fd");
  }

  const Eigen::MatrixXd h = build_hamiltonian(model);
  const EnergySpectrum spectrum = exact_spectrum(h);
  const std::vector<DemoRun> runs = run_demo(model, o.exponents, config, g.seed, o.out_dir);

  Output sink(g, out);
  if (g.format == "csv") {
    csv_header(*sink, g, "vqe");
    *sink << "# spectrum: " << join(spectrum.values()) << '\n';
    *sink << "exponent,iterations,converged,final_delta_E_w,trace_file,bounds_file\n";
    for (const DemoRun& r : runs) {
      *sink << r.exponent << ',' << r.trace.points.back().iteration << ','
            << (r.trace.converged ? "true" : "false") << ','
            << format_number(r.trace.points.back().bundle.delta_E_w) << ','
            << r.trace_path.string() << ',' << r.bounds_path.string() << '\n';
    }
  } else {
    json j = header(g, "vqe");
    j["spectrum"] = num_list(spectrum.values());
    json list = json::array();
    for (const DemoRun& r : runs) {
      list.push_back({{"exponent", r.exponent},
                      {"weights", num_list(r.weights.values())},
                      {"iterations", r.trace.points.back().iteration},
                      {"converged", r.trace.converged},
                      {"final_delta_E_w", num(r.trace.points.back().bundle.delta_E_w)},
                      {"trace_file", r.trace_path.string()},
                      {"bounds_file", r.bounds_path.string()}});
    }
    j["runs"] = list;
    *sink << j.dump(2) << '\n';
  }
  sink.finish();
  return kExitOk;
}

// polytope -------------------------------------------------------------------

struct PolytopeOptions {
  std::string energies;
  std::string weights;
  std::optional<double> delta;
  std::optional<double> delta_fraction;
  std::string target = "delta_rho_w";
  std::optional<std::size_t> k;
  bool oracle = false;
  bool gok_check = false;
  std::string cycle;
};

int cmd_polytope(const PolytopeOptions& o, const Globals& g, std::ostream& out, std::ostream&) {
  if (o.weights.empty() || o.energies.empty()) throw InvalidArgument("--w and --E are required");
  const WeightVector w = weights_from(o.weights);
  const EnergySpectrum e = spectrum_from(o.energies);
  if (w.size() != e.size()) throw DimensionMismatch("--w and --E have different lengths");
  const GapFunctions gaps = gap_functions(w, e);
  if (o.delta && o.delta_fraction) throw InvalidArgument("--delta and --delta-frac are exclusive");
  const double delta = o.delta ? *o.delta : gaps.min_swap_error * o.delta_fraction.value_or(0.5);

  LinearTarget target;
  if (o.target == "delta_rho_w" || o.target == "delta_rho") {
    target = delta_rho_target(w);
  } else if (o.target == "delta_E_k") {
    if (!o.k) throw InvalidArgument("--target delta_E_k needs --k");
    target = delta_E_target(*o.k, e);
  } else if (o.target == "delta_E_w") {
    target = delta_E_w_target(Space::weights, w, e);
  } else {
    throw InvalidArgument("--target must be delta_rho_w, delta_E_k or delta_E_w");
  }

  const PermutohedronSlice slice = reference_and_positive_vertices(target.space, w, e, delta);
  const Extrema analytic = constrained_extrema(target, w, e, delta);
  std::optional<Extrema> brute;
  if (o.oracle) brute = brute_force_extrema(target, w, e, delta);
  bool agree = true;
  if (brute) {
    agree = std::abs(brute->min - analytic.min) <= 1e-10 && std::abs(brute->max - analytic.max) <= 1e-10;
  }
  std::optional<double> gok_min;
  if (o.gok_check) gok_min = gok_minimum_check(w, e);
  std::optional<CycleBoundReport> cycle;
  if (!o.cycle.empty()) {
    const std::vector<std::size_t> c = parse_indices(o.cycle);
    cycle = cycle_bound_check(Permutation::from_cycle(w.size(), c), w, e);
  }

  Output sink(g, out);
  if (g.format == "csv") {
    csv_header(*sink, g, "polytope");
    *sink << "# space: " << to_string(slice.space) << "\n# delta: " << format_number(delta)
          << "\n# target: " << target.name << "\n# min: " << format_number(analytic.min)
          << "\n# max: " << format_number(analytic.max) << '\n';
    if (brute) {
      *sink << "# oracle_min: " << format_number(brute->min)
            << "\n# oracle_max: " << format_number(brute->max)
            << "\n# oracle_agree: " << (agree ? "true" : "false") << '\n';
    }
    *sink << "swap_i,swap_j,mixing,target_value";
    for (std::size_t k = 0; k < w.size(); ++k) *sink << ",x_" << k;
    *sink << '\n';
    for (const SliceVertex& v : slice.intersection_vertices) {
      const PositiveVertex& n = slice.positive_vertices[v.neighbour];
      *sink << n.i << ',' << n.j << ',' << format_number(v.mixing) << ','
            << format_number(target(v.point)) << ','
            << join(std::span<const double>(v.point.data(), static_cast<std::size_t>(v.point.size())))
            << '\n';
    }
  } else {
    json j = header(g, "polytope");
    j["weights"] = num_list(w.values());
    j["energies"] = num_list(e.values());
    j["g"] = num(gaps.min_swap_error);
    j["G"] = num(gaps.max_swap_error);
    j["delta"] = num(delta);
    j["space"] = std::string(to_string(slice.space));
    j["target"] = target.name;
    json refs = json::array();
    for (const Eigen::VectorXd& r : slice.reference_vertices) {
      refs.push_back(num_list(std::span<const double>(r.data(), static_cast<std::size_t>(r.size()))));
    }
    j["reference_vertices"] = refs;
    json verts = json::array();
    for (const SliceVertex& v : slice.intersection_vertices) {
      const PositiveVertex& n = slice.positive_vertices[v.neighbour];
      verts.push_back(
          {{"swap", {n.i, n.j}},
           {"positive_vertex",
            num_list(std::span<const double>(n.vertex.data(), static_cast<std::size_t>(n.vertex.size())))},
           {"positive_vertex_error", num(n.error)},
           {"mixing", num(v.mixing)},
           {"point",
            num_list(std::span<const double>(v.point.data(), static_cast<std::size_t>(v.point.size())))},
           {"target_value", num(target(v.point))}});
    }
    j["slice_vertices"] = verts;
    j["extrema"] = {{"min", num(analytic.min)}, {"max", num(analytic.max)}};
    if (brute) {
      j["oracle"] = {{"min", num(brute->min)}, {"max", num(brute->max)}, {"agree", agree}};
    }
    if (gok_min) {
      const double sorted = ensemble_energy(w, e);
      j["gok_minimum"] = {{"exhaustive_minimum", num(*gok_min)},
                          {"sorted_pairing", num(sorted)},
                          {"agree", std::abs(*gok_min - sorted) <= 1e-12 * std::max(1.0, std::abs(sorted))}};
    }
    if (cycle) {
      j["cycle_bounds"] = {{"reference", cycle->reference},
                           {"cycle_length", cycle->cycle_length},
                           {"positive_moved", cycle->positive_moved},
                           {"delta_E_w", num(cycle->delta_E_w)},
                           {"delta_pp", num(cycle->delta_pp)},
                           {"delta_pz", num(cycle->delta_pz)},
                           {"lower_branch", cycle->lower_branch},
                           {"lower_bound", num(cycle->lower_bound)},
                           {"upper_bound", num(cycle->upper_bound)},
                           {"lower_holds", cycle->lower_holds},
                           {"upper_holds", cycle->upper_holds}};
    }
    *sink << j.dump(2) << '\n';
  }
  sink.finish();
  return agree ? kExitOk : kExitNumerical;
}

// check ----------------------------------------------------------------------

struct CheckOptions {
  std::string energies;
  std::string weights;
  std::string basis;
  std::string perm;
  std::string jacobi;
  std::string saturate;
  std::optional<double> delta;
  std::size_t k = 0;
  double tolerance = 1e-10;
};

int cmd_check(const CheckOptions& o, const Globals& g, std::ostream& out, std::ostream& err) {
  if (o.weights.empty() || o.energies.empty()) throw InvalidArgument("--w and --E are required");
  const WeightVector w = weights_from(o.weights);
  const EnergySpectrum e = spectrum_from(o.energies);
  if (w.size() != e.size()) throw DimensionMismatch("--w and --E have different lengths");
  const std::size_t d = w.size();

  const int sources = !o.basis.empty() + !o.perm.empty() + !o.jacobi.empty() + !o.saturate.empty();
  if (sources != 1) {
    throw InvalidArgument("give exactly one of --basis, --perm, --jacobi or --saturate");
  }
  std::optional<BasisMap> basis;
  json extra;
  if (!o.basis.empty()) {
    const auto rows = parse_matrix(o.basis);
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd u(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) {
        throw DimensionMismatch("basis matrix must be square");
      }
      for (Eigen::Index j = 0; j < n; ++j) u(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    basis = BasisMap::orthogonal(u);
  } else if (!o.perm.empty()) {
    basis = BasisMap::permutation(parse_indices(o.perm));
  } else if (!o.jacobi.empty()) {
    const std::vector<double> p = parse_vector(o.jacobi);
    if (p.size() != 3 || p[0] < 0 || p[1] < 0) throw InvalidArgument("--jacobi expects i,j,angle");
    basis = jacobi_rotation(d, static_cast<std::size_t>(p[0]), static_cast<std::size_t>(p[1]), p[2]);
  } else {
    const SaturationTarget t = parse_saturation_target(o.saturate);
    const double delta = o.delta.value_or(0.5 * gap_functions(w, e).min_swap_error);
    const SaturatingState s = jacobi_saturating_state(t, w, e, delta, o.k);
    basis = s.basis;
    extra = {{"target", std::string(to_string(t))},
             {"plane", {s.first, s.second}},
             {"angle", num(s.angle)},
             {"prefactor", num(s.prefactor)}};
  }
  if (basis->dim() != d) throw DimensionMismatch("basis dimension differs from --w");

  const ErrorBundle bundle = error_bundle(*basis, w, e);
  const BoundSet bounds = compute_bounds(w, e);
  const ComplianceReport report = check_bounds(bundle, bounds, o.tolerance);

  Output sink(g, out);
  if (g.format == "csv") {
    csv_header(*sink, g, "check");
    *sink << "# delta_E_w: " << format_number(bundle.delta_E_w)
          << "\n# in_regime: " << (report.in_regime ? "true" : "false") << '\n';
    *sink << "quantity,value,lower,upper,lower_slack,upper_slack,pass\n";
    for (const BoundCheck& c : report.checks) {
      *sink << c.label() << ',' << format_number(c.value) << ','
            << format_number(c.lower) << ',' << format_number(c.upper) << ','
            << format_number(c.lower_slack) << ',' << format_number(c.upper_slack) << ','
            << (c.pass ? "true" : "false") << '\n';
    }
  } else {
    json j = header(g, "check");
    j["weights"] = num_list(w.values());
    j["energies"] = num_list(e.values());
    j["basis_mode"] = std::string(to_string(basis->mode()));
    if (!extra.is_null()) j["saturating_rotation"] = extra;
    j["errors"] = bundle_json(bundle);
    j["compliance"] = report_json(report);
    j["refused"] = bounds.refusals;
    *sink << j.dump(2) << '\n';
  }
  sink.finish();
  if (report.violations() > 0) {
    err << "error: " << report.violations() << " bound(s) violated inside the validity window\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::validation: return kExitValidation;
    case ErrorCategory::numerical: return kExitNumerical;
    case ErrorCategory::io: return kExitIo;
  }
  return kExitValidation;
}

}  // namespace

std::vector<double> parse_vector(const std::string& text) {
  if (!text.empty() && text[0] == '@') return parse_numbers(read_file(text.substr(1)), text);
  std::vector<double> v = parse_numbers(text, "'" + text + "'");
  if (v.empty()) throw InvalidArgument("empty vector");
  return v;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Error bounds for ensemble variational states", "gokb"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--seed", globals.seed, "Random seed (echoed in every output)");
  app.add_option("--format", globals.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", globals.out_path, "Write the result to this file instead of stdout");

  BoundsOptions bounds_opts;
  auto* bounds = app.add_subcommand("bounds", "Bound prefactors for a weight vector and spectrum");
  bounds->add_option("--E", bounds_opts.energies, "Ascending energies, a,b,c or @file");
  bounds->add_option("--w", bounds_opts.weights, "Descending weights (normalized by their sum)");
  add_target_options(bounds, bounds_opts.target, "--w-optimal",
                     "Use the optimal weights for this target "
                     "(E_k, sumE_all, sumE_K, Psi_k, sumPsi_all, sumPsi_K)");

  WeightsOptions weights_opts;
  auto* weights = app.add_subcommand("weights", "Optimal weights for a target error measure");
  add_target_options(weights, weights_opts.target, "--target", "Target measure")->required();
  weights->add_option("--E", weights_opts.energies, "Ascending energies, for state targets");
  weights->add_option("--grid", weights_opts.grid, "Use the grid search at this resolution");
  weights->add_flag("--verify", weights_opts.verify,
                    "Cross-check the closed form against the grid search");

  SampleOptions sample_opts;
  auto* sample = app.add_subcommand("sample", "Random-basis scatter experiment");
  sample->add_option("--preset", sample_opts.preset, "Named (w, E) setup, e.g. d3-ratio4");
  sample->add_option("--E", sample_opts.energies, "Ascending energies");
  sample->add_option("--w", sample_opts.weights, "Descending weights");
  sample->add_option("--n", sample_opts.samples, "Number of random bases")->capture_default_str();
  sample->add_option("--mode", sample_opts.mode, "orthogonal or unitary")->capture_default_str();
  sample->add_option("--sweep-points", sample_opts.sweep_points,
                     "Points per saturating rotation")->capture_default_str();
  sample->add_flag("--no-permutations", sample_opts.no_permutations, "Skip permutation vertices");
  sample->add_flag("--no-jacobi", sample_opts.no_jacobi, "Skip the saturating rotation sweep");
  sample->add_flag("--check", sample_opts.check, "Exit 3 if any in-regime record violates a bound");
  sample->add_option("--records", sample_opts.records_path, "Write every record to this CSV file");

  VqeOptions vqe_opts;
  auto* vqe = app.add_subcommand("vqe", "Ensemble VQE on a transverse-field Ising model");
  vqe->add_flag("--reference-model,--paper-model", vqe_opts.reference_model,
                "Two spins, J=0.09, a=(0.32696, 0.80430)");
  vqe->add_option("--field", vqe_opts.field, "Transverse-field coefficients a_i");
  vqe->add_option("--coupling", vqe_opts.couplings, "Coupling i,j,J (repeatable)");
  vqe->add_option("--weights-exp", vqe_opts.exponents, "Weight exponents n, w ~ (D^n, ..., 1^n)")
      ->delimiter(',');
  vqe->add_option("--max-iter", vqe_opts.max_iter, "Adam iterations")->capture_default_str();
  vqe->add_option("--lr", vqe_opts.learning_rate, "Adam learning rate")->capture_default_str();
  vqe->add_option("--gradient", vqe_opts.gradient, "analytic or fd")->capture_default_str();
  vqe->add_option("--out-dir", vqe_opts.out_dir, "Directory for trace and bounds CSV files")
      ->capture_default_str();

  PolytopeOptions poly_opts;
  auto* poly = app.add_subcommand("polytope", "Permutohedron slices and constrained extrema");
  poly->add_option("--E", poly_opts.energies, "Ascending energies");
  poly->add_option("--w", poly_opts.weights, "Descending weights");
  poly->add_option("--delta", poly_opts.delta, "Ensemble-energy error level");
  poly->add_option("--delta-frac", poly_opts.delta_fraction, "Error level as a fraction of g");
  poly->add_option("--target", poly_opts.target, "delta_rho_w, delta_E_k or delta_E_w")
      ->capture_default_str();
  poly->add_option("--k", poly_opts.k, "State index for delta_E_k");
  poly->add_flag("--oracle", poly_opts.oracle, "Compare against full vertex enumeration");
  poly->add_flag("--gok-check", poly_opts.gok_check, "Exhaustive minimum of w.PE over permutations");
  poly->add_option("--cycle", poly_opts.cycle, "Check cycle-length bounds for this cycle, e.g. 0,1,2");

  CheckOptions check_opts;
  auto* check = app.add_subcommand("check", "Errors and bound compliance of one trial basis");
  check->add_option("--E", check_opts.energies, "Ascending energies");
  check->add_option("--w", check_opts.weights, "Descending weights");
  check->add_option("--basis", check_opts.basis, "Real orthogonal matrix from @file, one row per line");
  check->add_option("--perm", check_opts.perm, "Trial state l is eigenstate perm[l]");
  check->add_option("--jacobi", check_opts.jacobi, "Plane rotation i,j,angle");
  check->add_option("--saturate", check_opts.saturate, "Saturating rotation for a bound");
  check->add_option("--delta", check_opts.delta, "Error level for --saturate (default g/2)");
  check->add_option("--k", check_opts.k, "State index for per-state --saturate targets");
  check->add_option("--tol", check_opts.tolerance, "Slack tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*bounds) return cmd_bounds(bounds_opts, globals, out, err);
    if (*weights) return cmd_weights(weights_opts, globals, out, err);
    if (*sample) return cmd_sample(sample_opts, globals, out, err);
    if (*vqe) return cmd_vqe(vqe_opts, globals, out, err);
    if (*poly) return cmd_polytope(poly_opts, globals, out, err);
    if (*check) return cmd_check(check_opts, globals, out, err);
  } catch (const DivergenceError& e) {
    err << "error: optimization diverged at iteration " << e.iteration() << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitValidation;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"gokb"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace gok
