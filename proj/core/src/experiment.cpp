// Copyright 2026 The Tactile SNN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tactile/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "tactile/error.hpp"
#include "tactile/network_io.hpp"
#include "tactile/pipeline.hpp"

namespace tactile {
namespace {

using Json = nlohmann::ordered_json;

std::string fmt17(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// nlohmann prints the shortest round-trip form; reports use a fixed 17
// significant digits instead, so the tree is serialised here.
void dump(std::ostream& os, const Json& j, int indent) {
  const std::string pad(indent + 2, ' '), end_pad(indent, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        dump(os, it.value(), indent + 2);
      }
      os << '\n' << end_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        dump(os, j[i], indent + 2);
      }
      os << '\n' << end_pad << ']';
      return;
    }
    case Json::value_t::number_float:
      os << fmt17(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::string to_text(const Json& j) {
  std::ostringstream os;
  dump(os, j, 0);
  os << '\n';
  return os.str();
}

Json hyper_json(const HyperParams& h) {
  return Json{{"scale", h.scale},
              {"time_bin_size", h.time_bin_size},
              {"nb_input_copies", h.nb_input_copies},
              {"tau_mem", h.tau_mem},
              {"tau_ratio", h.tau_ratio},
              {"fwd_weight_scale", h.fwd_weight_scale},
              {"weight_scale_factor", h.weight_scale_factor},
              {"reg_neurons", h.reg_neurons},
              {"reg_spikes", h.reg_spikes}};
}

Json synops_obj(const SynOpReport& r) {
  return Json{{"n_samples", r.n_samples},
              {"input_events", r.input_events},
              {"hidden_spikes", r.hidden_spikes},
              {"output_spikes", r.output_spikes},
              {"synops", r.synops},
              {"input_events_per_sample", r.per_sample(r.input_events)},
              {"hidden_spikes_per_sample", r.per_sample(r.hidden_spikes)},
              {"output_spikes_per_sample", r.per_sample(r.output_spikes)},
              {"synops_per_sample", r.per_sample(r.synops)}};
}

Json encoding_obj(const EncodingReport& e) {
  Json isi = Json::array();
  for (const IsiBin& b : e.isi_histogram) isi.push_back(Json{{"lower_s", b.lower_s}, {"count", b.count}});
  return Json{{"threshold", e.threshold},
              {"time_bin_size", e.bin_size_ms},
              {"mean_events_per_sample", e.mean_events_per_sample},
              {"compression_ratio", e.compression_ratio},
              {"reconstruction_mse", e.reconstruction_mse},
              {"mean_events_after_binning", e.mean_events_after_binning},
              {"compression_ratio_after_binning", e.compression_ratio_after_binning},
              {"reconstruction_mse_after_binning", e.reconstruction_mse_after_binning},
              {"events_lost_fraction", e.events_lost_fraction},
              {"isi_below_1ms_fraction", e.isi_below_1ms_fraction},
              {"isi_count", e.isi_count},
              {"isi_histogram", isi}};
}

Json ttc_obj(const TtcResult& r) {
  Json curve = Json::array();
  for (const TtcPoint& p : r.curve) {
    curve.push_back(Json{{"fraction", p.fraction}, {"n_steps", p.n_steps}, {"accuracy", p.accuracy}});
  }
  return Json{{"ttc", r.ttc}, {"full_accuracy", r.full_accuracy}, {"curve", curve}};
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

void set_hyper(HyperParams& h, const std::string& key, double v) {
  if (key == "scale") h.scale = v;
  else if (key == "time_bin_size") h.time_bin_size = v;
  else if (key == "nb_input_copies") h.nb_input_copies = static_cast<int>(v);
  else if (key == "tau_mem") h.tau_mem = v;
  else if (key == "tau_ratio") h.tau_ratio = v;
  else if (key == "fwd_weight_scale") h.fwd_weight_scale = v;
  else if (key == "weight_scale_factor") h.weight_scale_factor = v;
  else if (key == "reg_neurons") h.reg_neurons = v;
  else if (key == "reg_spikes") h.reg_spikes = v;
  else throw InvalidInput("unknown hyperparameter '" + key + "'");
}

const char* const kHyperKeys[] = {"scale",           "time_bin_size",    "nb_input_copies",
                                  "tau_mem",         "tau_ratio",        "fwd_weight_scale",
                                  "weight_scale_factor", "reg_neurons",  "reg_spikes"};

}  // namespace

void mean_std(std::span<const double> v, double& mean, double& std) {
  mean = 0.0;
  std = 0.0;
  if (v.empty()) return;
  for (double a : v) mean += a;
  mean /= static_cast<double>(v.size());
  for (double a : v) std += (a - mean) * (a - mean);
  std = std::sqrt(std / static_cast<double>(v.size()));
}

TtcResult compute_ttc(const NetworkDef& net, std::span<const SpikeRaster> data,
                      std::span<const int> indices, double step, double tolerance) {
  if (!(step > 0.0 && step <= 1.0)) throw InvalidInput("ttc step must lie in (0, 1]");
  if (indices.empty()) throw InvalidInput("ttc needs at least one sample");
  const int n_steps = data[indices.front()].n_steps;
  std::vector<SpikeRaster> subset;
  std::vector<int> local;
  for (int i : indices) {
    subset.push_back(data[i]);
    local.push_back(static_cast<int>(local.size()));
  }

  TtcResult r;
  const int n_probes = static_cast<int>(std::lround(1.0 / step));
  for (int k = 1; k <= n_probes; ++k) {
    const double p = k == n_probes ? 1.0 : k * step;
    const int steps = std::max(1, static_cast<int>(std::lround(p * n_steps)));
    std::vector<SpikeRaster> prefixes;
    prefixes.reserve(subset.size());
    for (const SpikeRaster& s : subset) prefixes.push_back(s.prefix(steps));
    r.curve.push_back({p, steps, accuracy(net, prefixes, local)});
  }
  r.full_accuracy = r.curve.back().accuracy;
  for (const TtcPoint& p : r.curve) {
    if (p.accuracy >= r.full_accuracy - tolerance - 1e-12) {
      r.ttc = p.fraction;
      break;
    }
  }
  return r;
}

void ExperimentConfig::validate() const {
  if (thresholds.empty()) throw InvalidInput("at least one threshold is required");
  for (double t : thresholds)
    if (!(t > 0.0)) throw InvalidInput("thresholds must be positive");
  if (n_hidden < 1) throw InvalidInput("n_hidden must be >= 1");
  if (n_outputs < 0) throw InvalidInput("n_outputs must be >= 0");
  if (n_seeds < 1) throw InvalidInput("n_seeds must be >= 1");
  if (blank_steps < 0) throw InvalidInput("blank_steps must be >= 0");
  if (!(ttc_step > 0.0 && ttc_step <= 1.0)) throw InvalidInput("ttc_step must lie in (0, 1]");
  if (ttc_tolerance < 0.0) throw InvalidInput("ttc_tolerance must be >= 0");
  if (dataset.empty()) throw InvalidInput("dataset must be a path or 'synthetic'");
  train.validate();
  for (double t : thresholds) {
    const HyperParams h = hyperparameters(t);
    if (h.nb_input_copies < 1 || !(h.time_bin_size > 0.0) || !(h.tau_mem > 0.0) ||
        !(h.tau_ratio > 0.0) || !(h.scale > 0.0)) {
      throw InvalidInput("invalid hyperparameters for threshold " + num(t));
    }
  }
}

HyperParams ExperimentConfig::hyperparameters(double threshold) const {
  HyperParams h = reference_hyperparameters(threshold).value_or(HyperParams{});
  for (const auto& [k, v] : hyper_overrides) set_hyper(h, k, v);
  return h;
}

const std::set<std::string>& experiment_config_keys() {
  static const std::set<std::string> keys = [] {
    std::set<std::string> k = {
        "dataset", "synth.n_classes", "synth.n_repetitions", "synth.seed",
        "synth.include_no_contact", "synth.peak_value", "synth.noise_std", "thresholds",
        "recurrent", "n_hidden", "n_outputs", "learning_rate", "batch_size", "epochs",
        "reg_lower_threshold", "reg_lower_strength", "reg_upper_threshold",
        "reg_upper_strength", "test_fraction", "chunk_size", "target_test_accuracy", "n_seeds",
        "seed", "quantize", "blank_steps", "ttc_step", "ttc_tolerance", "analyze_encoding",
        "output_dir", "dry_run"};
    for (const char* h : kHyperKeys) k.insert(h);
    return k;
  }();
  return keys;
}

ExperimentConfig experiment_config_from(const Config& c) {
  c.check_known(experiment_config_keys());
  ExperimentConfig e;
  e.dataset = c.get_string("dataset", e.dataset);
  e.synth.n_classes = static_cast<int>(c.get_int("synth.n_classes", e.synth.n_classes));
  e.synth.n_repetitions = static_cast<int>(c.get_int("synth.n_repetitions", e.synth.n_repetitions));
  e.synth.seed = static_cast<std::uint64_t>(c.get_int("synth.seed", 0));
  e.synth.include_no_contact = c.get_bool("synth.include_no_contact", false);
  e.synth.peak_value = c.get_double("synth.peak_value", e.synth.peak_value);
  e.synth.noise_std = c.get_double("synth.noise_std", e.synth.noise_std);
  e.thresholds = c.get_doubles("thresholds", e.thresholds);
  for (const char* h : kHyperKeys) {
    if (c.has(h)) e.hyper_overrides.emplace_back(h, c.get_double(h, 0.0));
  }
  e.recurrent = c.get_bool("recurrent", e.recurrent);
  e.n_hidden = static_cast<int>(c.get_int("n_hidden", e.n_hidden));
  e.n_outputs = static_cast<int>(c.get_int("n_outputs", e.n_outputs));
  TrainConfig& t = e.train;
  t.learning_rate = c.get_double("learning_rate", t.learning_rate);
  t.batch_size = static_cast<int>(c.get_int("batch_size", t.batch_size));
  t.epochs = static_cast<int>(c.get_int("epochs", t.epochs));
  t.reg_lower_threshold = c.get_double("reg_lower_threshold", t.reg_lower_threshold);
  t.reg_lower_strength = c.get_double("reg_lower_strength", t.reg_lower_strength);
  t.reg_upper_threshold = c.get_double("reg_upper_threshold", t.reg_upper_threshold);
  t.reg_upper_strength = c.get_double("reg_upper_strength", t.reg_upper_strength);
  t.test_fraction = c.get_double("test_fraction", t.test_fraction);
  t.chunk_size = static_cast<int>(c.get_int("chunk_size", t.chunk_size));
  t.target_test_accuracy = c.get_double("target_test_accuracy", t.target_test_accuracy);
  e.n_seeds = static_cast<int>(c.get_int("n_seeds", e.n_seeds));
  e.seed = static_cast<std::uint64_t>(c.get_int("seed", 0));
  e.quantize = c.get_bool("quantize", e.quantize);
  e.blank_steps = static_cast<int>(c.get_int("blank_steps", e.blank_steps));
  e.ttc_step = c.get_double("ttc_step", e.ttc_step);
  e.ttc_tolerance = c.get_double("ttc_tolerance", e.ttc_tolerance);
  e.analyze_encoding = c.get_bool("analyze_encoding", e.analyze_encoding);
  e.output_dir = c.get_string("output_dir", e.output_dir);
  e.dry_run = c.get_bool("dry_run", e.dry_run);
  return e;
}

std::vector<std::pair<std::string, std::string>> config_snapshot(const ExperimentConfig& e) {
  std::vector<std::pair<std::string, std::string>> s;
  auto add = [&](const std::string& k, const std::string& v) { s.emplace_back(k, v); };
  auto add_num = [&](const std::string& k, double v) { add(k, fmt17(v)); };
  add("dataset", e.dataset);
  if (e.dataset == "synthetic") {
    add_num("synth.n_classes", e.synth.n_classes);
    add_num("synth.n_repetitions", e.synth.n_repetitions);
    add_num("synth.seed", static_cast<double>(e.synth.seed));
    add("synth.include_no_contact", e.synth.include_no_contact ? "true" : "false");
    add_num("synth.peak_value", e.synth.peak_value);
    add_num("synth.noise_std", e.synth.noise_std);
  }
  std::string th;
  for (double t : e.thresholds) th += (th.empty() ? "" : ", ") + fmt17(t);
  add("thresholds", th);
  for (const auto& [k, v] : e.hyper_overrides) add_num(k, v);
  add("recurrent", e.recurrent ? "true" : "false");
  add_num("n_hidden", e.n_hidden);
  add_num("n_outputs", e.n_outputs);
  add_num("learning_rate", e.train.learning_rate);
  add_num("batch_size", e.train.batch_size);
  add_num("epochs", e.train.epochs);
  add_num("reg_lower_threshold", e.train.reg_lower_threshold);
  add_num("reg_lower_strength", e.train.reg_lower_strength);
  add_num("reg_upper_threshold", e.train.reg_upper_threshold);
  add_num("reg_upper_strength", e.train.reg_upper_strength);
  add_num("test_fraction", e.train.test_fraction);
  add_num("chunk_size", e.train.chunk_size);
  add_num("target_test_accuracy", e.train.target_test_accuracy);
  add_num("n_seeds", e.n_seeds);
  add_num("seed", static_cast<double>(e.seed));
  add("quantize", e.quantize ? "true" : "false");
  add_num("blank_steps", e.blank_steps);
  add_num("ttc_step", e.ttc_step);
  add_num("ttc_tolerance", e.ttc_tolerance);
  add("analyze_encoding", e.analyze_encoding ? "true" : "false");
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  stage("config", [&] {
    cfg.validate();
    return 0;
  });
  ExperimentResult res;
  res.config = config_snapshot(cfg);
  res.dry_run = cfg.dry_run;
  if (cfg.dry_run) return res;

  const Dataset ds = stage("data", [&] {
    Dataset d = cfg.dataset == "synthetic" ? synth_dataset(cfg.synth) : load_dataset(cfg.dataset);
    d.validate();
    return d;
  });
  res.dataset_source = ds.source;
  res.dataset_checksum = ds.checksum;
  res.n_samples = static_cast<int>(ds.samples.size());
  res.n_classes = ds.n_classes();

  const std::filesystem::path out = cfg.output_dir;
  if (!cfg.output_dir.empty()) {
    stage("report", [&] { return std::filesystem::create_directories(out); });
  }
  auto write_file = [&](const std::string& name, const std::string& text) {
    stage("report", [&] {
      std::ofstream f(out / name, std::ios::binary);
      if (!f) throw Error("cannot write " + (out / name).string());
      f << text;
      return 0;
    });
  };

  std::vector<EncodingReport> encodings;
  for (double th : cfg.thresholds) {
    ThresholdResult tr;
    tr.threshold = th;
    tr.hyper = cfg.hyperparameters(th);
    InputSetup in;
    in.threshold = th;
    in.time_bin_ms = tr.hyper.time_bin_size;
    in.nb_input_copies = tr.hyper.nb_input_copies;
    const std::vector<SpikeRaster> data = stage("encode", [&] { return encode_dataset(ds, in); });
    if (cfg.analyze_encoding) {
      stage("encode", [&] {
        const std::vector<double> ths = th == 1.0 ? std::vector<double>{1.0}
                                                  : std::vector<double>{1.0, th};
        const double bins[] = {tr.hyper.time_bin_size};
        const auto reps = analyze_encoding(ds.samples, ths, bins);
        tr.encoding = reps.back();
        tr.has_encoding = true;
        encodings.push_back(tr.encoding);
        return 0;
      });
    }

    const int outputs = cfg.n_outputs > 0 ? cfg.n_outputs : ds.n_classes();
    for (int s = 0; s < cfg.n_seeds; ++s) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(s);
      TrainConfig tc = cfg.train;
      tc.seed = seed;
      tc.surrogate_scale = tr.hyper.scale;
      tc.reg_neurons = tr.hyper.reg_neurons;
      tc.reg_spikes = tr.hyper.reg_spikes;
      const TrainResult r = stage("train", [&] {
        const NetworkDef net = init_network(in.n_channels(ds.n_taxels()), cfg.n_hidden, outputs,
                                            cfg.recurrent, tr.hyper, seed);
        return train(net, data, tc);
      });
      tr.float_accuracy.push_back(r.best_test_accuracy);

      std::vector<SpikeRaster> test;
      for (int i : r.test_indices) test.push_back(data[i]);
      const std::string tag = "th" + num(th) + "_seed" + std::to_string(seed);
      if (cfg.quantize) {
        const QuantizedNetwork q = stage("quantize", [&] { return quantize_network(r.network); });
        const QuantizedResult qr =
            stage("evaluate", [&] { return quantized_forward(q, test, cfg.blank_steps); });
        int correct = 0;
        for (std::size_t i = 0; i < test.size(); ++i) correct += qr.predictions[i] == test[i].label;
        tr.quantized_accuracy.push_back(static_cast<double>(correct) / test.size());
        if (s == 0) tr.synops = qr.report;
        if (!cfg.output_dir.empty() && s == 0) {
          stage("report", [&] {
            save_quantized(q, (out / ("model_" + tag + ".tqnt")).string());
            return 0;
          });
        }
      }
      if (s == 0) {
        tr.history = r.history;
        tr.ttc = stage("evaluate", [&] {
          return compute_ttc(r.network, data, r.test_indices, cfg.ttc_step, cfg.ttc_tolerance);
        });
      }
      if (!cfg.output_dir.empty()) {
        std::ostringstream m;
        write_metrics_csv(m, r.history);
        write_file("metrics_" + tag + ".csv", m.str());
        if (s == 0) {
          stage("report", [&] {
            save_network(r.network, (out / ("model_" + tag + ".tmod")).string());
            return 0;
          });
        }
      }
    }
    mean_std(tr.float_accuracy, tr.float_mean, tr.float_std);
    mean_std(tr.quantized_accuracy, tr.quantized_mean, tr.quantized_std);
    if (!cfg.output_dir.empty()) {
      std::ostringstream t;
      write_ttc_csv(t, tr.ttc);
      write_file("ttc_th" + num(th) + ".csv", t.str());
    }
    res.thresholds.push_back(std::move(tr));
  }

  if (!cfg.output_dir.empty()) {
    write_file("report.json", experiment_json(res));
    if (!encodings.empty()) {
      std::ostringstream e;
      write_encoding_csv(e, encodings);
      write_file("encoding.csv", e.str());
    }
  }
  return res;
}

std::string experiment_json(const ExperimentResult& r) {
  Json cfg = Json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  Json ths = Json::array();
  for (const ThresholdResult& t : r.thresholds) {
    Json hist = Json::array();
    for (const EpochMetrics& m : t.history) {
      hist.push_back(Json{{"epoch", m.epoch},
                          {"train_acc", m.train_accuracy},
                          {"test_acc", m.test_accuracy},
                          {"L", m.loss.cross_entropy},
                          {"L1", m.loss.reg_l1},
                          {"L2", m.loss.reg_l2},
                          {"L_tot", m.loss.total},
                          {"hidden_spike_mean", m.hidden_spike_mean}});
    }
    Json j{{"threshold", t.threshold},
           {"hyperparameters", hyper_json(t.hyper)},
           {"float_accuracy", t.float_accuracy},
           {"float_accuracy_mean", t.float_mean},
           {"float_accuracy_std", t.float_std},
           {"quantized_accuracy", t.quantized_accuracy},
           {"quantized_accuracy_mean", t.quantized_mean},
           {"quantized_accuracy_std", t.quantized_std},
           {"ttc", ttc_obj(t.ttc)},
           {"synops", synops_obj(t.synops)},
           {"history", hist}};
    if (t.has_encoding) j["encoding"] = encoding_obj(t.encoding);
    ths.push_back(j);
  }
  Json root{{"schema_version", r.schema_version},
            {"kind", "experiment"},
            {"dry_run", r.dry_run},
            {"dataset", Json{{"source", r.dataset_source},
                             {"checksum", r.dataset_checksum},
                             {"n_samples", r.n_samples},
                             {"n_classes", r.n_classes}}},
            {"config", cfg},
            {"thresholds", ths}};
  return to_text(root);
}

std::string encoding_json(std::span<const EncodingReport> reports) {
  Json arr = Json::array();
  for (const EncodingReport& e : reports) arr.push_back(encoding_obj(e));
  return to_text(Json{{"schema_version", kReportSchemaVersion}, {"kind", "encoding"}, {"reports", arr}});
}

std::string synops_json(const SynOpReport& r, double accuracy, int n_classes) {
  return to_text(Json{{"schema_version", kReportSchemaVersion},
                      {"kind", "synops"},
                      {"accuracy", accuracy},
                      {"n_classes", n_classes},
                      {"report", synops_obj(r)}});
}

std::string ttc_json(const TtcResult& r) {
  Json j{{"schema_version", kReportSchemaVersion}, {"kind", "ttc"}};
  j.update(ttc_obj(r));
  return to_text(j);
}

std::string cv_json(const std::string& mode, const CvResult& r) {
  return to_text(Json{{"schema_version", kReportSchemaVersion},
                      {"kind", "baseline"},
                      {"mode", mode},
                      {"fold_accuracy", r.fold_accuracy},
                      {"mean", r.mean},
                      {"std", r.std}});
}

void write_ttc_csv(std::ostream& os, const TtcResult& r) {
  os << "fraction,n_steps,accuracy\n" << std::setprecision(17);
  for (const TtcPoint& p : r.curve) os << p.fraction << ',' << p.n_steps << ',' << p.accuracy << '\n';
}

void write_encoding_csv(std::ostream& os, std::span<const EncodingReport> reports) {
  os << "threshold,time_bin_size,mean_events,gamma,mse,mean_events_binned,gamma_binned,"
        "mse_binned,events_lost,isi_below_1ms\n"
     << std::setprecision(17);
  for (const EncodingReport& e : reports) {
    os << e.threshold << ',' << e.bin_size_ms << ',' << e.mean_events_per_sample << ','
       << e.compression_ratio << ',' << e.reconstruction_mse << ','
       << e.mean_events_after_binning << ',' << e.compression_ratio_after_binning << ','
       << e.reconstruction_mse_after_binning << ',' << e.events_lost_fraction << ','
       << e.isi_below_1ms_fraction << '\n';
  }
}

void write_curve_csv(std::ostream& os, std::span<const CurvePoint> curve) {
  os << "n_frames,time_s,mean_acc,std_acc\n" << std::setprecision(17);
  for (const CurvePoint& p : curve) {
    os << p.n_frames << ',' << p.time_s << ',' << p.cv.mean << ',' << p.cv.std << '\n';
  }
}

}  // namespace tactile
