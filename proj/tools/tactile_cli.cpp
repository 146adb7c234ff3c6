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

// Command-line front end: tactile <subcommand> [options]. Run with --help for
// the list of subcommands.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tactile/baselines.hpp"
#include "tactile/config.hpp"
#include "tactile/dataset.hpp"
#include "tactile/error.hpp"
#include "tactile/event_codec.hpp"
#include "tactile/event_io.hpp"
#include "tactile/experiment.hpp"
#include "tactile/grid_search.hpp"
#include "tactile/network_io.hpp"
#include "tactile/pipeline.hpp"
#include "tactile/quantize.hpp"
#include "tactile/train.hpp"

namespace {

using namespace tactile;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

std::vector<double> parse_list(const std::string& s) { return parse_double_list(s); }

// Loads a dataset file, or generates one when path is "synthetic".
Dataset open_dataset(const std::string& path, std::uint64_t seed) {
  if (path == "synthetic") {
    SynthConfig sc;
    sc.seed = seed;
    return synth_dataset(sc);
  }
  Dataset ds = load_dataset(path);
  ds.validate();
  return ds;
}

// Events of a binned tensor, one per active (step, channel) at the bin start.
EventStream binned_stream(const BinnedSpikeTensor& t, int n_taxels, double duration_s) {
  EventStream s;
  s.n_taxels = n_taxels;
  s.duration_s = duration_s;
  s.label = t.label();
  for (int step = 0; step < t.n_steps(); ++step) {
    for (int c = 0; c < t.n_channels(); ++c) {
      if (t(step, c)) {
        s.events.push_back({step * t.time_bin_size_ms() / 1000.0, c / 2,
                            c % 2 ? Polarity::kOff : Polarity::kOn});
      }
    }
  }
  return s;
}

struct LoadedModel {
  Container container;
  std::optional<InputSetup> input;
  std::optional<SplitInfo> split;
};

LoadedModel open_model(const std::string& path) {
  LoadedModel m;
  m.container = Container::load(path);
  m.input = get_input_setup(m.container);
  m.split = get_split(m.container);
  return m;
}

// Input setup from the model file, overridden by any explicit flags.
InputSetup resolve_input(const std::optional<InputSetup>& stored, double threshold, double bin,
                         int copies) {
  InputSetup s = stored.value_or(InputSetup{});
  if (threshold > 0) s.threshold = threshold;
  if (bin > 0) s.time_bin_ms = bin;
  if (copies > 0) s.nb_input_copies = copies;
  if (!stored && (threshold <= 0 || bin <= 0 || copies <= 0)) {
    throw InvalidInput("model has no stored input setup; pass --threshold, --bin-size and --copies");
  }
  return s;
}

std::vector<int> select_indices(const std::vector<SpikeRaster>& data, const std::string& split,
                                const std::optional<SplitInfo>& info) {
  std::vector<int> all(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) all[i] = static_cast<int>(i);
  if (split == "all") return all;
  if (!info) throw InvalidInput("model has no stored split; use --split all");
  std::vector<int> labels, train_idx, test_idx;
  for (const SpikeRaster& r : data) labels.push_back(r.label);
  stratified_split(labels, info->test_fraction, info->seed, train_idx, test_idx);
  return split == "train" ? train_idx : test_idx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-based tactile encoding and spiking network toolkit"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for every random choice")->capture_default_str();
  app.fallthrough();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic sliding-fingertip dataset");
  SynthConfig sc;
  std::string synth_out;
  synth->add_option("--classes", sc.n_classes)->capture_default_str();
  synth->add_option("--reps", sc.n_repetitions)->capture_default_str();
  synth->add_flag("--no-contact", sc.include_no_contact, "Append an all-rest class");
  synth->add_option("--peak", sc.peak_value)->capture_default_str();
  synth->add_option("--noise", sc.noise_std)->capture_default_str();
  synth->add_option("--out", synth_out, "Output file (.csv for CSV, binary otherwise)")->required();

  // encode
  auto* enc = app.add_subcommand("encode", "Sigma-delta encode a dataset into event streams");
  std::string enc_in, enc_out;
  double enc_th = 1.0, enc_bin = 0.0;
  enc->add_option("--input", enc_in, "Dataset file or 'synthetic'")->required();
  enc->add_option("--output", enc_out, "Event file (.txt for text, binary otherwise)")->required();
  enc->add_option("--threshold", enc_th)->capture_default_str();
  enc->add_option("--bin-size", enc_bin, "Bin events (ms) and write one event per active bin");

  // analyze
  auto* ana = app.add_subcommand("analyze", "Encoding statistics per threshold and bin size");
  std::string ana_in, ana_report, ana_csv, ana_th = "1,2,5,10", ana_bins = "1,2,3,4,5,6,7,8,9,10";
  ana->add_option("--input", ana_in, "Dataset file or 'synthetic'")->required();
  ana->add_option("--thresholds", ana_th)->capture_default_str();
  ana->add_option("--bin-sizes", ana_bins)->capture_default_str();
  ana->add_option("--report", ana_report, "JSON report path");
  ana->add_option("--csv", ana_csv, "CSV table path");

  // train
  auto* tr = app.add_subcommand("train", "Train a spiking network");
  std::string tr_cfg, tr_data, tr_out, tr_metrics;
  double tr_th = 2.0;
  bool tr_ff = false;
  int tr_epochs = -1, tr_batch = -1, tr_hidden = 450, tr_outputs = 0;
  tr->add_option("--config", tr_cfg, "Key-value config file");
  tr->add_option("--data", tr_data, "Dataset file or 'synthetic'")->required();
  tr->add_option("--out", tr_out, "Model file")->required();
  tr->add_option("--threshold", tr_th)->capture_default_str();
  tr->add_option("--epochs", tr_epochs);
  tr->add_option("--batch-size", tr_batch);
  tr->add_option("--hidden", tr_hidden)->capture_default_str();
  tr->add_option("--outputs", tr_outputs, "Output neurons (0 = number of classes)");
  tr->add_flag("--feedforward", tr_ff);
  tr->add_option("--metrics", tr_metrics, "Per-epoch CSV path");

  // gridsearch
  auto* gs = app.add_subcommand("gridsearch", "Grid over time_bin_size x nb_input_copies");
  std::string gs_data, gs_report, gs_th = "1,2,5,10", gs_bins = "1,2,3,4,5,6,7,8,9,10",
                               gs_copies = "1,2,4,8";
  int gs_epochs = 300, gs_batch = 128, gs_hidden = 450, gs_random = 0;
  gs->add_option("--data", gs_data, "Dataset file or 'synthetic'")->required();
  gs->add_option("--thresholds", gs_th)->capture_default_str();
  gs->add_option("--bin-sizes", gs_bins)->capture_default_str();
  gs->add_option("--copies", gs_copies)->capture_default_str();
  gs->add_option("--epochs", gs_epochs)->capture_default_str();
  gs->add_option("--batch-size", gs_batch)->capture_default_str();
  gs->add_option("--hidden", gs_hidden)->capture_default_str();
  gs->add_option("--random", gs_random, "Random-search trials per threshold instead of the grid");
  gs->add_option("--report", gs_report, "CSV path");

  // quantize
  auto* qz = app.add_subcommand("quantize", "Convert a float model to fixed point");
  std::string qz_model, qz_out;
  qz->add_option("--model", qz_model)->required();
  qz->add_option("--out", qz_out)->required();

  // qinfer
  auto* qi = app.add_subcommand("qinfer", "Integer inference with synaptic operation counts");
  std::string qi_model, qi_data, qi_report, qi_split = "test";
  double qi_th = 0, qi_bin = 0;
  int qi_copies = 0, qi_blank = 100;
  qi->add_option("--model", qi_model)->required();
  qi->add_option("--data", qi_data, "Dataset file or 'synthetic'")->required();
  qi->add_option("--report", qi_report, "JSON report path");
  qi->add_option("--split", qi_split)->check(CLI::IsMember({"test", "train", "all"}))->capture_default_str();
  qi->add_option("--threshold", qi_th);
  qi->add_option("--bin-size", qi_bin);
  qi->add_option("--copies", qi_copies);
  qi->add_option("--blank-steps", qi_blank)->capture_default_str();

  // baseline
  auto* bl = app.add_subcommand("baseline", "Linear one-vs-rest baselines");
  std::string bl_data, bl_mode = "raw", bl_report, bl_json;
  int bl_folds = 5, bl_pca = -1, bl_epochs = 300, bl_step = 1;
  double bl_th = 1.0, bl_bin = 5.0, bl_lr = 0.1, bl_l2 = 1e-3;
  bl->add_option("--data", bl_data, "Dataset file or 'synthetic'")->required();
  bl->add_option("--mode", bl_mode)
      ->check(CLI::IsMember({"raw", "collapsed", "events", "event-bins", "curve"}))
      ->capture_default_str();
  bl->add_option("--folds", bl_folds)->capture_default_str();
  bl->add_option("--pca", bl_pca, "PCA components (default 12 for raw, curve and event-bins, else none)");
  bl->add_option("--threshold", bl_th)->capture_default_str();
  bl->add_option("--bin-size", bl_bin)->capture_default_str();
  bl->add_option("--epochs", bl_epochs)->capture_default_str();
  bl->add_option("--lr", bl_lr)->capture_default_str();
  bl->add_option("--l2", bl_l2)->capture_default_str();
  bl->add_option("--step", bl_step, "Frame step for the curve")->capture_default_str();
  bl->add_option("--report", bl_report, "CSV path");
  bl->add_option("--json", bl_json, "JSON path");

  // ttc
  auto* tt = app.add_subcommand("ttc", "Time-to-classify of a float model");
  std::string tt_model, tt_data, tt_report, tt_csv, tt_split = "test";
  double tt_step = 0.05, tt_tol = 0.01, tt_th = 0, tt_bin = 0;
  int tt_copies = 0;
  tt->add_option("--model", tt_model)->required();
  tt->add_option("--data", tt_data)->required();
  tt->add_option("--step", tt_step)->capture_default_str();
  tt->add_option("--tolerance", tt_tol)->capture_default_str();
  tt->add_option("--split", tt_split)->check(CLI::IsMember({"test", "train", "all"}))->capture_default_str();
  tt->add_option("--threshold", tt_th);
  tt->add_option("--bin-size", tt_bin);
  tt->add_option("--copies", tt_copies);
  tt->add_option("--report", tt_report, "JSON path");
  tt->add_option("--csv", tt_csv, "CSV path");

  // experiment
  auto* ex = app.add_subcommand("experiment", "Run the full pipeline from a config file");
  std::string ex_cfg, ex_out;
  bool ex_dry = false;
  ex->add_option("--config", ex_cfg)->required();
  ex->add_option("--out", ex_out, "Output directory (overrides output_dir)");
  ex->add_flag("--dry-run", ex_dry, "Validate the config and stop");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      sc.seed = seed;
      save_dataset(synth_dataset(sc), synth_out);
      std::cout << "wrote " << sc.n_classes * sc.n_repetitions + (sc.include_no_contact ? sc.n_repetitions : 0)
                << " samples to " << synth_out << '\n';
    } else if (*enc) {
      const Dataset ds = open_dataset(enc_in, seed);
      EncoderConfig ec;
      ec.threshold = enc_th;
      std::vector<EventStream> streams;
      std::int64_t n = 0;
      for (const FrameSequence& s : ds.samples) {
        EventStream st = encode(s, ec);
        if (enc_bin > 0) st = binned_stream(bin_events(st, {enc_bin}), st.n_taxels, st.duration_s);
        n += static_cast<std::int64_t>(st.events.size());
        streams.push_back(std::move(st));
      }
      save_events(enc_out, streams);
      std::cout << "wrote " << n << " events in " << streams.size() << " streams to " << enc_out << '\n';
    } else if (*ana) {
      const Dataset ds = open_dataset(ana_in, seed);
      // Event loss is measured against threshold 1, so it is always included.
      std::vector<double> ths = parse_list(ana_th);
      if (std::find(ths.begin(), ths.end(), 1.0) == ths.end()) ths.insert(ths.begin(), 1.0);
      const auto reps = analyze_encoding(ds.samples, ths, parse_list(ana_bins));
      if (!ana_report.empty()) write_text(ana_report, encoding_json(reps));
      if (!ana_csv.empty() || ana_report.empty()) {
        std::ostringstream csv;
        write_encoding_csv(csv, reps);
        write_text(ana_csv.empty() ? "-" : ana_csv, csv.str());
      }
    } else if (*tr) {
      Config cfg;
      if (!tr_cfg.empty()) cfg = Config::load(tr_cfg);
      cfg.apply_env();
      if (!cfg.has("thresholds") || tr->count("--threshold") > 0) cfg.set("thresholds", std::to_string(tr_th));
      ExperimentConfig ec = experiment_config_from(cfg);
      if (ec.thresholds.size() != 1) throw InvalidInput("train takes a single threshold");
      const double th = ec.thresholds.front();
      const HyperParams hp = ec.hyperparameters(th);
      TrainConfig tc = ec.train;
      if (tr_epochs >= 0) tc.epochs = tr_epochs;
      if (tr_batch > 0) tc.batch_size = tr_batch;
      tc.seed = seed;
      tc.surrogate_scale = hp.scale;
      tc.reg_neurons = hp.reg_neurons;
      tc.reg_spikes = hp.reg_spikes;
      const Dataset ds = open_dataset(tr_data, seed);
      InputSetup in{th, hp.time_bin_size, hp.nb_input_copies};
      const auto data = encode_dataset(ds, in);
      const int outputs = tr_outputs > 0 ? tr_outputs : ds.n_classes();
      const NetworkDef net = init_network(in.n_channels(ds.n_taxels()), tr_hidden, outputs,
                                          !tr_ff && ec.recurrent, hp, seed);
      const TrainResult r = train(net, data, tc, [](const EpochMetrics& m) {
        std::cerr << "epoch " << m.epoch << " train " << std::fixed << std::setprecision(4)
                  << m.train_accuracy << " test " << m.test_accuracy << " loss "
                  << m.loss.total << '\n';
      });
      Container c = to_container(r.network);
      put_input_setup(c, in);
      put_split(c, {seed, tc.test_fraction});
      c.save(tr_out);
      if (!tr_metrics.empty()) {
        std::ostringstream m;
        write_metrics_csv(m, r.history);
        write_text(tr_metrics, m.str());
      }
      std::cout << "best test accuracy " << std::setprecision(17) << r.best_test_accuracy
                << " at epoch " << r.best_epoch << '\n';
    } else if (*gs) {
      const Dataset ds = open_dataset(gs_data, seed);
      TrainConfig tc;
      tc.epochs = gs_epochs;
      tc.batch_size = gs_batch;
      tc.seed = seed;
      std::ostringstream csv;
      if (gs_random > 0) {
        for (double th : parse_list(gs_th)) {
          RandomSearchConfig rc;
          rc.threshold = th;
          rc.trials = gs_random;
          rc.seed = seed;
          rc.n_hidden = gs_hidden;
          rc.train = tc;
          const auto trials = random_search(ds, rc, [&](const RandomTrial& t) {
            std::cerr << "threshold " << th << " trial acc " << t.best_test_accuracy << '\n';
          });
          csv << "# threshold " << th << '\n';
          write_random_search_csv(csv, trials);
        }
      } else {
        GridSearchConfig gc;
        gc.thresholds = parse_list(gs_th);
        gc.bin_sizes_ms = parse_list(gs_bins);
        gc.input_copies.clear();
        for (double c : parse_list(gs_copies)) gc.input_copies.push_back(static_cast<int>(c));
        gc.n_hidden = gs_hidden;
        gc.train = tc;
        const auto res = grid_search(ds, gc, [](const GridPoint& p) {
          std::cerr << "threshold " << p.threshold << " bin " << p.time_bin_ms << " copies "
                    << p.nb_input_copies << " acc " << p.best_test_accuracy << '\n';
        });
        write_grid_csv(csv, res);
      }
      write_text(gs_report.empty() ? "-" : gs_report, csv.str());
    } else if (*qz) {
      const LoadedModel m = open_model(qz_model);
      const NetworkDef net = network_from_container(m.container);
      const QuantizedNetwork q = quantize_network(net);
      Container c = to_container(q, &net);
      if (m.input) put_input_setup(c, *m.input);
      if (m.split) put_split(c, *m.split);
      c.save(qz_out);
      std::cout << "w_scale hidden " << q.hidden.w_scale << " output " << q.output.w_scale
                << ", theta_q hidden " << q.hidden.threshold << " output " << q.output.threshold
                << '\n';
    } else if (*qi) {
      const LoadedModel m = open_model(qi_model);
      const QuantizedNetwork q = quantized_from_container(m.container);
      const InputSetup in = resolve_input(m.input, qi_th, qi_bin, qi_copies);
      const Dataset ds = open_dataset(qi_data, seed);
      const auto data = encode_dataset(ds, in);
      std::vector<SpikeRaster> subset;
      for (int i : select_indices(data, qi_split, m.split)) subset.push_back(data[i]);
      const QuantizedResult r = quantized_forward(q, subset, qi_blank);
      int correct = 0;
      for (std::size_t i = 0; i < subset.size(); ++i) correct += r.predictions[i] == subset[i].label;
      const double acc = subset.empty() ? 0.0 : static_cast<double>(correct) / subset.size();
      const std::string json = synops_json(r.report, acc, q.n_outputs());
      write_text(qi_report.empty() ? "-" : qi_report, json);
    } else if (*bl) {
      const Dataset ds = open_dataset(bl_data, seed);
      LinearConfig lc;
      lc.epochs = bl_epochs;
      lc.learning_rate = bl_lr;
      lc.l2 = bl_l2;
      const bool pca_default = bl_mode == "raw" || bl_mode == "curve" || bl_mode == "event-bins";
      lc.pca_components = bl_pca >= 0 ? bl_pca : (pca_default ? 12 : 0);
      std::ostringstream csv;
      if (bl_mode == "curve") {
        const auto curve = incremental_frames_curve(ds, lc, bl_folds, seed, bl_step);
        write_curve_csv(csv, curve);
        if (!bl_json.empty()) write_text(bl_json, cv_json("curve", curve.back().cv));
      } else {
        FeatureMatrix f;
        if (bl_mode == "raw") f = raw_features(ds);
        else if (bl_mode == "collapsed") f = collapsed_features(ds);
        else if (bl_mode == "events") f = event_count_features(ds, bl_th);
        else f = event_bin_features(ds, bl_th, bl_bin);
        const CvResult r = cross_validate(f, lc, bl_folds, seed);
        csv << "mode,fold,accuracy\n" << std::setprecision(17);
        for (std::size_t k = 0; k < r.fold_accuracy.size(); ++k)
          csv << bl_mode << ',' << k << ',' << r.fold_accuracy[k] << '\n';
        csv << bl_mode << ",mean," << r.mean << '\n' << bl_mode << ",std," << r.std << '\n';
        if (!bl_json.empty()) write_text(bl_json, cv_json(bl_mode, r));
      }
      write_text(bl_report.empty() ? "-" : bl_report, csv.str());
    } else if (*tt) {
      const LoadedModel m = open_model(tt_model);
      const NetworkDef net = network_from_container(m.container);
      const InputSetup in = resolve_input(m.input, tt_th, tt_bin, tt_copies);
      const Dataset ds = open_dataset(tt_data, seed);
      const auto data = encode_dataset(ds, in);
      const TtcResult r = compute_ttc(net, data, select_indices(data, tt_split, m.split), tt_step, tt_tol);
      if (!tt_csv.empty()) {
        std::ostringstream csv;
        write_ttc_csv(csv, r);
        write_text(tt_csv, csv.str());
      }
      write_text(tt_report.empty() ? "-" : tt_report, ttc_json(r));
    } else if (*ex) {
      Config cfg = Config::load(ex_cfg);
      cfg.apply_env();
      ExperimentConfig ec = experiment_config_from(cfg);
      if (app.get_option("--seed")->count() > 0) ec.seed = seed;
      if (!ex_out.empty()) ec.output_dir = ex_out;
      if (ex_dry) ec.dry_run = true;
      const ExperimentResult r = run_experiment(ec);
      if (r.dry_run) {
        std::cout << "config ok\n";
      } else {
        for (const ThresholdResult& t : r.thresholds) {
          std::cout << "threshold " << t.threshold << ": float " << t.float_mean << " +- "
                    << t.float_std << ", quantized " << t.quantized_mean << " +- "
                    << t.quantized_std << ", ttc " << t.ttc.ttc << ", synops/sample "
                    << t.synops.per_sample(t.synops.synops) << '\n';
        }
        if (ec.output_dir.empty()) std::cout << experiment_json(r);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
