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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tactile/config.hpp"
#include "tactile/container.hpp"
#include "tactile/dataset.hpp"
#include "tactile/error.hpp"
#include "tactile/event_io.hpp"
#include "tactile/network_io.hpp"
#include "tactile/pipeline.hpp"

namespace tactile {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("tactile_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::vector<EventStream> some_streams() {
  SynthConfig sc;
  sc.n_classes = 2;
  sc.n_repetitions = 2;
  const Dataset ds = synth_dataset(sc);
  EncoderConfig ec;
  ec.threshold = 2.0;
  std::vector<EventStream> out;
  for (const auto& s : ds.samples) out.push_back(encode(s, ec));
  return out;
}

TEST(EventIo, TextRoundTripIsExact) {
  const auto streams = some_streams();
  std::stringstream ss;
  write_events_text(ss, streams);
  const auto back = read_events_text(ss);
  ASSERT_EQ(back.size(), streams.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].events, streams[i].events);
    EXPECT_EQ(back[i].label, streams[i].label);
    EXPECT_EQ(back[i].duration_s, streams[i].duration_s);
  }
}

TEST(EventIo, BinaryRoundTripIsExact) {
  TempDir dir;
  const auto streams = some_streams();
  save_events(dir.file("e.bin"), streams);
  const auto back = load_events(dir.file("e.bin"));
  ASSERT_EQ(back.size(), streams.size());
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i].events, streams[i].events);
}

TEST(EventIo, MalformedTextIsRejected) {
  std::stringstream ss("# stream label=0 n_taxels=2 duration_s=1\n0.5 7 ON\n");
  EXPECT_THROW(read_events_text(ss), Error);
  std::stringstream bad("# stream label=0 n_taxels=2 duration_s=1\n0.5 1 SIDEWAYS\n");
  EXPECT_THROW(read_events_text(bad), Error);
}

TEST(Dataset, BinaryAndCsvRoundTrip) {
  TempDir dir;
  SynthConfig sc;
  sc.n_classes = 3;
  sc.n_repetitions = 2;
  const Dataset ds = synth_dataset(sc);
  for (const char* name : {"d.bin", "d.csv"}) {
    save_dataset(ds, dir.file(name));
    const Dataset back = load_dataset(dir.file(name));
    ASSERT_EQ(back.samples.size(), ds.samples.size()) << name;
    // CSV stores label indices, so only the binary form keeps class names.
    if (std::string(name) == "d.bin") EXPECT_EQ(back.class_names, ds.class_names);
    EXPECT_EQ(back.n_classes(), ds.n_classes());
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
      EXPECT_EQ(back.samples[i].taxel_values, ds.samples[i].taxel_values);
      EXPECT_EQ(back.samples[i].label, ds.samples[i].label);
    }
    EXPECT_NE(back.checksum, 0u);
  }
}

TEST(Dataset, CorruptFilesFail) {
  TempDir dir;
  std::ofstream(dir.file("junk.bin")) << "not a dataset";
  EXPECT_THROW(load_dataset(dir.file("junk.bin")), ParseError);
  std::ofstream(dir.file("bad.csv")) << "sample,label,taxel_0\n0,a,300\n";
  EXPECT_THROW(load_dataset(dir.file("bad.csv")), Error);
  EXPECT_THROW(load_dataset(dir.file("missing.bin")), Error);
}

TEST(Synth, ShapeAndDeterminism) {
  SynthConfig sc;
  sc.n_classes = 4;
  sc.n_repetitions = 3;
  sc.include_no_contact = true;
  const Dataset a = synth_dataset(sc), b = synth_dataset(sc);
  EXPECT_EQ(a.samples.size(), 15u);
  EXPECT_EQ(a.n_classes(), 5);
  EXPECT_EQ(a.samples[0].n_frames(), 54);
  EXPECT_EQ(a.samples[0].n_taxels(), 12);
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    EXPECT_EQ(a.samples[i].taxel_values, b.samples[i].taxel_values);
  for (const auto& s : a.samples) {
    EXPECT_GE(s.taxel_values.minCoeff(), 0.0);
    EXPECT_LE(s.taxel_values.maxCoeff(), 255.0);
  }
  sc.seed = 1;
  EXPECT_NE(synth_dataset(sc).samples[0].taxel_values, a.samples[0].taxel_values);
}

TEST(Container, RoundTripAndTypeChecks) {
  Container c;
  c.put("a/x", 1.5);
  c.put("a/m", Eigen::MatrixXd::Identity(2, 3));
  c.put_int("b/n", -7);
  std::stringstream ss;
  c.write(ss);
  const Container back = Container::read(ss);
  EXPECT_EQ(back.get_scalar("a/x"), 1.5);
  EXPECT_EQ(back.get_matrix("a/m"), Eigen::MatrixXd::Identity(2, 3));
  EXPECT_EQ(back.get_int("b/n"), -7);
  EXPECT_THROW(back.get_int("a/x"), Error);
  EXPECT_THROW(back.get_scalar("zzz"), Error);
}

TEST(NetworkIo, FloatAndQuantizedRoundTrip) {
  TempDir dir;
  HyperParams hp;
  const NetworkDef net = init_network(6, 5, 3, true, hp, 4);
  Container c = to_container(net);
  put_input_setup(c, {2.0, 3.0, 8});
  put_split(c, {11, 0.25});
  c.save(dir.file("m.tmod"));
  const Container lc = Container::load(dir.file("m.tmod"));
  const NetworkDef back = network_from_container(lc);
  EXPECT_EQ(back.w_in, net.w_in);
  EXPECT_EQ(back.v_rec, net.v_rec);
  EXPECT_EQ(back.lif_out.beta, net.lif_out.beta);
  EXPECT_EQ(get_input_setup(lc)->nb_input_copies, 8);
  EXPECT_EQ(get_split(lc)->seed, 11u);
  EXPECT_EQ(model_kind(lc), ModelKind::kFloat);

  const QuantizedNetwork q = quantize_network(net);
  save_quantized(q, dir.file("m.tqnt"));
  const QuantizedNetwork qb = load_quantized(dir.file("m.tqnt"));
  EXPECT_EQ(qb.w_in, q.w_in);
  EXPECT_EQ(qb.v_rec, q.v_rec);
  EXPECT_EQ(qb.hidden.threshold, q.hidden.threshold);
  EXPECT_EQ(qb.output.delta_voltage, q.output.delta_voltage);
  EXPECT_THROW(load_network(dir.file("m.tqnt")), Error);
}

TEST(Pipeline, ChannelsFollowCopies) {
  SynthConfig sc;
  sc.n_classes = 2;
  sc.n_repetitions = 1;
  const Dataset ds = synth_dataset(sc);
  const InputSetup in{2.0, 3.0, 8};
  const auto data = encode_dataset(ds, in);
  EXPECT_EQ(data[0].n_channels, 192);
  EXPECT_EQ(data[0].n_steps, 450);
  EXPECT_EQ(data[1].label, 1);
}

TEST(Config, ParsesSectionsListsAndComments) {
  std::stringstream ss(
      "# comment\n"
      "epochs = 12\n"
      "thresholds = [1, 2, 5]\n"
      "name = \"two words\"\n"
      "[synth]\n"
      "n_classes = 4  # trailing\n"
      "flag = yes\n");
  const Config c = Config::parse(ss);
  EXPECT_EQ(c.get_int("epochs", 0), 12);
  EXPECT_EQ(c.get_doubles("thresholds", {}), (std::vector<double>{1, 2, 5}));
  EXPECT_EQ(c.get_string("name", ""), "two words");
  EXPECT_EQ(c.get_int("synth.n_classes", 0), 4);
  EXPECT_TRUE(c.get_bool("synth.flag", false));
  EXPECT_EQ(c.get_int("missing", 9), 9);
  EXPECT_THROW(c.check_known({"epochs"}), InvalidInput);
}

TEST(Config, EnvironmentOverrides) {
  std::stringstream ss("epochs = 12\n[synth]\nn_classes = 4\n");
  Config c = Config::parse(ss);
  c.apply_env({"TACTILE_EPOCHS=3", "TACTILE_SYNTH__N_CLASSES=7", "OTHER=1"});
  EXPECT_EQ(c.get_int("epochs", 0), 3);
  EXPECT_EQ(c.get_int("synth.n_classes", 0), 7);
  EXPECT_FALSE(c.has("other"));
}

TEST(Config, BadValuesFail) {
  std::stringstream ss("epochs = twelve\nline without equals\n");
  EXPECT_THROW(Config::parse(ss), Error);
  std::stringstream ok("epochs = twelve\n");
  const Config c = Config::parse(ok);
  EXPECT_THROW(c.get_int("epochs", 0), Error);
}

}  // namespace
}  // namespace tactile
