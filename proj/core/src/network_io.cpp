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

#include "tactile/network_io.hpp"

#include "tactile/error.hpp"

namespace tactile {
namespace {

void put_lif(Container& c, const std::string& p, const LifParams& l) {
  c.put(p + "/tau_mem_ms", l.tau_mem_ms);
  c.put(p + "/tau_syn_ms", l.tau_syn_ms);
  c.put(p + "/time_bin_ms", l.time_bin_ms);
  c.put(p + "/alpha", l.alpha);
  c.put(p + "/beta", l.beta);
  c.put(p + "/threshold", l.threshold);
  c.put(p + "/u_rest", l.u_rest);
  c.put(p + "/resistance", l.resistance);
}

LifParams get_lif(const Container& c, const std::string& p) {
  LifParams l;
  l.tau_mem_ms = c.get_scalar(p + "/tau_mem_ms");
  l.tau_syn_ms = c.get_scalar(p + "/tau_syn_ms");
  l.time_bin_ms = c.get_scalar(p + "/time_bin_ms");
  l.alpha = c.get_scalar(p + "/alpha");
  l.beta = c.get_scalar(p + "/beta");
  l.threshold = c.get_scalar(p + "/threshold");
  l.u_rest = c.get_scalar(p + "/u_rest");
  l.resistance = c.get_scalar(p + "/resistance");
  return l;
}

void put_quant(Container& c, const std::string& p, const QuantParams& q) {
  c.put_int(p + "/delta_current", q.delta_current);
  c.put_int(p + "/delta_voltage", q.delta_voltage);
  c.put_int(p + "/w_scale", q.w_scale);
  c.put_int(p + "/threshold", q.threshold);
}

QuantParams get_quant(const Container& c, const std::string& p) {
  QuantParams q;
  q.delta_current = static_cast<int>(c.get_int(p + "/delta_current"));
  q.delta_voltage = static_cast<int>(c.get_int(p + "/delta_voltage"));
  q.w_scale = static_cast<int>(c.get_int(p + "/w_scale"));
  q.threshold = c.get_int(p + "/threshold");
  return q;
}

Container::IntMatrix widen(const QMatrix& m) { return m.cast<std::int64_t>(); }

QMatrix narrow(const Container::IntMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (m.data()[i] < kWeightMin || m.data()[i] > kWeightMax) {
      throw InvalidInput("quantized weight out of range");
    }
  }
  return m.cast<std::int32_t>();
}

}  // namespace

ModelKind model_kind(const Container& c) {
  const std::int64_t k = c.get_int("model/kind");
  if (k == 1) return ModelKind::kFloat;
  if (k == 2) return ModelKind::kQuantized;
  throw InvalidInput("unknown model kind " + std::to_string(k));
}

Container to_container(const NetworkDef& net) {
  net.validate();
  Container c;
  c.put_int("model/kind", static_cast<std::int64_t>(ModelKind::kFloat));
  c.put_int("model/recurrent", net.recurrent ? 1 : 0);
  c.put("weights/w_in", net.w_in);
  if (net.recurrent) c.put("weights/v_rec", net.v_rec);
  c.put("weights/w_out", net.w_out);
  put_lif(c, "lif_hidden", net.lif_hidden);
  put_lif(c, "lif_out", net.lif_out);
  return c;
}

Container to_container(const QuantizedNetwork& net, const NetworkDef* source) {
  net.validate();
  Container c;
  c.put_int("model/kind", static_cast<std::int64_t>(ModelKind::kQuantized));
  c.put_int("model/recurrent", net.recurrent ? 1 : 0);
  c.put("model/time_bin_ms", net.time_bin_ms);
  c.put_int("weights/w_in", widen(net.w_in));
  if (net.recurrent) c.put_int("weights/v_rec", widen(net.v_rec));
  c.put_int("weights/w_out", widen(net.w_out));
  put_quant(c, "quant_hidden", net.hidden);
  put_quant(c, "quant_out", net.output);
  if (source) {
    put_lif(c, "lif_hidden", source->lif_hidden);
    put_lif(c, "lif_out", source->lif_out);
  }
  return c;
}

NetworkDef network_from_container(const Container& c) {
  if (model_kind(c) != ModelKind::kFloat) throw InvalidInput("model is not a float network");
  NetworkDef net;
  net.recurrent = c.get_int("model/recurrent") != 0;
  net.w_in = c.get_matrix("weights/w_in");
  if (net.recurrent) net.v_rec = c.get_matrix("weights/v_rec");
  net.w_out = c.get_matrix("weights/w_out");
  net.lif_hidden = get_lif(c, "lif_hidden");
  net.lif_out = get_lif(c, "lif_out");
  net.validate();
  return net;
}

QuantizedNetwork quantized_from_container(const Container& c) {
  if (model_kind(c) != ModelKind::kQuantized) {
    throw InvalidInput("model is not a quantized network");
  }
  QuantizedNetwork q;
  q.recurrent = c.get_int("model/recurrent") != 0;
  q.time_bin_ms = c.get_scalar("model/time_bin_ms");
  q.w_in = narrow(c.get_int_matrix("weights/w_in"));
  if (q.recurrent) q.v_rec = narrow(c.get_int_matrix("weights/v_rec"));
  q.w_out = narrow(c.get_int_matrix("weights/w_out"));
  q.hidden = get_quant(c, "quant_hidden");
  q.output = get_quant(c, "quant_out");
  q.validate();
  return q;
}

void put_input_setup(Container& c, const InputSetup& s) {
  s.validate();
  c.put("input/threshold", s.threshold);
  c.put("input/time_bin_ms", s.time_bin_ms);
  c.put_int("input/nb_input_copies", s.nb_input_copies);
}

std::optional<InputSetup> get_input_setup(const Container& c) {
  if (!c.contains("input/threshold")) return std::nullopt;
  InputSetup s;
  s.threshold = c.get_scalar("input/threshold");
  s.time_bin_ms = c.get_scalar("input/time_bin_ms");
  s.nb_input_copies = static_cast<int>(c.get_int("input/nb_input_copies"));
  s.validate();
  return s;
}

void put_split(Container& c, const SplitInfo& s) {
  c.put_int("split/seed", static_cast<std::int64_t>(s.seed));
  c.put("split/test_fraction", s.test_fraction);
}

std::optional<SplitInfo> get_split(const Container& c) {
  if (!c.contains("split/seed")) return std::nullopt;
  return SplitInfo{static_cast<std::uint64_t>(c.get_int("split/seed")),
                   c.get_scalar("split/test_fraction")};
}

void save_network(const NetworkDef& net, const std::string& path) {
  to_container(net).save(path);
}

NetworkDef load_network(const std::string& path) {
  try {
    return network_from_container(Container::load(path));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

void save_quantized(const QuantizedNetwork& net, const std::string& path) {
  to_container(net).save(path);
}

QuantizedNetwork load_quantized(const std::string& path) {
  try {
    return quantized_from_container(Container::load(path));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

}  // namespace tactile
