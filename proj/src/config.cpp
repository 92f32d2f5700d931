/*
 * Copyright 2026 The pragsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pragsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pragsim/error.hpp"

namespace pragsim {

using nlohmann::json;

std::string EngineVariant::label() const {
    switch (kind) {
        case EngineKind::DaDN: return "DaDN";
        case EngineKind::Stripes: return "STR";
        case EngineKind::Pragmatic: return pragsim::label(prag);
    }
    return "?";
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw SimError(ErrorCode::ConfigError, field + ": " + why);
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

int get_int(const json& obj, const char* key, const std::string& path, std::optional<int> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "required integer missing");
    }
    if (!v->is_number_integer()) fail(path + "." + key, "expected an integer");
    const auto x = v->get<std::int64_t>();
    if (x < INT32_MIN || x > INT32_MAX) fail(path + "." + key, "integer out of range");
    return static_cast<int>(x);
}

double get_double(const json& obj, const char* key, const std::string& path, std::optional<double> fallback) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "required number missing");
    }
    if (!v->is_number()) fail(path + "." + key, "expected a number");
    return v->get<double>();
}

bool get_bool(const json& obj, const char* key, const std::string& path, bool fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(path + "." + key, "expected true or false");
    return v->get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& path,
                       std::optional<std::string> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "required string missing");
    }
    if (!v->is_string()) fail(path + "." + key, "expected a string");
    return v->get<std::string>();
}

// Accepts a scalar or a list; the grid expands lists.
std::vector<json> as_list(const json& obj, const char* key, const json& fallback) {
    const json* v = find(obj, key);
    const json& src = v ? *v : fallback;
    if (src.is_array()) {
        if (src.empty()) return {};
        return std::vector<json>(src.begin(), src.end());
    }
    return {src};
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : obj.items()) {
        if (!ok.count(item.key())) fail(path + "." + item.key(), "unknown key");
    }
}

LayerConfig parse_layer(const json& j, const std::string& path, int width) {
    check_keys(j, path,
               {"name", "nx", "ny", "i", "n", "fx", "fy", "stride", "pad", "act", "out_shift", "precision",
                "precision_bits", "precision_lsb", "quant", "first"});
    LayerConfig lc;
    lc.name = get_string(j, "name", path);
    if (lc.name.empty() || lc.name.find_first_of(",/\\\n\"") != std::string::npos) {
        fail(path + ".name", "must be nonempty without ',', '/', '\\', quotes or newlines");
    }
    auto& s = lc.spec;
    s.nx = get_int(j, "nx", path);
    s.ny = get_int(j, "ny", path);
    s.i = get_int(j, "i", path);
    s.n = get_int(j, "n", path);
    s.fx = get_int(j, "fx", path);
    s.fy = get_int(j, "fy", path, s.fx);
    s.s = get_int(j, "stride", path, 1);
    s.pad = get_int(j, "pad", path, 0);
    s.out_shift = get_int(j, "out_shift", path, 0);
    for (auto [key, v] : {std::pair{"nx", s.nx}, {"ny", s.ny}, {"i", s.i}, {"n", s.n}, {"fx", s.fx}, {"fy", s.fy}}) {
        if (v <= 0) fail(path + "." + key, "must be positive");
    }
    if (s.s < 1) fail(path + ".stride", "must be >= 1");
    if (s.pad < 0) fail(path + ".pad", "must be >= 0");
    if (s.out_shift < 0 || s.out_shift > 47) fail(path + ".out_shift", "must lie in [0, 47]");
    const std::string act = get_string(j, "act", path, std::string("relu"));
    if (act == "relu") {
        s.act = Activation::Relu;
    } else if (act == "identity") {
        s.act = Activation::Identity;
    } else {
        fail(path + ".act", "expected \"relu\" or \"identity\"");
    }
    try {
        (void)output_dims(with_brick_depth(s));
    } catch (const SimError& e) {
        fail(path, e.what());
    }

    if (const json* p = find(j, "precision")) {
        if (find(j, "precision_bits")) fail(path + ".precision_bits", "conflicts with precision");
        check_keys(*p, path + ".precision", {"msb", "lsb"});
        PrecisionWindow w{get_int(*p, "msb", path + ".precision"), get_int(*p, "lsb", path + ".precision", 0)};
        if (w.lsb < 0 || w.msb < w.lsb || w.msb >= width) fail(path + ".precision", "window outside container");
        lc.precision = w;
    } else if (find(j, "precision_bits")) {
        const int bits = get_int(j, "precision_bits", path);
        const int lsb = get_int(j, "precision_lsb", path, 0);
        PrecisionWindow w{lsb + bits - 1, lsb};
        if (bits < 1 || w.lsb < 0 || w.msb >= width) fail(path + ".precision_bits", "window outside container");
        lc.precision = w;
    }
    if (const json* q = find(j, "quant")) {
        check_keys(*q, path + ".quant", {"vmin", "vmax"});
        QuantParams qp{get_double(*q, "vmin", path + ".quant", std::nullopt),
                       get_double(*q, "vmax", path + ".quant", std::nullopt)};
        if (!(qp.vmax > qp.vmin)) fail(path + ".quant", "requires vmin < vmax");
        lc.quant = qp;
    }
    lc.first = get_bool(j, "first", path, false);
    return lc;
}

std::optional<int> parse_count(const json& v, const std::string& path) {
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "unbounded")) return std::nullopt;
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1 || v.get<std::int64_t>() > 1 << 20) {
        fail(path, "expected a positive integer or \"inf\"");
    }
    return v.get<int>();
}

void parse_engine(const json& j, const std::string& path, std::vector<EngineVariant>& out) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::string type = get_string(j, "type", path);
    if (type == "dadn") {
        check_keys(j, path, {"type"});
        out.push_back({EngineKind::DaDN, {}});
        return;
    }
    if (type == "stripes") {
        check_keys(j, path, {"type"});
        out.push_back({EngineKind::Stripes, {}});
        return;
    }
    if (type != "pragmatic") fail(path + ".type", "expected \"dadn\", \"stripes\" or \"pragmatic\"");
    check_keys(j, path, {"type", "l_bits", "sync", "ssrs", "pallet_buffer", "trim"});

    std::vector<TrimMode> trims;
    for (const auto& v : as_list(j, "trim", "none")) {
        if (v == "none") {
            trims.push_back(TrimMode::None);
        } else if (v == "profile") {
            trims.push_back(TrimMode::Profile);
        } else {
            fail(path + ".trim", "expected \"none\" or \"profile\"");
        }
    }
    std::vector<SyncMode> syncs;
    for (const auto& v : as_list(j, "sync", "pallet")) {
        if (v == "pallet") {
            syncs.push_back(SyncMode::Pallet);
        } else if (v == "column") {
            syncs.push_back(SyncMode::Column);
        } else {
            fail(path + ".sync", "expected \"pallet\" or \"column\"");
        }
    }
    std::vector<int> lbits;
    for (const auto& v : as_list(j, "l_bits", 4)) {
        if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() > kMaxLBits) {
            fail(path + ".l_bits", "expected integers in 0..4");
        }
        lbits.push_back(v.get<int>());
    }
    std::vector<std::optional<int>> ssrs;
    for (const auto& v : as_list(j, "ssrs", 1)) ssrs.push_back(parse_count(v, path + ".ssrs"));
    std::optional<int> buffer = 2;
    if (const json* b = find(j, "pallet_buffer")) buffer = parse_count(*b, path + ".pallet_buffer");
    if (trims.empty() || syncs.empty() || lbits.empty() || ssrs.empty()) fail(path, "empty parameter list");

    for (TrimMode t : trims)
        for (SyncMode s : syncs)
            for (int l : lbits) {
                if (s == SyncMode::Pallet) {
                    out.push_back({EngineKind::Pragmatic, PragConfig{l, s, std::nullopt, buffer, t}});
                    continue;
                }
                for (const auto& r : ssrs) out.push_back({EngineKind::Pragmatic, PragConfig{l, s, r, buffer, t}});
            }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SimError(ErrorCode::ConfigError, std::string("config: malformed JSON: ") + e.what());
    }
    check_keys(root, "config",
               {"seed", "width", "trace", "signed", "synapse_sigma", "layers", "engines", "output"});

    ExperimentConfig cfg;
    if (const json* s = find(root, "seed")) {
        if (!s->is_number_unsigned()) fail("seed", "expected a nonnegative integer");
        cfg.seed = s->get<std::uint64_t>();
    }
    cfg.width = get_int(root, "width", "config", 16);
    if (cfg.width != 8 && cfg.width != 16) fail("width", "expected 8 or 16");
    cfg.synapse_sigma = get_double(root, "synapse_sigma", "config", 64.0);
    if (!(cfg.synapse_sigma > 0.0)) fail("synapse_sigma", "must be positive");
    if (const json* s = find(root, "signed")) {
        if (!s->is_boolean()) fail("signed", "expected true or false");
        cfg.signed_neurons = s->get<bool>();
        if (cfg.width == 8 && *cfg.signed_neurons) fail("signed", "8-bit codes are unsigned");
    }

    const json* tr = find(root, "trace");
    if (!tr) fail("trace", "required object missing");
    const std::string kind = get_string(*tr, "kind", "trace");
    if (kind == "synthetic") {
        check_keys(*tr, "trace", {"kind", "sigma", "relu"});
        SyntheticTrace st{get_double(*tr, "sigma", "trace", std::nullopt), get_bool(*tr, "relu", "trace", true)};
        if (!(st.sigma > 0.0)) fail("trace.sigma", "must be positive");
        cfg.trace = st;
    } else if (kind == "file") {
        check_keys(*tr, "trace", {"kind", "path"});
        cfg.trace = FileTrace{base_dir / get_string(*tr, "path", "trace")};
    } else {
        fail("trace.kind", "expected \"synthetic\" or \"file\"");
    }

    const json* layers = find(root, "layers");
    if (!layers || !layers->is_array() || layers->empty()) fail("layers", "expected a nonempty list");
    std::set<std::string> names;
    for (std::size_t k = 0; k < layers->size(); ++k) {
        const std::string path = "layers[" + std::to_string(k) + "]";
        cfg.layers.push_back(parse_layer((*layers)[k], path, cfg.width));
        if (!names.insert(cfg.layers.back().name).second) fail(path + ".name", "duplicate layer name");
    }
    bool any_first = false;
    for (const auto& l : cfg.layers) any_first = any_first || l.first;
    if (!any_first) cfg.layers.front().first = true;

    const json* engines = find(root, "engines");
    if (!engines || !engines->is_array() || engines->empty()) fail("engines", "expected a nonempty list");
    for (std::size_t k = 0; k < engines->size(); ++k) {
        parse_engine((*engines)[k], "engines[" + std::to_string(k) + "]", cfg.engines);
    }

    bool needs_profile = false;
    for (const auto& e : cfg.engines) {
        needs_profile = needs_profile || e.kind == EngineKind::Stripes ||
                        (e.kind == EngineKind::Pragmatic && e.prag.trim == TrimMode::Profile);
    }
    if (needs_profile) {
        for (std::size_t k = 0; k < cfg.layers.size(); ++k) {
            if (!cfg.layers[k].precision) {
                fail("layers[" + std::to_string(k) + "].precision", "required by STR and trimmed PRA engines");
            }
        }
    }

    if (const json* out = find(root, "output")) {
        check_keys(*out, "output", {"csv", "terms_csv"});
        if (find(*out, "csv")) cfg.csv_path = base_dir / get_string(*out, "csv", "output");
        if (find(*out, "terms_csv")) cfg.terms_csv_path = base_dir / get_string(*out, "terms_csv", "output");
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SimError(ErrorCode::ConfigError, "config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

NeuronFormat neuron_format(const ExperimentConfig& cfg) {
    if (cfg.width == 8) return kUnsigned8;
    if (cfg.signed_neurons) return *cfg.signed_neurons ? kSigned16 : kUnsigned16;
    if (const auto* st = std::get_if<SyntheticTrace>(&cfg.trace)) return st->relu ? kUnsigned16 : kSigned16;
    return kSigned16;
}

}  // namespace pragsim
