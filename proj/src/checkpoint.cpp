#include "ginn/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

namespace ginn {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kFormatName = "ginn-checkpoint";
constexpr int kFormatVersion = 1;

json dict_to_json(const AdjacencyDict& d) {
    json out;
    out["keys"] = json::array();
    for (const auto& [i, j] : d.keys) out["keys"].push_back(json::array({i, j}));
    out["values"] = d.values;
    if (d.rowkeys_custom) out["rowkeys_custom"] = *d.rowkeys_custom;
    if (d.colkeys_custom) out["colkeys_custom"] = *d.colkeys_custom;
    if (d.keys_custom) {
        out["keys_custom"] = json::array();
        for (const auto& [i, j] : *d.keys_custom)
            out["keys_custom"].push_back(json::array({i, j}));
    }
    return out;
}

AdjacencyDict dict_from_json(const json& in) {
    AdjacencyDict d;
    for (const auto& pair : in.at("keys"))
        d.keys.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    d.values = in.at("values").get<std::vector<double>>();
    if (in.contains("rowkeys_custom"))
        d.rowkeys_custom = in["rowkeys_custom"].get<std::vector<int>>();
    if (in.contains("colkeys_custom"))
        d.colkeys_custom = in["colkeys_custom"].get<std::vector<int>>();
    if (in.contains("keys_custom")) {
        d.keys_custom = std::vector<std::pair<int, int>>();
        for (const auto& pair : in["keys_custom"])
            d.keys_custom->emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    }
    return d;
}

json layer_to_json(const GILayer& layer) {
    const GILayerConfig& cfg = layer.config();
    json out;
    out["config"] = {
        {"selfloop_value", cfg.selfloop_value},
        {"num_filters", cfg.num_filters},
        {"activation", to_string(cfg.activation)},
        {"use_bias", cfg.use_bias},
        {"pool", cfg.pool ? json(to_string(*cfg.pool)) : json(nullptr)},
    };
    out["num_features"] = layer.num_features();
    out["adjacency"] = dict_to_json(sparse2dict(layer.adjacency()));

    // Flat weights in (k, l, i) lexicographic order: exactly the (K, F, n1)
    // row-major storage.
    out["weights"] = std::vector<double>(layer.params().weights.data().begin(),
                                         layer.params().weights.data().end());
    // Biases in (j, l) order: the (n2, F) row-major storage.
    out["bias"] = std::vector<double>(layer.params().bias.data().begin(),
                                      layer.params().bias.data().end());
    return out;
}

GILayer layer_from_json(const json& in) {
    GILayerConfig cfg;
    const json& jcfg = in.at("config");
    cfg.selfloop_value = jcfg.at("selfloop_value").get<double>();
    cfg.num_filters = jcfg.at("num_filters").get<int>();
    cfg.activation = activation_from_string(jcfg.at("activation").get<std::string>());
    cfg.use_bias = jcfg.at("use_bias").get<bool>();
    if (!jcfg.at("pool").is_null())
        cfg.pool = pool_from_string(jcfg["pool"].get<std::string>());

    SparseAdjacency adj = from_dict(dict_from_json(in.at("adjacency")));

    GILayerParams params;
    params.num_features = in.at("num_features").get<int>();
    const auto weights = in.at("weights").get<std::vector<double>>();
    const auto bias = in.at("bias").get<std::vector<double>>();

    const std::size_t expect_w = static_cast<std::size_t>(params.num_features) *
                                 cfg.num_filters * adj.rows();
    const std::size_t expect_b = static_cast<std::size_t>(adj.cols()) * cfg.num_filters;
    if (weights.size() != expect_w)
        throw CheckpointError("weights array has " + std::to_string(weights.size()) +
                              " values, expected " + std::to_string(expect_w));
    if (bias.size() != expect_b)
        throw CheckpointError("bias array has " + std::to_string(bias.size()) +
                              " values, expected " + std::to_string(expect_b));

    params.weights = Tensor3(params.num_features, cfg.num_filters, adj.rows());
    std::copy(weights.begin(), weights.end(), params.weights.data().begin());
    params.bias = Matrix(adj.cols(), cfg.num_filters);
    std::copy(bias.begin(), bias.end(), params.bias.data().begin());

    return GILayer::restore(std::move(adj), cfg, std::move(params));
}

} // namespace

std::string checkpoint_to_string(const GinnModel& model) {
    json doc;
    doc["format"] = kFormatName;
    doc["version"] = kFormatVersion;
    doc["layers"] = json::array();
    for (std::size_t t = 0; t < model.layer_count(); ++t)
        doc["layers"].push_back(layer_to_json(model.layer(t)));
    return doc.dump(2) + "\n";
}

void save_checkpoint(const GinnModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw CheckpointError("cannot open " + path.string() + " for writing");
    out << checkpoint_to_string(model);
    if (!out)
        throw CheckpointError("failed writing " + path.string());
}

GinnModel checkpoint_from_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw CheckpointError(std::string("checkpoint is not valid JSON: ") + e.what());
    }
    try {
        if (!doc.contains("format") || doc["format"] != kFormatName)
            throw CheckpointError("missing or wrong format marker");
        if (!doc.contains("version") || doc["version"].get<int>() != kFormatVersion)
            throw CheckpointError("unsupported checkpoint version");
        GinnModel model;
        for (const auto& jlayer : doc.at("layers"))
            model.add_layer(layer_from_json(jlayer));
        if (model.layer_count() == 0)
            throw CheckpointError("checkpoint holds no layers");
        return model;
    } catch (const CheckpointError&) {
        throw;
    } catch (const json::exception& e) {
        throw CheckpointError(std::string("malformed checkpoint document: ") + e.what());
    } catch (const Error& e) {
        throw CheckpointError(std::string("inconsistent checkpoint content: ") + e.what());
    }
}

GinnModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CheckpointError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return checkpoint_from_string(text);
}

} // namespace ginn
