#include <fstream>

#include <json.hpp>

#include "perfsage/errors.hpp"
#include "perfsage/models.hpp"

namespace perfsage::models {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json config_to_json(const ModelConfig& c) {
    return {{"family", to_string(c.family)},
            {"hidden_widths", c.hidden_widths},
            {"learning_rate", c.learning_rate},
            {"epochs", c.epochs},
            {"seed", c.seed},
            {"unconstrained", c.unconstrained},
            {"log_target", c.log_target},
            {"forest_trees", c.forest_trees},
            {"forest_depth", c.forest_depth}};
}

ModelConfig config_from_json(const json& j) {
    ModelConfig c;
    c.family = family_from_string(j.at("family").get<std::string>());
    c.hidden_widths = j.at("hidden_widths").get<std::vector<int>>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.epochs = j.at("epochs").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.unconstrained = j.at("unconstrained").get<bool>();
    c.log_target = j.at("log_target").get<bool>();
    c.forest_trees = j.at("forest_trees").get<int>();
    c.forest_depth = j.at("forest_depth").get<int>();
    return c;
}

json payload_to_json(const TrainedModel& m) {
    json j;
    if (const auto* net = std::get_if<Mlp>(&m.payload)) {
        json layers = json::array();
        for (const auto& l : net->layers)
            layers.push_back({{"rows", l.out}, {"cols", l.in}, {"weights", l.w},
                              {"biases", l.b}});
        j["layers"] = std::move(layers);
    } else if (const auto* lin = std::get_if<LinearModel>(&m.payload)) {
        j["linear"] = {{"weights", lin->weights}, {"intercept", lin->intercept}};
    } else {
        const auto& forest = std::get<Forest>(m.payload);
        json trees = json::array();
        for (const auto& t : forest.trees) {
            json nodes = json::array();
            for (const auto& n : t.nodes)
                nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold},
                                 {"left", n.left}, {"right", n.right},
                                 {"value", n.value}});
            trees.push_back(std::move(nodes));
        }
        j["forest"] = std::move(trees);
    }
    return j;
}

void payload_from_json(const json& j, TrainedModel& m) {
    if (j.contains("layers")) {
        Mlp net;
        for (const auto& lj : j.at("layers")) {
            DenseLayer l;
            l.out = lj.at("rows").get<int>();
            l.in = lj.at("cols").get<int>();
            l.w = lj.at("weights").get<std::vector<double>>();
            l.b = lj.at("biases").get<std::vector<double>>();
            if (l.w.size() != static_cast<std::size_t>(l.in) * l.out ||
                l.b.size() != static_cast<std::size_t>(l.out))
                throw LoadError("layer shape does not match its weight payload");
            net.layers.push_back(std::move(l));
        }
        if (net.layers.empty()) throw LoadError("model has no layers");
        m.payload = std::move(net);
    } else if (j.contains("linear")) {
        LinearModel lin;
        lin.weights = j.at("linear").at("weights").get<std::vector<double>>();
        lin.intercept = j.at("linear").at("intercept").get<double>();
        m.payload = std::move(lin);
    } else if (j.contains("forest")) {
        Forest forest;
        for (const auto& tj : j.at("forest")) {
            Tree t;
            for (const auto& nj : tj) {
                TreeNode n;
                n.feature = nj.at("feature").get<int>();
                n.threshold = nj.at("threshold").get<double>();
                n.left = nj.at("left").get<int>();
                n.right = nj.at("right").get<int>();
                n.value = nj.at("value").get<double>();
                t.nodes.push_back(n);
            }
            if (t.nodes.empty()) throw LoadError("forest tree has no nodes");
            forest.trees.push_back(std::move(t));
        }
        if (forest.trees.empty()) throw LoadError("forest has no trees");
        m.payload = std::move(forest);
    } else {
        throw LoadError("model payload missing (expected layers, linear, or forest)");
    }
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
    json j;
    j["format"] = "perfsage-model";
    j["version"] = kFormatVersion;
    j["family"] = to_string(model.config.family);
    j["kernel"] = kernels::to_string(model.kind);
    j["schema"] = model.schema;
    j["config"] = config_to_json(model.config);
    j["norm_stats"] = {{"f_min", model.norm.f_min},
                       {"f_max", model.norm.f_max},
                       {"t_min", model.norm.t_min},
                       {"t_max", model.norm.t_max},
                       {"log_target", model.norm.log_target}};
    j["payload"] = payload_to_json(model);
    json metrics;
    if (std::holds_alternative<Mlp>(model.payload)) {
        metrics["param_count"] = param_count(model);
        if (!model.loss_trace.empty()) metrics["final_loss"] = model.loss_trace.back();
        metrics["loss_trace"] = model.loss_trace;
    }
    j["metrics"] = std::move(metrics);

    std::ofstream os(path, std::ios::binary);
    if (!os) throw LoadError("cannot open '" + path + "' for writing");
    os << j.dump(2) << '\n';
    if (!os) throw LoadError("write to '" + path + "' failed");
}

TrainedModel load_model(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw LoadError("cannot open '" + path + "'");
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw LoadError("'" + path + "' is not a valid model file: " + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "perfsage-model")
            throw LoadError("'" + path + "' is not a perfsage model file");
        if (j.at("version").get<int>() != kFormatVersion)
            throw LoadError("'" + path + "' has unsupported model version " +
                            std::to_string(j.at("version").get<int>()));
        TrainedModel m;
        m.config = config_from_json(j.at("config"));
        m.kind = kernels::kind_from_string(j.at("kernel").get<std::string>());
        m.schema = j.at("schema").get<std::vector<std::string>>();
        m.norm.f_min = j.at("norm_stats").at("f_min").get<std::vector<double>>();
        m.norm.f_max = j.at("norm_stats").at("f_max").get<std::vector<double>>();
        m.norm.t_min = j.at("norm_stats").at("t_min").get<double>();
        m.norm.t_max = j.at("norm_stats").at("t_max").get<double>();
        m.norm.log_target = j.at("norm_stats").at("log_target").get<bool>();
        payload_from_json(j.at("payload"), m);
        if (j.at("metrics").contains("loss_trace"))
            m.loss_trace = j.at("metrics").at("loss_trace").get<std::vector<double>>();
        return m;
    } catch (const json::exception& e) {
        throw LoadError("'" + path + "' is missing model fields: " + e.what());
    }
}

}  // namespace perfsage::models
