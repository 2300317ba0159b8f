#include "hiercls/classifier.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hiercls/encoding.hpp"
#include "hiercls/error.hpp"
#include "hiercls/loss.hpp"

namespace hiercls {

using nlohmann::json;

std::size_t head_width(const Hierarchy& h, HeadKind head) {
    return head == HeadKind::Hierarchical ? h.size() : h.labeled().size();
}

namespace {

void check_model(const Hierarchy& h, const TrainedModel& m) {
    if (m.params.arch.output_dim != head_width(h, m.head))
        throw ShapeMismatch("model has " + std::to_string(m.params.arch.output_dim) + " outputs, " +
                            std::string(to_string(m.head)) + " head needs " + std::to_string(head_width(h, m.head)));
}

Prediction decide(const Hierarchy& h, HeadKind head, std::span<const double> out, PredictionMode mode) {
    if (head == HeadKind::Hierarchical) {
        const ConditionalScores cond{{out.begin(), out.end()}};
        return predict(h, cond, mode);
    }
    const auto classes = h.labeled();
    if (classes.empty()) throw EmptyCandidateSet();
    std::size_t best = 0;
    for (std::size_t c = 1; c < out.size(); ++c) {
        if (out[c] > out[best]) best = c;
    }
    return {classes[best], out[best]};
}

}  // namespace

Prediction classify(const Hierarchy& h, const TrainedModel& m, std::span<const double> x, PredictionMode mode) {
    check_model(h, m);
    const auto out = forward(m.params, x);
    return decide(h, m.head, out, mode);
}

std::vector<Prediction> classify_all(const Hierarchy& h, const TrainedModel& m, const Dataset& ds, PredictionMode mode) {
    check_model(h, m);
    const auto fp = forward_batch(m.params, ds.features.transpose());
    std::vector<Prediction> out;
    out.reserve(ds.size());
    for (Eigen::Index j = 0; j < fp.output.cols(); ++j) {
        const auto col = fp.output.col(j);
        out.push_back(decide(h, m.head, {col.data(), static_cast<std::size_t>(col.size())}, mode));
    }
    return out;
}

Evaluation evaluate(const Hierarchy& h, const TrainedModel& m, const Dataset& ds, PredictionMode mode) {
    if (ds.size() == 0) throw EmptyDataset();
    check_model(h, m);
    const auto fp = forward_batch(m.params, ds.features.transpose());
    const EncodingTable table(h);
    std::vector<std::size_t> slot(h.size(), 0);
    for (std::size_t c = 0; c < h.labeled().size(); ++c) slot[h.labeled()[c].index] = c;

    std::size_t correct = 0;
    double loss_sum = 0.0;
    for (Eigen::Index j = 0; j < fp.output.cols(); ++j) {
        const auto col = fp.output.col(j);
        const std::span<const double> out{col.data(), static_cast<std::size_t>(col.size())};
        const NodeId y = ds.labels[static_cast<std::size_t>(j)];
        if (decide(h, m.head, out, mode).node == y) ++correct;
        loss_sum += m.head == HeadKind::Hierarchical ? hierarchical_loss(table.encoding(y), table.mask(y), out).value
                                                     : onehot_loss(slot[y.index], out).value;
    }
    const double n = static_cast<double>(ds.size());
    return {static_cast<double>(correct) / n, loss_sum / n};
}

namespace {

constexpr const char* kFormatTag = "hiercls-model";
constexpr int kFormatVersion = 1;

std::string fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd json_vector(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string serialize_model(const Hierarchy& h, const TrainedModel& m) {
    check_model(h, m);
    check_shapes(m.params);
    json hier;
    hier["nodes"] = h.names();
    hier["edges"] = json::array();
    for (auto [c, p] : h.edges()) hier["edges"].push_back({h.name(c), h.name(p)});
    hier["labeled"] = json::array();
    for (NodeId s : h.labeled()) hier["labeled"].push_back(h.name(s));

    json layers = json::array();
    for (const auto& l : m.params.layers) {
        // Weights stored row by row.
        std::vector<double> w;
        w.reserve(static_cast<std::size_t>(l.weight.size()));
        for (Eigen::Index i = 0; i < l.weight.rows(); ++i)
            for (Eigen::Index k = 0; k < l.weight.cols(); ++k) w.push_back(l.weight(i, k));
        layers.push_back({{"rows", l.weight.rows()}, {"cols", l.weight.cols()}, {"weight", w}, {"bias", vector_json(l.bias)}});
    }

    json payload;
    payload["head"] = std::string(to_string(m.head));
    payload["architecture"] = {{"input_dim", m.params.arch.input_dim},
                               {"hidden", m.params.arch.hidden},
                               {"output_dim", m.params.arch.output_dim}};
    payload["hierarchy"] = std::move(hier);
    payload["standardization"] = {{"mean", vector_json(m.standardization.mean)},
                                  {"scale", vector_json(m.standardization.scale)}};
    payload["layers"] = std::move(layers);

    const std::string body = payload.dump();
    json doc;
    doc["format"] = kFormatTag;
    doc["version"] = kFormatVersion;
    doc["checksum"] = fnv1a64(body);
    doc["payload"] = std::move(payload);
    return doc.dump(1) + "\n";
}

LoadedModel deserialize_model(const std::string& text) {
    try {
        const json doc = json::parse(text);
        if (doc.at("format").get<std::string>() != kFormatTag) throw Error("not a hiercls model file");
        if (doc.at("version").get<int>() != kFormatVersion)
            throw Error("unsupported model file version " + std::to_string(doc.at("version").get<int>()));
        const json& payload = doc.at("payload");
        if (fnv1a64(payload.dump()) != doc.at("checksum").get<std::string>())
            throw ChecksumMismatch("model file checksum does not match its contents");

        const json& hj = payload.at("hierarchy");
        std::vector<NamedEdge> edges;
        for (const auto& e : hj.at("edges")) edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
        Hierarchy h = Hierarchy::build(hj.at("nodes").get<std::vector<std::string>>(), edges,
                                       hj.at("labeled").get<std::vector<std::string>>());

        TrainedModel m;
        m.head = parse_head_kind(payload.at("head").get<std::string>());
        const json& aj = payload.at("architecture");
        m.params.arch = {aj.at("input_dim").get<std::size_t>(), aj.at("hidden").get<std::size_t>(),
                         aj.at("output_dim").get<std::size_t>()};
        for (const auto& lj : payload.at("layers")) {
            const auto rows = lj.at("rows").get<Eigen::Index>();
            const auto cols = lj.at("cols").get<Eigen::Index>();
            const auto w = lj.at("weight").get<std::vector<double>>();
            if (static_cast<Eigen::Index>(w.size()) != rows * cols) throw ShapeMismatch("layer weight count mismatch");
            Layer l;
            l.weight = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                w.data(), rows, cols);
            l.bias = json_vector(lj.at("bias"));
            m.params.layers.push_back(std::move(l));
        }
        check_shapes(m.params);
        m.standardization.mean = json_vector(payload.at("standardization").at("mean"));
        m.standardization.scale = json_vector(payload.at("standardization").at("scale"));
        check_model(h, m);
        return {std::move(h), std::move(m)};
    } catch (const json::exception& e) {
        throw Error(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const std::string& path, const Hierarchy& h, const TrainedModel& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model file '" + path + "'");
    out << serialize_model(h, m);
}

LoadedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

}  // namespace hiercls
