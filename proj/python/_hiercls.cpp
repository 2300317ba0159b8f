#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hiercls/hiercls.hpp"

namespace py = pybind11;
using namespace hiercls;

namespace {

std::vector<std::string> names_of(const Hierarchy& h, std::span<const NodeId> ids) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (NodeId s : ids) out.push_back(h.name(s));
    return out;
}

std::vector<int> as_ints(const std::vector<std::uint8_t>& bits) { return {bits.begin(), bits.end()}; }

py::tuple loss_tuple(const LossValue& v) { return py::make_tuple(v.value, v.gradient); }

Dataset make_dataset(const Hierarchy& h, const Eigen::Ref<const FeatureMatrix>& features,
                     const std::vector<std::string>& labels) {
    if (static_cast<std::size_t>(features.rows()) != labels.size())
        throw ShapeMismatch("features have " + std::to_string(features.rows()) + " rows but " +
                            std::to_string(labels.size()) + " labels were given");
    Dataset ds;
    ds.features = features;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!h.contains(labels[i]) || !h.is_labeled(h.id(labels[i]))) throw LabelNotInHierarchy(i + 1, labels[i]);
        ds.labels.push_back(h.id(labels[i]));
    }
    return ds;
}

TrainConfig train_config(const py::dict& kw) {
    TrainConfig cfg;
    for (const auto& [key, value] : kw) {
        const auto k = key.cast<std::string>();
        if (k == "hidden") cfg.hidden = value.cast<std::size_t>();
        else if (k == "optimizer") cfg.optimizer = parse_optimizer_kind(value.cast<std::string>());
        else if (k == "learning_rate") cfg.learning_rate = value.cast<double>();
        else if (k == "batch_size") cfg.batch_size = value.cast<std::size_t>();
        else if (k == "steps") cfg.steps = value.cast<std::uint64_t>();
        else if (k == "eval_interval") cfg.eval_interval = value.cast<std::uint64_t>();
        else if (k == "mode") cfg.mode = parse_prediction_mode(value.cast<std::string>());
        else throw InvalidConfig("unknown training option '" + k + "'");
    }
    validate(cfg);
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_hiercls, m) {
    m.doc() = "Hierarchical classification over class DAGs.";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DuplicateName>(m, "DuplicateName", error);
    py::register_exception<UnknownName>(m, "UnknownName", error);
    py::register_exception<SelfLoop>(m, "SelfLoop", error);
    py::register_exception<CycleDetected>(m, "CycleDetected", error);
    py::register_exception<ParseError>(m, "ParseError", error);
    py::register_exception<LengthMismatch>(m, "LengthMismatch", error);
    py::register_exception<IndexOutOfRange>(m, "IndexOutOfRange", error);
    py::register_exception<ShapeMismatch>(m, "ShapeMismatch", error);
    py::register_exception<EmptyCandidateSet>(m, "EmptyCandidateSet", error);
    py::register_exception<LabelNotInHierarchy>(m, "LabelNotInHierarchy", error);
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error);
    py::register_exception<EmptyDataset>(m, "EmptyDataset", error);
    py::register_exception<InvalidConfig>(m, "InvalidConfig", error);
    py::register_exception<GridMismatch>(m, "GridMismatch", error);
    py::register_exception<ChecksumMismatch>(m, "ChecksumMismatch", error);

    py::class_<Hierarchy>(m, "Hierarchy")
        .def(py::init(&Hierarchy::build), py::arg("nodes"), py::arg("edges"), py::arg("labeled"))
        .def_static("parse", [](const std::string& text) { return parse_hierarchy(text); }, py::arg("text"))
        .def_static("load", &load_hierarchy, py::arg("path"))
        .def("serialize", [](const Hierarchy& h) { return serialize_hierarchy(h); })
        .def("save", [](const Hierarchy& h, const std::string& path) { save_hierarchy(h, path); }, py::arg("path"))
        .def("__len__", &Hierarchy::size)
        .def("__contains__", [](const Hierarchy& h, const std::string& n) { return h.contains(n); })
        .def_property_readonly("names", &Hierarchy::names)
        .def_property_readonly("edge_count", &Hierarchy::edge_count)
        .def("index", [](const Hierarchy& h, const std::string& n) { return h.id(n).index; }, py::arg("name"))
        .def("parents", [](const Hierarchy& h, const std::string& n) { return names_of(h, h.parents(h.id(n))); })
        .def("children", [](const Hierarchy& h, const std::string& n) { return names_of(h, h.children(h.id(n))); })
        .def("ancestors",
             [](const Hierarchy& h, const std::string& n) {
                 std::vector<std::string> out;
                 const auto& bits = h.ancestors(h.id(n));
                 for (auto i = bits.find_first(); i != bits.npos; i = bits.find_next(i)) out.push_back(h.name(NodeId{i}));
                 return out;
             })
        .def("is_ancestor",
             [](const Hierarchy& h, const std::string& d, const std::string& a) { return h.is_ancestor(h.id(d), h.id(a)); },
             py::arg("descendant"), py::arg("ancestor"))
        .def_property_readonly("labeled", [](const Hierarchy& h) { return names_of(h, h.labeled()); })
        .def_property_readonly("roots", [](const Hierarchy& h) { return names_of(h, h.roots()); })
        .def_property_readonly("leaves", [](const Hierarchy& h) { return names_of(h, h.leaves()); })
        .def_property_readonly("topo_order", [](const Hierarchy& h) { return names_of(h, h.topo_order()); })
        .def("equivalent", &Hierarchy::equivalent, py::arg("other"));

    m.def("encode_label", [](const Hierarchy& h, const std::string& y) { return as_ints(encode_label(h, h.id(y)).values); },
          py::arg("hierarchy"), py::arg("label"));
    m.def("loss_mask", [](const Hierarchy& h, const std::string& y) { return as_ints(loss_mask(h, h.id(y)).values); },
          py::arg("hierarchy"), py::arg("label"));
    m.def(
        "hierarchical_loss",
        [](const std::vector<std::uint8_t>& enc, const std::vector<std::uint8_t>& mask, const std::vector<double>& out) {
            return loss_tuple(hierarchical_loss(LabelEncoding{enc}, LossMask{mask}, out));
        },
        py::arg("encoding"), py::arg("mask"), py::arg("outputs"));
    m.def("onehot_loss", [](std::size_t target, const std::vector<double>& out) { return loss_tuple(onehot_loss(target, out)); },
          py::arg("target"), py::arg("outputs"));

    m.def("noisy_or", [](const std::vector<double>& p) { return noisy_or(p); }, py::arg("probabilities"));
    m.def("marginals", [](const Hierarchy& h, std::vector<double> cond) { return marginals(h, {std::move(cond)}).values; },
          py::arg("hierarchy"), py::arg("conditionals"));
    m.def(
        "prediction_scores",
        [](const Hierarchy& h, std::vector<double> cond) {
            const ConditionalScores c{std::move(cond)};
            return prediction_scores(h, c, marginals(h, c));
        },
        py::arg("hierarchy"), py::arg("conditionals"));
    m.def(
        "predict",
        [](const Hierarchy& h, std::vector<double> cond, const std::string& mode) {
            const auto p = predict(h, {std::move(cond)}, parse_prediction_mode(mode));
            return py::make_tuple(h.name(p.node), p.score);
        },
        py::arg("hierarchy"), py::arg("conditionals"), py::arg("mode") = "mlnp");

    m.def(
        "generate_synthetic",
        [](std::size_t depth, std::size_t branching, std::size_t samples_per_leaf, std::size_t dim, double sigma0,
           double level_decay, double sigma_obs, std::uint64_t seed) {
            const auto data = generate_synthetic({depth, branching, samples_per_leaf, dim, sigma0, level_decay, sigma_obs, seed});
            std::vector<std::string> labels;
            for (NodeId y : data.dataset.labels) labels.push_back(data.hierarchy.name(y));
            return py::make_tuple(data.hierarchy, data.dataset.features, labels);
        },
        py::arg("depth") = 3, py::arg("branching") = 3, py::arg("samples_per_leaf") = 100, py::arg("dim") = 32,
        py::arg("sigma0") = 1.0, py::arg("level_decay") = 0.5, py::arg("sigma_obs") = 1.0, py::arg("seed") = 0);

    py::class_<LoadedModel>(m, "Model")
        .def_static("load", &load_model, py::arg("path"))
        .def("save", [](const LoadedModel& lm, const std::string& path) { save_model(path, lm.hierarchy, lm.model); })
        .def_property_readonly("hierarchy", [](const LoadedModel& lm) { return lm.hierarchy; })
        .def_property_readonly("head", [](const LoadedModel& lm) { return std::string(to_string(lm.model.head)); })
        .def(
            "classify",
            [](const LoadedModel& lm, const Eigen::Ref<const FeatureMatrix>& features, const std::string& mode) {
                Dataset ds;
                ds.features = features;
                ds.labels.assign(static_cast<std::size_t>(features.rows()), NodeId{});
                ds = apply_standardization(std::move(ds), lm.model.standardization);
                py::list out;
                for (const auto& p : classify_all(lm.hierarchy, lm.model, ds, parse_prediction_mode(mode)))
                    out.append(py::make_tuple(lm.hierarchy.name(p.node), p.score));
                return out;
            },
            py::arg("features"), py::arg("mode") = "mlnp");

    m.def(
        "train",
        [](const Hierarchy& h, const Eigen::Ref<const FeatureMatrix>& features, const std::vector<std::string>& labels,
           const std::string& head, std::uint64_t seed, const py::kwargs& kw) {
            const auto cfg = train_config(kw);
            auto result =
                train_epochs(cfg, standardize(make_dataset(h, features, labels)), std::nullopt, h, parse_head_kind(head), seed);
            return py::make_tuple(LoadedModel{h, std::move(result.model)}, metrics_csv({result.metrics}));
        },
        py::arg("hierarchy"), py::arg("features"), py::arg("labels"), py::arg("head") = "hierarchical",
        py::arg("seed") = 0);

    m.def(
        "compute_speedup",
        [](const std::string& metrics_text) {
            const auto runs = parse_metrics_csv(metrics_text);
            std::vector<RunMetrics> base, hier;
            for (const auto& r : runs) (r.method == HeadKind::Baseline ? base : hier).push_back(r);
            const auto rep = compute_speedup(average_runs(hier), average_runs(base));
            py::dict d;
            d["baseline_final_accuracy"] = rep.baseline_final_accuracy;
            d["hierarchical_final_accuracy"] = rep.hierarchical_final_accuracy;
            d["overall_speedup"] = rep.overall_speedup;
            d["initial_speedup"] = rep.initial_speedup;
            return d;
        },
        py::arg("metrics_csv"));

    m.def(
        "run_comparison",
        [](const std::string& config_text, const std::vector<std::uint64_t>& seeds) {
            const auto cfg = parse_bench_config(config_text);
            const auto r = run_comparison(cfg, seeds);
            py::dict d;
            d["metrics_csv"] = metrics_csv(r.runs);
            d["report"] = format_report(cfg, r);
            d["report_csv"] = report_csv(r);
            d["speedup_table_csv"] = speedup_table_csv(r.report);
            py::list modes;
            for (const auto& mc : r.modes) modes.append(py::make_tuple(mc.seed, mc.mlnp_accuracy, mc.anp_accuracy));
            d["modes"] = modes;
            return d;
        },
        py::arg("config") = "", py::arg("seeds") = std::vector<std::uint64_t>{1, 2, 3});
}
